"""Finite groups, crossed modules and their strict 2-groups.

Groups are raw multiplication tables over indices ``0..n-1`` with ``0`` the
identity. A crossed module ``chi: E -> H`` is stored as the index map ``chi``
plus the table ``action[x][e]`` of the left action of ``H`` on ``E``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from loguru import logger

from crossed_kuperberg.errors import DimensionMismatch, InvalidCrossedModule, InvalidInput, Report

EXHAUSTIVE_ASSOCIATIVITY_LIMIT = 64
ASSOCIATIVITY_SAMPLES = 20000


@dataclass(frozen=True)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] | None = None
    inverses: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        table = tuple(tuple(int(v) for v in row) for row in self.table)
        n = len(table)
        if n == 0:
            raise InvalidInput("a group has at least one element")
        for row in table:
            if len(row) != n:
                raise DimensionMismatch(f"multiplication table is not {n}x{n}")
            for v in row:
                if not 0 <= v < n:
                    raise InvalidInput(f"table entry {v} out of range 0..{n - 1}")
        object.__setattr__(self, "table", table)
        if self.names is not None:
            names = tuple(str(s) for s in self.names)
            if len(names) != n:
                raise DimensionMismatch(f"{len(names)} names for a group of order {n}")
            object.__setattr__(self, "names", names)
        inverses = []
        for a in range(n):
            inv = next((b for b in range(n) if table[a][b] == 0 and table[b][a] == 0), -1)
            inverses.append(inv)
        object.__setattr__(self, "inverses", tuple(inverses))

    @property
    def order(self) -> int:
        return len(self.table)

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def prod(self, items: Iterable[int]) -> int:
        out = 0
        for a in items:
            out = self.table[out][a]
        return out

    def power(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        out = 0
        for _ in range(n):
            out = self.table[out][a]
        return out

    def conj(self, g: int, a: int) -> int:
        """g a g^-1"""
        return self.table[self.table[g][a]][self.inverses[g]]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(a + 1, n))

    def center(self) -> tuple[int, ...]:
        n = self.order
        return tuple(a for a in range(n) if all(self.table[a][b] == self.table[b][a] for b in range(n)))

    def is_normal(self, subset: Iterable[int]) -> bool:
        s = set(subset)
        return all(self.conj(g, a) in s for g in self.elements() for a in s)

    def name_of(self, a: int) -> str:
        return self.names[a] if self.names else str(a)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"

    @classmethod
    def from_function(
        cls, elements: Sequence[Hashable], op: Callable[[Hashable, Hashable], Hashable], names: Sequence[str] | None = None
    ) -> "FiniteGroup":
        """Tabulate a group given concretely. ``elements[0]`` must be the identity."""
        index = {e: i for i, e in enumerate(elements)}
        try:
            table = tuple(tuple(index[op(a, b)] for b in elements) for a in elements)
        except KeyError as exc:
            raise InvalidInput(f"operation leaves the element list: {exc}") from exc
        return cls(table, tuple(names) if names else tuple(str(e) for e in elements))


def check_group(G: FiniteGroup, seed: int = 0) -> Report:
    report = Report()
    n = G.order
    t = G.table
    if any(t[0][a] != a or t[a][0] != a for a in range(n)):
        report.add("identity", "element 0 is not a two-sided identity")
    for a in range(n):
        if len(set(t[a])) != n or len({t[b][a] for b in range(n)}) != n:
            report.add("latin", f"row or column {a} of the table is not a permutation")
    for a in range(n):
        if G.inverses[a] < 0:
            report.add("inverse", f"element {G.name_of(a)} has no two-sided inverse")
    if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT:
        triples: Iterable[tuple[int, int, int]] = itertools.product(range(n), repeat=3)
    else:
        rng = random.Random(seed)
        triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(ASSOCIATIVITY_SAMPLES))
    for a, b, c in triples:
        if t[t[a][b]][c] != t[a][t[b][c]]:
            report.add("associativity", f"({a}{b}){c} != {a}({b}{c}) for ({a}, {b}, {c})")
            break
    return report


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise InvalidInput("cyclic group order must be positive")
    return FiniteGroup(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)), tuple(f"{a}" for a in range(n)))


def trivial_group() -> FiniteGroup:
    return cyclic(1)


def symmetric(n: int) -> FiniteGroup:
    """Permutations of ``0..n-1`` under composition (p*q)(i) = p(q(i))."""
    perms = sorted(itertools.permutations(range(n)))
    names = ["".join(str(i + 1) for i in p) for p in perms]
    return FiniteGroup.from_function(perms, lambda p, q: tuple(p[q[i]] for i in range(n)), names)


def direct_product(G: FiniteGroup, K: FiniteGroup) -> FiniteGroup:
    pairs = [(g, k) for g in G.elements() for k in K.elements()]
    names = [f"({G.name_of(g)},{K.name_of(k)})" for g, k in pairs]
    return FiniteGroup.from_function(pairs, lambda a, b: (G.mul(a[0], b[0]), K.mul(a[1], b[1])), names)


def subgroup(G: FiniteGroup, elements: Iterable[int]) -> tuple[FiniteGroup, tuple[int, ...]]:
    """Re-index a subset closed under multiplication; returns (group, embedding)."""
    elems = sorted(set(elements) | {0})
    index = {g: i for i, g in enumerate(elems)}
    try:
        table = tuple(tuple(index[G.mul(a, b)] for b in elems) for a in elems)
    except KeyError as exc:
        raise InvalidInput(f"subset is not closed under multiplication: {exc}") from exc
    return FiniteGroup(table, tuple(G.name_of(g) for g in elems)), tuple(elems)


def quotient(G: FiniteGroup, normal: Iterable[int]) -> tuple[FiniteGroup, tuple[int, ...]]:
    """G/N with cosets ordered by smallest member; returns (group, quotient map)."""
    N = sorted(set(normal))
    coset_of = [-1] * G.order
    reps: list[int] = []
    for g in G.elements():
        if coset_of[g] >= 0:
            continue
        idx = len(reps)
        reps.append(g)
        for h in N:
            coset_of[G.mul(g, h)] = idx
    table = tuple(tuple(coset_of[G.mul(a, b)] for b in reps) for a in reps)
    return FiniteGroup(table, tuple(f"{G.name_of(r)}N" for r in reps)), tuple(coset_of)


@dataclass(frozen=True)
class CrossedModule:
    E: FiniteGroup
    H: FiniteGroup
    chi: tuple[int, ...]
    action: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        chi = tuple(int(v) for v in self.chi)
        action = tuple(tuple(int(v) for v in row) for row in self.action)
        if len(chi) != self.E.order:
            raise DimensionMismatch(f"chi has {len(chi)} entries, E has order {self.E.order}")
        if any(not 0 <= v < self.H.order for v in chi):
            raise InvalidInput("chi maps outside H")
        if len(action) != self.H.order or any(len(row) != self.E.order for row in action):
            raise DimensionMismatch("action table must be |H| x |E|")
        if any(not 0 <= v < self.E.order for row in action for v in row):
            raise InvalidInput("action maps outside E")
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "action", action)

    def act(self, x: int, e: int) -> int:
        """The left action ^x e."""
        return self.action[x][e]

    def image(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.chi)))

    def kernel(self) -> tuple[int, ...]:
        return tuple(e for e in self.E.elements() if self.chi[e] == 0)

    def is_trivial(self) -> bool:
        return self.E.order == 1 and self.H.order == 1


def check_crossed_module(cm: CrossedModule) -> Report:
    report = Report()
    for label, G in (("E", cm.E), ("H", cm.H)):
        for v in check_group(G):
            report.add(f"{label}.{v.code}", v.message)
    if report:
        return report
    E, H, chi = cm.E, cm.H, cm.chi
    if chi[0] != 0:
        report.add("chi-homomorphism", "chi(1) != 1")
    for e in E.elements():
        for f in E.elements():
            if chi[E.mul(e, f)] != H.mul(chi[e], chi[f]):
                report.add("chi-homomorphism", f"chi({e}*{f}) != chi({e})chi({f})")
                break
        else:
            continue
        break
    if cm.action[0] != tuple(E.elements()):
        report.add("action-unit", "the identity of H does not act trivially")
    for x in H.elements():
        row = cm.action[x]
        if sorted(row) != list(E.elements()) or any(
            row[E.mul(e, f)] != E.mul(row[e], row[f]) for e in E.elements() for f in E.elements()
        ):
            report.add("action-automorphism", f"action of {H.name_of(x)} is not an automorphism of E")
    for x in H.elements():
        for y in H.elements():
            xy = H.mul(x, y)
            if any(cm.action[xy][e] != cm.action[x][cm.action[y][e]] for e in E.elements()):
                report.add("action-composition", f"^({x}{y}) != ^{x} ^{y}")
    for x in H.elements():
        for e in E.elements():
            if chi[cm.act(x, e)] != H.conj(x, chi[e]):
                report.add("equivariance", f"chi(^{H.name_of(x)} {E.name_of(e)}) != x chi(e) x^-1")
    for e in E.elements():
        for f in E.elements():
            if cm.act(chi[e], f) != E.conj(e, f):
                report.add("peiffer", f"^chi({E.name_of(e)}) {E.name_of(f)} != e f e^-1")
    if report:
        logger.debug(f"crossed module {cm.name or '?'}: {len(report)} violations")
    return report


def _require_valid(cm: CrossedModule) -> None:
    check_crossed_module(cm).raise_for(InvalidCrossedModule, "invalid crossed module")


@dataclass(frozen=True)
class TwoGroup:
    """The strict 2-group H x E => H of a crossed module."""

    cm: CrossedModule

    def objects(self) -> range:
        return self.cm.H.elements()

    def morphisms(self) -> list[tuple[int, int]]:
        return [(x, e) for x in self.cm.H.elements() for e in self.cm.E.elements()]

    def source(self, m: tuple[int, int]) -> int:
        return m[0]

    def target(self, m: tuple[int, int]) -> int:
        x, e = m
        return self.cm.H.mul(self.cm.chi[e], x)

    def unit(self, x: int) -> tuple[int, int]:
        return (x, 0)

    def compose(self, m1: tuple[int, int], m2: tuple[int, int]) -> tuple[int, int]:
        """m1 then m2, defined when t(m1) = s(m2)."""
        if self.target(m1) != self.source(m2):
            raise InvalidInput(f"cannot compose {m1} with {m2}: target != source")
        return (m1[0], self.cm.E.mul(m2[1], m1[1]))

    def product(self, m1: tuple[int, int], m2: tuple[int, int]) -> tuple[int, int]:
        (x, e), (y, f) = m1, m2
        return (self.cm.H.mul(x, y), self.cm.E.mul(e, self.cm.act(x, f)))

    def crossed_module(self) -> CrossedModule:
        H, E = self.cm.H, self.cm.E
        chi = tuple(self.target((0, e)) for e in E.elements())
        action = []
        for x in H.elements():
            row = []
            for e in E.elements():
                y, f = self.product(self.product(self.unit(x), (0, e)), self.unit(H.inv(x)))
                assert y == 0
                row.append(f)
            action.append(tuple(row))
        return CrossedModule(E, H, chi, tuple(action), self.cm.name)


def two_group(cm: CrossedModule) -> TwoGroup:
    _require_valid(cm)
    return TwoGroup(cm)


@dataclass(frozen=True)
class HomotopyGroups:
    coker: FiniteGroup
    quotient_map: tuple[int, ...]
    kernel: tuple[int, ...]
    kernel_action: tuple[tuple[int, ...], ...]

    @property
    def pi1(self) -> FiniteGroup:
        return self.coker

    @property
    def pi2_order(self) -> int:
        return len(self.kernel)


def pi1_pi2(cm: CrossedModule) -> HomotopyGroups:
    _require_valid(cm)
    E, H = cm.E, cm.H
    kernel = cm.kernel()
    if any(E.mul(k, e) != E.mul(e, k) for k in kernel for e in E.elements()):
        raise InvalidCrossedModule("kernel of chi is not central")
    coker, qmap = quotient(H, cm.image())
    position = {k: i for i, k in enumerate(kernel)}
    action = []
    for c in coker.elements():
        lifts = [x for x in H.elements() if qmap[x] == c]
        rows = {tuple(position[cm.act(x, k)] for k in kernel) for x in lifts}
        if len(rows) != 1:
            raise InvalidCrossedModule("image of chi does not act trivially on the kernel")
        action.append(rows.pop())
    logger.debug(f"pi1 order {coker.order}, pi2 order {len(kernel)}")
    return HomotopyGroups(coker, qmap, kernel, tuple(action))


# builtins


def z4_to_z2() -> CrossedModule:
    """chi = 0 : Z/4 -> Z/2, the generator of Z/2 acting by negation."""
    E, H = cyclic(4), cyclic(2)
    action = (tuple(range(4)), tuple((-n) % 4 for n in range(4)))
    return CrossedModule(E, H, (0, 0, 0, 0), action, "Z4->Z2")


def trivial_to(G: FiniteGroup) -> CrossedModule:
    E = trivial_group()
    return CrossedModule(E, G, (0,), tuple((0,) for _ in G.elements()), "1->G")


def trivial_xmod() -> CrossedModule:
    return trivial_to(trivial_group())


def abelian_to_trivial(E: FiniteGroup) -> CrossedModule:
    if not E.is_abelian():
        raise InvalidCrossedModule("E -> 1 is a crossed module only for abelian E")
    return CrossedModule(E, trivial_group(), tuple(0 for _ in E.elements()), (tuple(E.elements()),), "E->1")


def normal_inclusion(H: FiniteGroup, normal: Iterable[int]) -> CrossedModule:
    N = sorted(set(normal) | {0})
    if not H.is_normal(N):
        raise InvalidCrossedModule("inclusion needs a normal subgroup")
    E, embed = subgroup(H, N)
    position = {g: i for i, g in enumerate(embed)}
    action = tuple(tuple(position[H.conj(x, embed[e])] for e in E.elements()) for x in H.elements())
    return CrossedModule(E, H, embed, action, "N<H")


def conjugation(E: FiniteGroup) -> CrossedModule:
    """E -> Inn(E), e mapping to conjugation by e."""
    perms: list[tuple[int, ...]] = []
    for g in E.elements():
        p = tuple(E.conj(g, f) for f in E.elements())
        if p not in perms:
            perms.append(p)
    H = FiniteGroup.from_function(perms, lambda p, q: tuple(p[q[i]] for i in range(len(q))))
    index = {p: i for i, p in enumerate(perms)}
    chi = tuple(index[tuple(E.conj(g, f) for f in E.elements())] for g in E.elements())
    return CrossedModule(E, H, chi, tuple(perms), "E->Inn(E)")
