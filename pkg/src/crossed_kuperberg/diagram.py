"""Combinatorial pointed Heegaard diagrams.

A diagram records, for every upper circle, the components of the surface
minus the upper circles on its right (``cminus``) and left (``cplus``) side
and the intersection points met from its basepoint; for every lower circle,
the component holding its basepoint and the points met from there. A taut
identity per region of the surface minus the lower circles records how the
corresponding 3-cell attaches.

Words live in the free groupoid on the graph whose vertices are components
and whose edges are upper circles. The letter ``(u, +1)`` crosses ``u`` from
``cminus`` to ``cplus``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import cached_property
from math import gcd
from typing import Callable, Iterable, Mapping, Sequence

import networkx as nx
from loguru import logger

from crossed_kuperberg.errors import BadParameters, IllTypedWord, IncompatibleMergeSites, Report, UnknownCircle

Letter = tuple[str, int]


@dataclass(frozen=True)
class Word:
    source: str
    target: str
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        letters = tuple((str(u), int(e)) for u, e in self.letters)
        for u, e in letters:
            if e not in (1, -1):
                raise IllTypedWord(f"exponent {e} on {u} is not +1 or -1")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def identity(cls, component: str) -> "Word":
        return cls(component, component, ())

    def __len__(self) -> int:
        return len(self.letters)

    def inverse(self) -> "Word":
        return Word(self.target, self.source, tuple((u, -e) for u, e in reversed(self.letters)))

    def reduced(self) -> "Word":
        stack: list[Letter] = []
        for u, e in self.letters:
            if stack and stack[-1] == (u, -e):
                stack.pop()
            else:
                stack.append((u, e))
        return Word(self.source, self.target, tuple(stack))

    def is_trivial(self) -> bool:
        return self.source == self.target and not self.reduced().letters

    def __mul__(self, other: "Word") -> "Word":
        """Concatenation in the free groupoid, freely reduced."""
        if self.target != other.source:
            raise IllTypedWord(f"cannot compose a word ending at {self.target} with one starting at {other.source}")
        return Word(self.source, other.target, self.letters + other.letters).reduced()

    def power(self, n: int) -> "Word":
        if n < 0:
            return self.inverse().power(-n)
        if n and self.source != self.target:
            raise IllTypedWord("only loops have powers")
        out = Word.identity(self.source)
        for _ in range(n):
            out = out * self
        return out

    def substitute(self, images: Mapping[str, "Word"], source: str | None = None, target: str | None = None) -> "Word":
        """Apply a groupoid map given on letters; circles not in ``images`` keep their letter."""
        letters: list[Letter] = []
        for u, e in self.letters:
            if u in images:
                w = images[u] if e == 1 else images[u].inverse()
                letters.extend(w.letters)
            else:
                letters.append((u, e))
        return Word(self.source if source is None else source, self.target if target is None else target, tuple(letters))

    def typing_error(self, ends: Mapping[str, tuple[str, str]]) -> str | None:
        """Return why the word does not chain through ``ends`` (upper id -> (cminus, cplus)), or None."""
        cur = self.source
        for i, (u, e) in enumerate(self.letters):
            if u not in ends:
                return f"letter {i} uses unknown upper circle {u!r}"
            start, end = ends[u] if e == 1 else ends[u][::-1]
            if start != cur:
                return f"letter {i} ({u}^{e}) starts at {start}, word is at {cur}"
            cur = end
        if cur != self.target:
            return f"word ends at {cur}, declared target {self.target}"
        return None

    def __str__(self) -> str:
        if not self.letters:
            return f"1_{self.source}"
        return " ".join(u if e == 1 else f"{u}^-1" for u, e in self.letters)


@dataclass(frozen=True)
class IntersectionPoint:
    id: str
    upper: str
    lower: str
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise BadParameters(f"point {self.id}: sign must be +1 or -1")


@dataclass(frozen=True)
class UpperCircle:
    id: str
    cminus: str
    cplus: str
    points: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))


@dataclass(frozen=True)
class LowerCircle:
    id: str
    base_component: str
    points: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))


@dataclass(frozen=True)
class TautFactor:
    r: Word
    lower: str
    eps: int


@dataclass(frozen=True)
class TautIdentity:
    region: str
    base_component: str
    factors: tuple[TautFactor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))


@dataclass(frozen=True)
class HeegaardDiagram:
    genus: int
    components: tuple[str, ...]
    uppers: tuple[UpperCircle, ...]
    lowers: tuple[LowerCircle, ...]
    points: tuple[IntersectionPoint, ...]
    tauts: tuple[TautIdentity, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(sorted(self.components)))
        object.__setattr__(self, "uppers", tuple(sorted(self.uppers, key=lambda u: u.id)))
        object.__setattr__(self, "lowers", tuple(sorted(self.lowers, key=lambda l: l.id)))
        object.__setattr__(self, "points", tuple(sorted(self.points, key=lambda s: s.id)))
        object.__setattr__(self, "tauts", tuple(sorted(self.tauts, key=lambda t: t.region)))

    @cached_property
    def _uppers(self) -> dict[str, UpperCircle]:
        return {u.id: u for u in self.uppers}

    @cached_property
    def _lowers(self) -> dict[str, LowerCircle]:
        return {l.id: l for l in self.lowers}

    @cached_property
    def _points(self) -> dict[str, IntersectionPoint]:
        return {s.id: s for s in self.points}

    @cached_property
    def _tauts(self) -> dict[str, TautIdentity]:
        return {t.region: t for t in self.tauts}

    def upper(self, u: str) -> UpperCircle:
        try:
            return self._uppers[u]
        except KeyError:
            raise UnknownCircle(f"no upper circle {u!r}") from None

    def lower(self, l: str) -> LowerCircle:
        try:
            return self._lowers[l]
        except KeyError:
            raise UnknownCircle(f"no lower circle {l!r}") from None

    def point(self, s: str) -> IntersectionPoint:
        try:
            return self._points[s]
        except KeyError:
            raise UnknownCircle(f"no intersection point {s!r}") from None

    def taut(self, region: str) -> TautIdentity:
        try:
            return self._tauts[region]
        except KeyError:
            raise UnknownCircle(f"no taut region {region!r}") from None

    def has_upper(self, u: str) -> bool:
        return u in self._uppers

    def has_lower(self, l: str) -> bool:
        return l in self._lowers

    @cached_property
    def ends(self) -> dict[str, tuple[str, str]]:
        return {u.id: (u.cminus, u.cplus) for u in self.uppers}

    @property
    def upper_ids(self) -> tuple[str, ...]:
        return tuple(u.id for u in self.uppers)

    @property
    def lower_ids(self) -> tuple[str, ...]:
        return tuple(l.id for l in self.lowers)

    @property
    def normalization_exponent(self) -> int:
        return self.genus - len(self.uppers) - len(self.lowers)

    def graph(self) -> nx.MultiGraph:
        """Components as vertices, one edge per upper circle."""
        g = nx.MultiGraph()
        g.add_nodes_from(self.components)
        for u in self.uppers:
            g.add_edge(u.cminus, u.cplus, key=u.id)
        return g

    def summary(self) -> str:
        return (
            f"genus {self.genus}, {len(self.uppers)} uppers, {len(self.lowers)} lowers, "
            f"{len(self.points)} points, {len(self.components)} components, {len(self.tauts)} regions"
        )


def omega(D: HeegaardDiagram, l: str) -> Word:
    """The word read along lower circle ``l`` from its basepoint."""
    lower = D.lower(l)
    letters = tuple((D.point(s).upper, D.point(s).sign) for s in lower.points)
    return Word(lower.base_component, lower.base_component, letters)


def path_word(D: HeegaardDiagram, source: str, target: str) -> Word:
    """A shortest word from ``source`` to ``target``."""
    nodes = nx.shortest_path(D.graph(), source, target)
    letters: list[Letter] = []
    for a, b in zip(nodes, nodes[1:]):
        forward = sorted(u.id for u in D.uppers if (u.cminus, u.cplus) == (a, b))
        if forward:
            letters.append((forward[0], 1))
        else:
            backward = sorted(u.id for u in D.uppers if (u.cminus, u.cplus) == (b, a))
            letters.append((backward[0], -1))
    return Word(source, target, tuple(letters))


def taut_boundary(D: HeegaardDiagram, taut: TautIdentity) -> Word:
    out = Word.identity(taut.base_component)
    for f in taut.factors:
        out = out * f.r * omega(D, f.lower).power(f.eps) * f.r.inverse()
    return out


def validate(D: HeegaardDiagram) -> Report:
    report = Report()
    if D.genus < 0:
        report.add("genus", f"negative genus {D.genus}")
    for kind, ids in (
        ("component", D.components),
        ("upper", [u.id for u in D.uppers]),
        ("lower", [l.id for l in D.lowers]),
        ("point", [s.id for s in D.points]),
        ("region", [t.region for t in D.tauts]),
    ):
        dupes = sorted({i for i in ids if list(ids).count(i) > 1})
        if dupes:
            report.add("ids", f"duplicate {kind} ids {dupes}")
    comps = set(D.components)
    n_up, n_low = len(D.uppers), len(D.lowers)
    if len(D.components) != 1 + n_up - D.genus:
        report.add("euler-components", f"{len(D.components)} components, expected 1 + {n_up} - {D.genus}")
    if len(D.tauts) != 1 + n_low - D.genus:
        report.add("euler-regions", f"{len(D.tauts)} taut identities, expected 1 + {n_low} - {D.genus}")

    for u in D.uppers:
        for c in (u.cminus, u.cplus):
            if c not in comps:
                report.add("ids", f"upper {u.id} touches unknown component {c}")
    for l in D.lowers:
        if l.base_component not in comps:
            report.add("ids", f"lower {l.id} has unknown base component {l.base_component}")

    on_upper: dict[str, list[str]] = {}
    on_lower: dict[str, list[str]] = {}
    for u in D.uppers:
        for s in u.points:
            on_upper.setdefault(s, []).append(u.id)
    for l in D.lowers:
        for s in l.points:
            on_lower.setdefault(s, []).append(l.id)
    point_ids = {s.id for s in D.points}
    for s in D.points:
        if on_upper.get(s.id) != [s.upper]:
            report.add("incidence", f"point {s.id} must appear once on upper {s.upper}, found on {on_upper.get(s.id, [])}")
        if on_lower.get(s.id) != [s.lower]:
            report.add("incidence", f"point {s.id} must appear once on lower {s.lower}, found on {on_lower.get(s.id, [])}")
    for s in sorted((set(on_upper) | set(on_lower)) - point_ids):
        report.add("incidence", f"circle lists mention unknown point {s}")
    if report:
        return report

    if D.components and not nx.is_connected(D.graph()):
        report.add("connectivity", "the graph of components and upper circles is disconnected")

    for l in D.lowers:
        err = omega(D, l.id).typing_error(D.ends)
        if err:
            report.add("omega-typing", f"lower {l.id}: {err}")
    if report:
        return report

    for t in D.tauts:
        if t.base_component not in comps:
            report.add("ids", f"region {t.region} has unknown base component {t.base_component}")
            continue
        ok = True
        for k, f in enumerate(t.factors):
            if not D.has_lower(f.lower):
                report.add("taut-typing", f"region {t.region} factor {k}: unknown lower {f.lower}")
                ok = False
                continue
            if f.eps not in (1, -1):
                report.add("taut-typing", f"region {t.region} factor {k}: eps {f.eps}")
                ok = False
            if f.r.source != t.base_component or f.r.target != D.lower(f.lower).base_component:
                report.add(
                    "taut-typing",
                    f"region {t.region} factor {k}: r runs {f.r.source}->{f.r.target}, "
                    f"expected {t.base_component}->{D.lower(f.lower).base_component}",
                )
                ok = False
                continue
            err = f.r.typing_error(D.ends)
            if err:
                report.add("taut-typing", f"region {t.region} factor {k}: {err}")
                ok = False
        if ok:
            boundary = taut_boundary(D, t)
            if boundary.letters:
                report.add("taut-boundary", f"region {t.region}: boundary reduces to {boundary}, not 1")
    if report:
        logger.debug(f"diagram invalid: {len(report)} violations")
    return report


# builders


def build_lens(p: int, q: int) -> HeegaardDiagram:
    """Genus-one diagram of L(p, q); L(1, 1) is the three-sphere."""
    if p < 1 or gcd(p, q) != 1 or not (1 <= q < p or p == q == 1):
        raise BadParameters(f"lens space needs p >= 1, 1 <= q < p, gcd(p, q) = 1; got ({p}, {q})")
    lower_order = [f"s{i}" for i in range(1, p + 1)]
    # the upper circle meets the lower points in steps of -q
    upper_order = [lower_order[(-k * q) % p] for k in range(p)]
    points = [IntersectionPoint(s, "u", "l", 1) for s in lower_order]
    u_q = Word("c", "c", tuple(("u", 1) for _ in range(q)))
    taut = TautIdentity("r", "c", (TautFactor(Word.identity("c"), "l", -1), TautFactor(u_q, "l", 1)))
    return HeegaardDiagram(
        genus=1,
        components=("c",),
        uppers=(UpperCircle("u", "c", "c", tuple(upper_order)),),
        lowers=(LowerCircle("l", "c", tuple(lower_order)),),
        points=tuple(points),
        tauts=(taut,),
    )


def build_poincare() -> HeegaardDiagram:
    """Genus-two diagram of the Poincaré homology sphere."""
    signs = {
        "1": ("u1", "l1", 1), "2": ("u1", "l1", 1), "3": ("u1", "l1", 1), "4": ("u1", "l1", 1),
        "5": ("u2", "l1", -1), "6": ("u1", "l1", -1), "7": ("u2", "l1", -1),
        "a": ("u1", "l2", -1), "b": ("u2", "l2", -1), "c": ("u1", "l2", -1),
        "d": ("u2", "l2", 1), "e": ("u2", "l2", 1),
    }
    points = tuple(IntersectionPoint(s, u, l, nu) for s, (u, l, nu) in signs.items())
    uppers = (
        UpperCircle("u1", "c", "c", ("1", "2", "3", "4", "a", "6", "c")),
        UpperCircle("u2", "c", "c", ("d", "e", "5", "b", "7")),
    )
    lowers = (
        LowerCircle("l1", "c", ("1", "2", "3", "4", "5", "6", "7")),
        LowerCircle("l2", "c", ("a", "b", "c", "d", "e")),
    )

    def w(*letters: Letter) -> Word:
        return Word("c", "c", letters)

    taut = TautIdentity(
        "r",
        "c",
        (
            TautFactor(w(), "l1", -1),
            TautFactor(w(("u1", -1)), "l1", 1),
            TautFactor(w(("u1", -1), ("u2", 1), ("u2", 1), ("u2", 1)), "l2", -1),
            TautFactor(w(("u2", 1), ("u1", 1)), "l2", 1),
        ),
    )
    return HeegaardDiagram(2, ("c",), uppers, lowers, points, (taut,))


def build_s3() -> HeegaardDiagram:
    """The genus-zero diagram: a sphere with no circles."""
    return HeegaardDiagram(0, ("c",), (), (), (), (TautIdentity("r", "c", ()),))


# renaming, sums, orientation


def rename(
    D: HeegaardDiagram,
    f: Callable[[str], str],
    components: Callable[[str], str] | None = None,
    uppers: Callable[[str], str] | None = None,
    lowers: Callable[[str], str] | None = None,
    points: Callable[[str], str] | None = None,
    regions: Callable[[str], str] | None = None,
) -> HeegaardDiagram:
    """Apply ``f`` to every id; a per-kind callable, when given, replaces ``f`` for that kind."""
    g, up, low, pt, reg = (k or f for k in (components, uppers, lowers, points, regions))

    def word(w: Word) -> Word:
        return Word(g(w.source), g(w.target), tuple((up(u), e) for u, e in w.letters))

    return HeegaardDiagram(
        genus=D.genus,
        components=tuple(g(c) for c in D.components),
        uppers=tuple(UpperCircle(up(u.id), g(u.cminus), g(u.cplus), tuple(pt(s) for s in u.points)) for u in D.uppers),
        lowers=tuple(LowerCircle(low(l.id), g(l.base_component), tuple(pt(s) for s in l.points)) for l in D.lowers),
        points=tuple(IntersectionPoint(pt(s.id), up(s.upper), low(s.lower), s.sign) for s in D.points),
        tauts=tuple(
            TautIdentity(reg(t.region), g(t.base_component), tuple(TautFactor(word(x.r), low(x.lower), x.eps) for x in t.factors))
            for t in D.tauts
        ),
    )


def all_ids(D: HeegaardDiagram) -> set[str]:
    return (
        set(D.components)
        | {u.id for u in D.uppers}
        | {l.id for l in D.lowers}
        | {s.id for s in D.points}
        | {t.region for t in D.tauts}
    )


def sum_renamings(D1: HeegaardDiagram, D2: HeegaardDiagram) -> tuple[Callable[[str], str], Callable[[str], str]]:
    """Renamings applied by :func:`connected_sum`: identity unless ids collide, then prefixes."""
    if all_ids(D1) & all_ids(D2):
        return (lambda s: f"1.{s}"), (lambda s: f"2.{s}")
    return (lambda s: s), (lambda s: s)


@dataclass(frozen=True)
class MergeSites:
    component1: str
    component2: str
    region1: str
    region2: str


def default_merge_sites(D1: HeegaardDiagram, D2: HeegaardDiagram) -> MergeSites:
    t1, t2 = D1.tauts[0], D2.tauts[0]
    return MergeSites(t1.base_component, t2.base_component, t1.region, t2.region)


def connected_sum(D1: HeegaardDiagram, D2: HeegaardDiagram, merge: MergeSites | None = None) -> HeegaardDiagram:
    merge = merge or default_merge_sites(D1, D2)
    for D, c, r in ((D1, merge.component1, merge.region1), (D2, merge.component2, merge.region2)):
        if c not in D.components:
            raise IncompatibleMergeSites(f"unknown component {c!r}")
        try:
            t = D.taut(r)
        except UnknownCircle as exc:
            raise IncompatibleMergeSites(str(exc)) from None
        if t.base_component != c:
            raise IncompatibleMergeSites(f"region {r} is based at {t.base_component}, not at {c}")
    f1, f2 = sum_renamings(D1, D2)
    c1, r1, r2 = f1(merge.component1), f1(merge.region1), f2(merge.region2)
    A = rename(D1, f1)
    B = rename(D2, f2, components=lambda c: c1 if c == merge.component2 else f2(c))
    merged = TautIdentity(r1, c1, A.taut(r1).factors + B.taut(r2).factors)
    components = tuple(A.components) + tuple(c for c in B.components if c != c1)
    out = HeegaardDiagram(
        genus=A.genus + B.genus,
        components=components,
        uppers=A.uppers + B.uppers,
        lowers=A.lowers + B.lowers,
        points=A.points + B.points,
        tauts=tuple(t for t in A.tauts if t.region != r1) + tuple(t for t in B.tauts if t.region != r2) + (merged,),
    )
    logger.debug(f"connected sum: {out.summary()}")
    return out


def reverse_orientation(D: HeegaardDiagram) -> HeegaardDiagram:
    """The same circles on the surface with the opposite orientation."""

    def flip(w: Word) -> Word:
        return Word(w.source, w.target, tuple((u, -e) for u, e in w.letters))

    return replace(
        D,
        uppers=tuple(UpperCircle(u.id, u.cplus, u.cminus, u.points) for u in D.uppers),
        points=tuple(replace(s, sign=-s.sign) for s in D.points),
        tauts=tuple(
            TautIdentity(t.region, t.base_component, tuple(TautFactor(flip(x.r), x.lower, -x.eps) for x in reversed(t.factors)))
            for t in D.tauts
        ),
    )


# isomorphism


def _rotation_equal(a: Sequence[str], b: Sequence[str]) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    doubled = list(b) + list(b)
    return any(doubled[i : i + len(a)] == list(a) for i in range(len(b)))


def _extend(mapping: dict[str, str], pairs: Iterable[tuple[str, str]]) -> dict[str, str] | None:
    out = dict(mapping)
    used = set(out.values())
    for a, b in pairs:
        if a in out:
            if out[a] != b:
                return None
        else:
            if b in used:
                return None
            out[a] = b
            used.add(b)
    return out


def find_isomorphism(D1: HeegaardDiagram, D2: HeegaardDiagram, compare_tauts: bool = True) -> dict[str, dict[str, str]] | None:
    """Backtracking search for a structure-preserving bijection of ids.

    Upper lists are compared up to cyclic rotation. With ``compare_tauts``
    the taut identities must match factor by factor after renaming.
    """
    if (D1.genus, len(D1.components), len(D1.uppers), len(D1.lowers), len(D1.points), len(D1.tauts)) != (
        D2.genus, len(D2.components), len(D2.uppers), len(D2.lowers), len(D2.points), len(D2.tauts)
    ):
        return None

    def signs(D: HeegaardDiagram, l: LowerCircle) -> list[int]:
        return [D.point(s).sign for s in l.points]

    for lowers2 in itertools.permutations(D2.lowers):
        if any(signs(D1, a) != signs(D2, b) for a, b in zip(D1.lowers, lowers2)):
            continue
        low = {a.id: b.id for a, b in zip(D1.lowers, lowers2)}
        pts = _extend({}, ((s, t) for a, b in zip(D1.lowers, lowers2) for s, t in zip(a.points, b.points)))
        if pts is None:
            continue
        up = _extend({}, ((D1.point(s).upper, D2.point(t).upper) for s, t in pts.items()))
        if up is None:
            continue
        free1 = [u.id for u in D1.uppers if u.id not in up]
        free2 = [u.id for u in D2.uppers if u.id not in set(up.values())]
        for perm in itertools.permutations(free2):
            up_full = dict(up, **dict(zip(free1, perm)))
            if any(
                not _rotation_equal([pts[s] for s in D1.upper(u).points], D2.upper(v).points) for u, v in up_full.items()
            ):
                continue
            comp = _extend(
                {},
                itertools.chain(
                    ((D1.upper(u).cminus, D2.upper(v).cminus) for u, v in up_full.items()),
                    ((D1.upper(u).cplus, D2.upper(v).cplus) for u, v in up_full.items()),
                    ((D1.lower(l).base_component, D2.lower(m).base_component) for l, m in low.items()),
                ),
            )
            if comp is None:
                continue
            rest1 = [c for c in D1.components if c not in comp]
            rest2 = [c for c in D2.components if c not in set(comp.values())]
            for cperm in itertools.permutations(rest2):
                comp_full = dict(comp, **dict(zip(rest1, cperm)))
                regions = _match_regions(D1, D2, comp_full, up_full, low, compare_tauts)
                if regions is not None:
                    return {"components": comp_full, "uppers": up_full, "lowers": low, "points": pts, "regions": regions}
    return None


def _match_regions(D1, D2, comp, up, low, compare_tauts) -> dict[str, str] | None:
    def image(t: TautIdentity):
        return (
            comp[t.base_component],
            tuple(
                (comp[x.r.source], comp[x.r.target], tuple((up[u], e) for u, e in x.r.reduced().letters), low[x.lower], x.eps)
                for x in t.factors
            ),
        )

    def key2(t: TautIdentity):
        return (t.base_component, tuple((x.r.source, x.r.target, x.r.reduced().letters, x.lower, x.eps) for x in t.factors))

    out: dict[str, str] = {}
    taken: set[str] = set()
    for t in D1.tauts:
        for s in D2.tauts:
            if s.region in taken:
                continue
            if compare_tauts:
                ok = image(t) == key2(s)
            else:
                ok = comp[t.base_component] == s.base_component
            if ok:
                out[t.region] = s.region
                taken.add(s.region)
                break
        else:
            return None
    return out


def isomorphic(D1: HeegaardDiagram, D2: HeegaardDiagram, compare_tauts: bool = True) -> bool:
    return find_isomorphism(D1, D2, compare_tauts) is not None
