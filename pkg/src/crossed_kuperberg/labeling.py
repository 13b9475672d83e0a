"""Labelings of a diagram by a crossed module, and the gauge group acting on them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

from loguru import logger
from networkx.utils import UnionFind

from crossed_kuperberg.diagram import HeegaardDiagram, Word, omega, sum_renamings, validate
from crossed_kuperberg.errors import BudgetExceeded, IllTypedWord, InvalidDiagram, InvalidLabeling, Report
from crossed_kuperberg.paths import load_settings
from crossed_kuperberg.xmod import CrossedModule, FiniteGroup


class ChiLabeling:
    """alpha: upper id -> H index, beta: lower id -> E index."""

    __slots__ = ("alpha", "beta")

    def __init__(self, alpha: Mapping[str, int], beta: Mapping[str, int]):
        object.__setattr__(self, "alpha", {k: int(alpha[k]) for k in sorted(alpha)})
        object.__setattr__(self, "beta", {k: int(beta[k]) for k in sorted(beta)})

    def __setattr__(self, name, value):
        raise AttributeError("ChiLabeling is immutable")

    def key(self) -> tuple:
        return (tuple(self.alpha.values()), tuple(self.beta.values()), tuple(self.alpha), tuple(self.beta))

    def __eq__(self, other) -> bool:
        return isinstance(other, ChiLabeling) and self.alpha == other.alpha and self.beta == other.beta

    def __hash__(self) -> int:
        return hash(self.key())

    def __lt__(self, other: "ChiLabeling") -> bool:
        return self.key() < other.key()

    def __repr__(self) -> str:
        return f"ChiLabeling(alpha={self.alpha}, beta={self.beta})"

    def with_updates(self, alpha: Mapping[str, int] | None = None, beta: Mapping[str, int] | None = None,
                     drop: Iterable[str] = ()) -> "ChiLabeling":
        drop = set(drop)
        a = {k: v for k, v in self.alpha.items() if k not in drop}
        b = {k: v for k, v in self.beta.items() if k not in drop}
        a.update(alpha or {})
        b.update(beta or {})
        return ChiLabeling(a, b)

    def renamed(self, f: Callable[[str], str]) -> "ChiLabeling":
        return ChiLabeling({f(k): v for k, v in self.alpha.items()}, {f(k): v for k, v in self.beta.items()})

    def as_dict(self) -> dict:
        return {"alpha": dict(self.alpha), "beta": dict(self.beta)}


def trivial_labeling(D: HeegaardDiagram) -> ChiLabeling:
    return ChiLabeling({u: 0 for u in D.upper_ids}, {l: 0 for l in D.lower_ids})


def invert_alpha(lab: ChiLabeling, cm: CrossedModule) -> ChiLabeling:
    return ChiLabeling({u: cm.H.inv(x) for u, x in lab.alpha.items()}, lab.beta)


def sum_labelings(D1: HeegaardDiagram, D2: HeegaardDiagram, lab1: ChiLabeling, lab2: ChiLabeling) -> ChiLabeling:
    """The labeling of ``connected_sum(D1, D2)`` restricting to ``lab1`` and ``lab2``."""
    f1, f2 = sum_renamings(D1, D2)
    a, b = lab1.renamed(f1), lab2.renamed(f2)
    return ChiLabeling({**a.alpha, **b.alpha}, {**a.beta, **b.beta})


def _check_typed(w: Word, D: HeegaardDiagram | None) -> None:
    if D is not None:
        err = w.typing_error(D.ends)
        if err:
            raise IllTypedWord(err)


def eval_word(H: FiniteGroup, alpha: Mapping[str, int], w: Word, D: HeegaardDiagram | None = None) -> int:
    _check_typed(w, D)
    out = 0
    for u, e in w.letters:
        x = alpha[u]
        out = H.mul(out, x if e == 1 else H.inv(x))
    return out


def derivation(cm: CrossedModule, alpha: Mapping[str, int], d: Mapping[str, int], w: Word,
               D: HeegaardDiagram | None = None) -> int:
    """d_alpha(w), with d_alpha(w w') = d_alpha(w) . ^alpha(w) d_alpha(w')."""
    _check_typed(w, D)
    E, H = cm.E, cm.H
    out, walked = 0, 0
    for u, e in w.letters:
        x = alpha[u]
        piece = d.get(u, 0) if e == 1 else cm.act(H.inv(x), E.inv(d.get(u, 0)))
        out = E.mul(out, cm.act(walked, piece))
        walked = H.mul(walked, x if e == 1 else H.inv(x))
    return out


def check_labeling(D: HeegaardDiagram, cm: CrossedModule, lab: ChiLabeling) -> Report:
    report = Report()
    if set(lab.alpha) != set(D.upper_ids):
        report.add("labeling-keys", f"alpha is defined on {sorted(lab.alpha)}, uppers are {list(D.upper_ids)}")
    if set(lab.beta) != set(D.lower_ids):
        report.add("labeling-keys", f"beta is defined on {sorted(lab.beta)}, lowers are {list(D.lower_ids)}")
    if any(not 0 <= x < cm.H.order for x in lab.alpha.values()) or any(
        not 0 <= e < cm.E.order for e in lab.beta.values()
    ):
        report.add("labeling-range", "label index out of range")
    if report:
        return report
    H, E = cm.H, cm.E
    for l in D.lowers:
        lhs = cm.chi[lab.beta[l.id]]
        rhs = eval_word(H, lab.alpha, omega(D, l.id))
        if lhs != rhs:
            report.add("grading", f"lower {l.id}: chi(beta) = {H.name_of(lhs)} but alpha(omega) = {H.name_of(rhs)}")
    for t in D.tauts:
        prod = 0
        for f in t.factors:
            val = cm.act(eval_word(H, lab.alpha, f.r), lab.beta[f.lower])
            prod = E.mul(prod, val if f.eps == 1 else E.inv(val))
        if prod != 0:
            report.add("taut", f"region {t.region}: product is {E.name_of(prod)}, not 1")
    return report


@dataclass(frozen=True)
class GaugeElement:
    a: tuple[tuple[str, int], ...]
    d: tuple[tuple[str, int], ...]

    @classmethod
    def of(cls, a: Mapping[str, int], d: Mapping[str, int]) -> "GaugeElement":
        return cls(tuple(sorted((k, int(v)) for k, v in a.items())), tuple(sorted((k, int(v)) for k, v in d.items())))

    @classmethod
    def identity(cls, D: HeegaardDiagram) -> "GaugeElement":
        return cls.of({c: 0 for c in D.components}, {u: 0 for u in D.upper_ids})

    @property
    def a_map(self) -> dict[str, int]:
        return dict(self.a)

    @property
    def d_map(self) -> dict[str, int]:
        return dict(self.d)

    def compose(self, other: "GaugeElement", D: HeegaardDiagram, cm: CrossedModule) -> "GaugeElement":
        """self * other."""
        a, d, a2, d2 = self.a_map, self.d_map, other.a_map, other.d_map
        H, E = cm.H, cm.E
        a_out = {c: H.mul(a.get(c, 0), a2.get(c, 0)) for c in D.components}
        d_out = {}
        for u in D.uppers:
            twist = cm.act(H.inv(a2.get(u.cminus, 0)), d.get(u.id, 0))
            d_out[u.id] = E.mul(twist, d2.get(u.id, 0))
        return GaugeElement.of(a_out, d_out)


def _act(g: GaugeElement, lab: ChiLabeling, D: HeegaardDiagram, cm: CrossedModule) -> ChiLabeling:
    H, E = cm.H, cm.E
    a, d = g.a_map, g.d_map
    alpha = {}
    for u in D.uppers:
        x = H.mul(H.mul(a.get(u.cminus, 0), cm.chi[d.get(u.id, 0)]), lab.alpha[u.id])
        alpha[u.id] = H.mul(x, H.inv(a.get(u.cplus, 0)))
    beta = {}
    for l in D.lowers:
        twisted = E.mul(derivation(cm, lab.alpha, d, omega(D, l.id)), lab.beta[l.id])
        beta[l.id] = cm.act(a.get(l.base_component, 0), twisted)
    return ChiLabeling(alpha, beta)


def gauge_act(g: GaugeElement, lab: ChiLabeling, D: HeegaardDiagram, cm: CrossedModule) -> ChiLabeling:
    check_labeling(D, cm, lab).raise_for(InvalidLabeling, "gauge action on an invalid labeling")
    return _act(g, lab, D, cm)


def gauge_generators(D: HeegaardDiagram, cm: CrossedModule) -> list[GaugeElement]:
    gens = []
    for c in D.components:
        for x in range(1, cm.H.order):
            gens.append(GaugeElement.of({c: x}, {}))
    for u in D.upper_ids:
        for e in range(1, cm.E.order):
            gens.append(GaugeElement.of({}, {u: e}))
    return gens


def gauge_group_order(D: HeegaardDiagram, cm: CrossedModule) -> int:
    return cm.H.order ** len(D.components) * cm.E.order ** len(D.uppers)


def all_gauge_elements(D: HeegaardDiagram, cm: CrossedModule) -> Iterator[GaugeElement]:
    for a in itertools.product(range(cm.H.order), repeat=len(D.components)):
        for d in itertools.product(range(cm.E.order), repeat=len(D.uppers)):
            yield GaugeElement(tuple(zip(D.components, a)), tuple(zip(D.upper_ids, d)))


def _resolve_budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    return load_settings().budget


def enumerate_labelings(D: HeegaardDiagram, cm: CrossedModule, budget: int | None = None) -> list[ChiLabeling]:
    """Every labeling passing :func:`check_labeling`, ordered by (alpha, beta) indices."""
    validate(D).raise_for(InvalidDiagram, "cannot enumerate labelings of an invalid diagram")
    budget = _resolve_budget(budget)
    size = cm.H.order ** len(D.uppers) * cm.E.order ** len(D.lowers)
    if size > budget:
        raise BudgetExceeded(f"labeling space has {size} candidates, budget is {budget}")
    H, E = cm.H, cm.E
    preimages: dict[int, list[int]] = {}
    for e in E.elements():
        preimages.setdefault(cm.chi[e], []).append(e)
    words = {l: omega(D, l) for l in D.lower_ids}
    found: list[ChiLabeling] = []
    for alpha_values in itertools.product(range(H.order), repeat=len(D.uppers)):
        alpha = dict(zip(D.upper_ids, alpha_values))
        choices = [preimages.get(eval_word(H, alpha, words[l]), []) for l in D.lower_ids]
        if any(not c for c in choices):
            continue
        for beta_values in itertools.product(*choices):
            lab = ChiLabeling(alpha, dict(zip(D.lower_ids, beta_values)))
            if not _taut_ok(D, cm, lab):
                continue
            found.append(lab)
    logger.debug(f"{len(found)} labelings out of {size} candidates")
    return found


def _taut_ok(D: HeegaardDiagram, cm: CrossedModule, lab: ChiLabeling) -> bool:
    E = cm.E
    for t in D.tauts:
        prod = 0
        for f in t.factors:
            val = cm.act(eval_word(cm.H, lab.alpha, f.r), lab.beta[f.lower])
            prod = E.mul(prod, val if f.eps == 1 else E.inv(val))
        if prod != 0:
            return False
    return True


@dataclass(frozen=True)
class OrbitClass:
    representative: ChiLabeling
    members: tuple[ChiLabeling, ...]

    @property
    def size(self) -> int:
        return len(self.members)


def _union_find(labelings: list[ChiLabeling]) -> UnionFind:
    uf = UnionFind(labelings)
    if len(uf.parents) != len(labelings):
        raise InvalidLabeling("labeling list contains duplicates")
    return uf


def _classes(uf: UnionFind) -> list[OrbitClass]:
    """Classes sorted by representative; the representative is the least member."""
    classes = [OrbitClass(min(group), tuple(sorted(group))) for group in uf.to_sets()]
    return sorted(classes, key=lambda c: c.representative.key())


def _join(uf: UnionFind, lab: ChiLabeling, image: ChiLabeling) -> None:
    if image not in uf.parents:
        raise InvalidLabeling(f"gauge image {image} is missing from the labeling list")
    uf.union(lab, image)


def orbit_classes(labelings: list[ChiLabeling], D: HeegaardDiagram, cm: CrossedModule) -> list[OrbitClass]:
    """Partition ``labelings`` into gauge orbits, closing under the generator set."""
    uf = _union_find(labelings)
    gens = gauge_generators(D, cm)
    for lab in labelings:
        for g in gens:
            _join(uf, lab, _act(g, lab, D, cm))
    classes = _classes(uf)
    logger.debug(f"{len(classes)} gauge classes from {len(gens)} generators")
    return classes


def full_group_orbits(labelings: list[ChiLabeling], D: HeegaardDiagram, cm: CrossedModule,
                      limit: int = 10_000) -> list[OrbitClass]:
    """Same partition as :func:`orbit_classes`, acting by every element of the gauge group."""
    if gauge_group_order(D, cm) > limit:
        raise BudgetExceeded(f"gauge group has {gauge_group_order(D, cm)} elements, limit is {limit}")
    uf = _union_find(labelings)
    elements = list(all_gauge_elements(D, cm))
    for lab in labelings:
        for g in elements:
            _join(uf, lab, _act(g, lab, D, cm))
    return _classes(uf)
