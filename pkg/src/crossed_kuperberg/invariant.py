"""Evaluation of the invariant of a labeled diagram by tensor contraction.

Each lower circle contributes the iterated coproduct of the twisted integral
``phi_{1,beta(l)}(Lambda)`` split over its points. Negative points go through
the antipode, and each upper circle multiplies its points in order and
applies the chi-integral of its label. The result is scaled by
``dim(A_1)^(genus - #uppers - #lowers)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Literal, Sequence

import numpy as np
from loguru import logger

from crossed_kuperberg.diagram import HeegaardDiagram, build_lens, validate
from crossed_kuperberg.errors import (
    BadParameters,
    GradingMismatch,
    InconsistentSlotSets,
    InvalidDiagram,
    InvalidHopfData,
    InvalidLabeling,
    MissingIntegrals,
)
from crossed_kuperberg.hopfxc import HopfChiCoalgebra, Integrals, check_axioms, compute_integrals, tdot
from crossed_kuperberg.labeling import ChiLabeling, check_labeling, trivial_labeling
from crossed_kuperberg.scalar import FieldDescriptor, Native, Scalar

Strategy = Literal["greedy", "naive"]
Slot = tuple[str, int]


@dataclass(frozen=True, eq=False)
class GradedTensor:
    """Coefficients over the tensor product of ``A_x`` for each slot, last slot fastest."""

    slots: tuple[Slot, ...]
    coefficients: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple((str(s), int(x)) for s, x in self.slots))
        object.__setattr__(self, "coefficients", np.asarray(self.coefficients, dtype=object))
        if self.coefficients.ndim != len(self.slots):
            raise GradingMismatch(f"{len(self.slots)} slots for an array of rank {self.coefficients.ndim}")

    @property
    def points(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.slots)

    @property
    def size(self) -> int:
        return int(self.coefficients.size)

    def flat(self) -> list[Any]:
        return list(self.coefficients.reshape(-1))


def _require_integrals(integrals: Integrals | None) -> Integrals:
    if integrals is None:
        raise MissingIntegrals("integrals must be computed before building tensors")
    return integrals


def _require_labeling(D: HeegaardDiagram, lab: ChiLabeling, A: HopfChiCoalgebra) -> None:
    check_labeling(D, A.cm, lab).raise_for(InvalidLabeling, "labeling is not a chi-labeling of the diagram")


def iterated_coproduct(A: HopfChiCoalgebra, v: np.ndarray, gradings: Sequence[int]) -> np.ndarray:
    """Split ``v`` in ``A_{x_1...x_n}`` over ``A_{x_1} (x) ... (x) A_{x_n}``; n = 0 gives ``eps(v)``."""
    f, H = A.field, A.cm.H
    if not gradings:
        return tdot(f, A.counit, v, ([0], [0]))
    prefixes = [0]
    for x in gradings:
        prefixes.append(H.mul(prefixes[-1], x))
    T = np.asarray(v, dtype=object)
    for k in range(len(gradings) - 1, 0, -1):
        # leading axis has grading prefixes[k + 1]; peel off gradings[k]
        T = tdot(f, A.coproduct[(prefixes[k], gradings[k])], T, ([2], [0]))
    return T


def lower_tensor(
    D: HeegaardDiagram, lab: ChiLabeling, A: HopfChiCoalgebra, l: str, integrals: Integrals | None = None
) -> GradedTensor:
    ints = _require_integrals(integrals)
    _require_labeling(D, lab, A)
    H = A.cm.H
    lower = D.lower(l)
    e = lab.beta[l]
    v = tdot(A.field, A.action[(0, e)], ints.Lambda, ([1], [0]))
    slots = []
    for s in lower.points:
        pt = D.point(s)
        x = lab.alpha[pt.upper]
        slots.append((s, x if pt.sign == 1 else H.inv(x)))
    return GradedTensor(tuple(slots), iterated_coproduct(A, v, [x for _, x in slots]))


def apply_antipodes(t: GradedTensor, D: HeegaardDiagram, lab: ChiLabeling, A: HopfChiCoalgebra) -> GradedTensor:
    H = A.cm.H
    T = t.coefficients
    slots = []
    for k, (s, x) in enumerate(t.slots):
        pt = D.point(s)
        a = lab.alpha[pt.upper]
        if pt.sign == 1:
            if x != a:
                raise GradingMismatch(f"positive point {s} carries grading {x}, expected {a}")
        else:
            if x != H.inv(a):
                raise GradingMismatch(f"negative point {s} carries grading {x}, expected {H.inv(a)}")
            T = np.moveaxis(tdot(A.field, A.antipode[a], T, ([1], [k])), 0, k)
        slots.append((s, a))
    return GradedTensor(tuple(slots), T)


def upper_order(D: HeegaardDiagram) -> list[str]:
    return [s for u in D.uppers for s in u.points]


def permute_to_upper(tensors: Sequence[GradedTensor], D: HeegaardDiagram, over: FieldDescriptor | None = None) -> GradedTensor:
    """Tensor the per-lower tensors together and reorder slots by upper circle."""
    slots: list[Slot] = [slot for t in tensors for slot in t.slots]
    order = upper_order(D)
    if sorted(s for s, _ in slots) != sorted(order) or len(set(order)) != len(order):
        raise InconsistentSlotSets("lower tensors do not cover every intersection point exactly once")
    T = np.asarray(1 if over is None else over.one, dtype=object)
    for t in tensors:
        T = np.multiply.outer(T, t.coefficients)
    if over is not None and over.kind == "Fp":
        T = np.asarray(np.mod(T, over.p), dtype=object)
    position = {s: i for i, (s, _) in enumerate(slots)}
    perm = [position[s] for s in order]
    return GradedTensor(tuple(slots[i] for i in perm), np.transpose(T, perm) if perm else T)


def trace_form(A: HopfChiCoalgebra, x: int, n: int, lam: np.ndarray) -> np.ndarray:
    """The n-linear form ``b_1 ... b_n -> lambda_x(b_1 ... b_n)``; n = 0 is ``lambda_x(1_x)``."""
    f = A.field
    if n == 0:
        return tdot(f, lam, A.unit(x), ([0], [0]))
    P = f.identity(A.dim(x))
    for k in range(1, n):
        P = tdot(f, P, A.mu(x), ([k], [0]))
    return tdot(f, P, lam, ([n], [0]))


def upper_contract(
    t: GradedTensor, D: HeegaardDiagram, lab: ChiLabeling, A: HopfChiCoalgebra, integrals: Integrals | None = None
) -> Native:
    ints = _require_integrals(integrals)
    f = A.field
    T = t.coefficients
    pos = 0
    result = f.one
    for u in D.uppers:
        x = lab.alpha[u.id]
        n = len(u.points)
        for k, s in enumerate(u.points):
            if t.slots[pos + k] != (s, x):
                raise GradingMismatch(f"slot {pos + k} is {t.slots[pos + k]}, expected ({s}, {x})")
        form = trace_form(A, x, n, ints.lam[x])
        if n == 0:
            result = f.mul(result, f.native(form.item()))
        else:
            T = tdot(f, form, T, (list(range(n)), list(range(n))))
        pos += n
    return f.mul(result, f.native(np.asarray(T, dtype=object).item()))


# greedy contraction


@dataclass
class _Network:
    scalars: FieldDescriptor
    tensors: dict[int, tuple[np.ndarray, list[int]]] = field(default_factory=dict)
    where: dict[int, int] = field(default_factory=dict)
    grading: dict[int, int] = field(default_factory=dict)
    cycles: dict[str, list[int]] = field(default_factory=dict)
    scalar: Native = None
    _next: itertools.count = field(default_factory=itertools.count)

    def new_segment(self, x: int) -> int:
        seg = next(self._next)
        self.grading[seg] = x
        return seg

    def add_tensor(self, arr: np.ndarray, segs: list[int]) -> None:
        if not segs:
            self.scalar = self.scalars.mul(self.scalar, self.scalars.native(np.asarray(arr, dtype=object).item()))
            return
        tid = next(self._next)
        self.tensors[tid] = (arr, segs)
        for s in segs:
            self.where[s] = tid

    def pop_tensor(self, tid: int) -> tuple[np.ndarray, list[int]]:
        arr, segs = self.tensors.pop(tid)
        for s in segs:
            self.where.pop(s, None)
        return arr, segs


def _merge_cost(net: _Network, A: HopfChiCoalgebra, a: int, b: int) -> int:
    ta, tb = net.where[a], net.where[b]
    d = max(A.dim(net.grading[a]), 1)
    if ta == tb:
        return net.tensors[ta][0].size // d
    return net.tensors[ta][0].size * net.tensors[tb][0].size // d


def _merge(net: _Network, A: HopfChiCoalgebra, u: str, a: int, b: int) -> None:
    """Replace cyclically adjacent segments a, b of ``u`` by one slot holding the product ab."""
    f = net.scalars
    x = net.grading[a]
    mu = A.mu(x)
    c = net.new_segment(x)
    ta, tb = net.where[a], net.where[b]
    if ta == tb:
        arr, segs = net.pop_tensor(ta)
        ia, ib = segs.index(a), segs.index(b)
        out = tdot(f, arr, mu, ([ia, ib], [0, 1]))
        rest = [s for s in segs if s not in (a, b)]
    else:
        arr1, segs1 = net.pop_tensor(ta)
        arr2, segs2 = net.pop_tensor(tb)
        ia, ib = segs1.index(a), segs2.index(b)
        half = tdot(f, arr2, mu, ([ib], [1]))
        out = tdot(f, arr1, half, ([ia], [half.ndim - 2]))
        rest = [s for s in segs1 if s != a] + [s for s in segs2 if s != b]
    net.add_tensor(out, rest + [c])
    net.cycles[u] = [c if s == a else s for s in net.cycles[u] if s != b]


def _close(net: _Network, A: HopfChiCoalgebra, u: str, lam: np.ndarray) -> None:
    (seg,) = net.cycles.pop(u)
    arr, segs = net.pop_tensor(net.where[seg])
    out = tdot(net.scalars, arr, lam, ([segs.index(seg)], [0]))
    net.add_tensor(out, [s for s in segs if s != seg])


def greedy_contract(
    tensors: Sequence[GradedTensor], D: HeegaardDiagram, lab: ChiLabeling, A: HopfChiCoalgebra, integrals: Integrals
) -> Native:
    """Contract without forming the full product: merge the cheapest adjacent pair on some upper circle."""
    f = A.field
    net = _Network(f, scalar=f.one)
    seg_of: dict[str, int] = {}
    for t in tensors:
        segs = []
        for s, x in t.slots:
            seg_of[s] = net.new_segment(x)
            segs.append(seg_of[s])
        net.add_tensor(t.coefficients, segs)
    for u in D.uppers:
        x = lab.alpha[u.id]
        if not u.points:
            net.scalar = f.mul(net.scalar, f.native(trace_form(A, x, 0, integrals.lam[x]).item()))
            continue
        try:
            net.cycles[u.id] = [seg_of[s] for s in u.points]
        except KeyError as exc:
            raise InconsistentSlotSets(f"point {exc} on upper {u.id} has no lower tensor slot") from None
        for seg in net.cycles[u.id]:
            if net.grading[seg] != x:
                raise GradingMismatch(f"slot on upper {u.id} has grading {net.grading[seg]}, expected {x}")
    if len(seg_of) != len(upper_order(D)):
        raise InconsistentSlotSets("lower and upper circles see different point sets")

    while net.cycles:
        for u in [u for u, cyc in net.cycles.items() if len(cyc) == 1]:
            _close(net, A, u, integrals.lam[lab.alpha[u]])
        if not net.cycles:
            break
        best = None
        for u, cyc in sorted(net.cycles.items()):
            n = len(cyc)
            for i in range(n):
                a, b = cyc[i], cyc[(i + 1) % n]
                key = (_merge_cost(net, A, a, b), u, i)
                if best is None or key < best[0]:
                    best = (key, u, a, b)
        (cost, _, _), u, a, b = best
        logger.debug(f"merge on {u}: cost {cost}, {len(net.tensors)} tensors left")
        _merge(net, A, u, a, b)
    if net.tensors:
        raise InconsistentSlotSets("slots left over after contracting every upper circle")
    return net.scalar


# top level


@dataclass(frozen=True)
class InvariantResult:
    value: Scalar
    normalization_exponent: int
    labeling: ChiLabeling

    def as_dict(self) -> dict:
        return {
            "value": str(self.value),
            "field": self.value.field.to_json(),
            "normalization_exponent": self.normalization_exponent,
            "labeling": self.labeling.as_dict(),
        }


class InvariantEngine:
    """Evaluates the invariant for one Hopf chi-coalgebra, checking it and computing its integrals once."""

    def __init__(self, A: HopfChiCoalgebra, strategy: Strategy = "greedy", check: bool = True,
                 integrals: Integrals | None = None):
        if strategy not in ("greedy", "naive"):
            raise BadParameters(f"unknown contraction strategy {strategy!r}")
        self.A = A
        self.strategy = strategy
        if check:
            check_axioms(A).raise_for(InvalidHopfData, "Hopf chi-coalgebra axioms fail")
        self.integrals = integrals or compute_integrals(A)

    def contract(self, D: HeegaardDiagram, lab: ChiLabeling) -> Native:
        A, ints = self.A, self.integrals
        f = A.field
        for u in D.uppers:
            if A.dim(lab.alpha[u.id]) == 0:
                return f.zero
        tensors = [apply_antipodes(lower_tensor(D, lab, A, l.id, ints), D, lab, A) for l in D.lowers]
        if self.strategy == "naive":
            return upper_contract(permute_to_upper(tensors, D, f), D, lab, A, ints)
        return greedy_contract(tensors, D, lab, A, ints)

    def evaluate(self, D: HeegaardDiagram, lab: ChiLabeling) -> InvariantResult:
        validate(D).raise_for(InvalidDiagram, "invalid diagram")
        _require_labeling(D, lab, self.A)
        f = self.A.field
        exponent = D.normalization_exponent
        raw = self.contract(D, lab)
        value = f.mul(f.power(f.native(self.A.dim_identity), exponent), raw)
        logger.debug(f"K = {f.render_native(value)} for alpha={lab.alpha} beta={lab.beta}")
        return InvariantResult(Scalar(f, value), exponent, lab)

    def invariant(self, D: HeegaardDiagram, lab: ChiLabeling) -> Scalar:
        return self.evaluate(D, lab).value

    def many(self, D: HeegaardDiagram, labelings: Iterable[ChiLabeling]) -> list[InvariantResult]:
        return [self.evaluate(D, lab) for lab in labelings]

    def lens(self, p: int, q: int, x: int, e: int) -> Scalar:
        return lens_formula(p, q, self.A, x, e, self.integrals)


def compute_invariant(
    D: HeegaardDiagram, lab: ChiLabeling, A: HopfChiCoalgebra, strategy: Strategy = "greedy"
) -> Scalar:
    return InvariantEngine(A, strategy).invariant(D, lab)


def kuperberg(D: HeegaardDiagram, A1: HopfChiCoalgebra, strategy: Strategy = "greedy") -> Scalar:
    """The invariant of an ordinary Hopf algebra (trivially graded) with the constant labeling."""
    if not A1.cm.is_trivial():
        raise InvalidHopfData("kuperberg needs a Hopf algebra graded by the trivial crossed module")
    return compute_invariant(D, trivial_labeling(D), A1, strategy)


def lens_formula(p: int, q: int, A: HopfChiCoalgebra, x: int, e: int, integrals: Integrals | None = None) -> Scalar:
    """Closed form on L(p, q): ``d^-1 lambda_x mu^p (shift^q) Delta^p phi_{1,e}(Lambda)``."""
    ints = integrals or compute_integrals(A)
    f, cm, H = A.field, A.cm, A.cm.H
    build_lens(p, q)  # parameter check
    if H.power(x, p) != cm.chi[e] or cm.act(H.power(x, q), e) != e:
        raise InvalidLabeling(f"(x={x}, e={e}) does not label L({p},{q})")
    d = f.native(A.dim_identity)
    if A.dim(x) == 0:
        return Scalar(f, f.zero)
    v = tdot(f, A.action[(0, e)], ints.Lambda, ([1], [0]))
    T = iterated_coproduct(A, v, [x] * p)
    T = np.transpose(T, [(-k * q) % p for k in range(p)])
    form = trace_form(A, x, p, ints.lam[x])
    value = f.native(tdot(f, form, T, (list(range(p)), list(range(p)))).item())
    return Scalar(f, f.div(value, d))
