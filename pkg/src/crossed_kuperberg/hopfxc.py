"""Finite-type Hopf coalgebras graded by a crossed module, given by structure constants.

Conventions (every array is a numpy object array of field natives):

* ``GradedComponent.mu[i, j, k]``: coefficient of ``b_k`` in ``b_i b_j``.
* ``coproduct[(x, y)][i, j, k]``: coefficient of ``b_i (x) b_j`` in ``Delta_{x,y}(b_k)``.
* ``antipode[x][i, k]``: coefficient of ``b_i`` in ``S_x(b_k)``, ``S_x: A_{x^-1} -> A_x``.
* ``action[(x, e)][i, k]``: coefficient of ``b_i`` in ``phi_{x,e}(b_k)``, ``phi_{x,e}: A_x -> A_{chi(e)x}``.

A matrix for a linear map ``V -> W`` has shape ``(dim W, dim V)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

import numpy as np
from loguru import logger

from crossed_kuperberg import linalg
from crossed_kuperberg.errors import (
    BadCharacteristic,
    CharacteristicDividesDimension,
    DimensionMismatch,
    InvalidHopfData,
    NonUniqueIntegral,
    NotABicharacter,
    PostconditionViolated,
    Report,
)
from crossed_kuperberg.scalar import FieldDescriptor, char_divides
from crossed_kuperberg.xmod import CrossedModule, FiniteGroup, abelian_to_trivial, trivial_xmod, z4_to_z2


def tdot(field: FieldDescriptor, a: np.ndarray, b: np.ndarray, axes) -> np.ndarray:
    """Exact ``np.tensordot`` on object arrays, safe for empty contractions."""
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    ax_a, ax_b = axes
    if isinstance(ax_a, int):
        ax_a, ax_b = [ax_a], [ax_b]
    shape = [n for i, n in enumerate(a.shape) if i not in ax_a] + [n for i, n in enumerate(b.shape) if i not in ax_b]
    if any(a.shape[i] == 0 for i in ax_a) or 0 in shape:
        return field.zeros(tuple(shape))
    out = np.asarray(np.tensordot(a, b, axes=(list(ax_a), list(ax_b))), dtype=object)
    if field.kind == "Fp":
        out = np.asarray(np.mod(out, field.p), dtype=object)
    return out


def outer(field: FieldDescriptor, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return tdot(field, a, b, ([], []))


def _equal(a: np.ndarray, b: np.ndarray) -> bool:
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    return a.shape == b.shape and bool(np.all(a == b)) if a.size else a.shape == b.shape


@dataclass(frozen=True, eq=False)
class GradedComponent:
    grading: int
    dim: int
    mu: np.ndarray
    unit: np.ndarray

    def __post_init__(self):
        d = self.dim
        if d < 0:
            raise DimensionMismatch("negative dimension")
        mu = np.asarray(self.mu, dtype=object).reshape((d, d, d)) if d else np.empty((0, 0, 0), dtype=object)
        unit = np.asarray(self.unit, dtype=object).reshape((d,)) if d else np.empty((0,), dtype=object)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "unit", unit)

    def multiply(self, field: FieldDescriptor, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return tdot(field, b, tdot(field, a, self.mu, ([0], [0])), ([0], [0]))


def _zero_component(x: int) -> GradedComponent:
    return GradedComponent(x, 0, np.empty((0, 0, 0), dtype=object), np.empty((0,), dtype=object))


class HopfChiCoalgebra:
    def __init__(
        self,
        field: FieldDescriptor,
        cm: CrossedModule,
        components: Mapping[int, GradedComponent],
        coproduct: Mapping[tuple[int, int], Any],
        counit: Any,
        antipode: Mapping[int, Any],
        action: Mapping[tuple[int, int], Any],
        name: str = "",
    ):
        self.field = field
        self.cm = cm
        self.name = name
        H = cm.H
        comps = {}
        for x in H.elements():
            c = components.get(x) or _zero_component(x)
            if c.grading != x:
                raise DimensionMismatch(f"component stored under {x} claims grading {c.grading}")
            comps[x] = GradedComponent(x, c.dim, field.array(c.mu) if c.dim else c.mu, field.array(c.unit) if c.dim else c.unit)
        self.components = comps
        d = self.dim
        self.coproduct = {}
        for x in H.elements():
            for y in H.elements():
                shape = (d(x), d(y), d(H.mul(x, y)))
                self.coproduct[(x, y)] = self._matrix(coproduct.get((x, y)), shape, f"coproduct {x},{y}")
        self.counit = self._matrix(counit, (d(0),), "counit")
        self.antipode = {x: self._matrix(antipode.get(x), (d(x), d(H.inv(x))), f"antipode {x}") for x in H.elements()}
        self.action = {}
        for x in H.elements():
            for e in cm.E.elements():
                shape = (d(H.mul(cm.chi[e], x)), d(x))
                self.action[(x, e)] = self._matrix(action.get((x, e)), shape, f"action {x},{e}")

    def _matrix(self, value: Any, shape: tuple[int, ...], what: str) -> np.ndarray:
        if value is None:
            if 0 in shape:
                return self.field.zeros(shape)
            raise DimensionMismatch(f"{what} is missing")
        arr = np.asarray(value, dtype=object)
        if arr.size != int(np.prod(shape)):
            raise DimensionMismatch(f"{what} has {arr.size} entries, expected shape {shape}")
        if arr.size == 0:
            return self.field.zeros(shape)
        return self.field.array(arr.reshape(shape))

    def dim(self, x: int) -> int:
        return self.components[x].dim

    @property
    def dim_identity(self) -> int:
        return self.dim(0)

    @property
    def support(self) -> list[int]:
        return [x for x in self.cm.H.elements() if self.dim(x) > 0]

    def mu(self, x: int) -> np.ndarray:
        return self.components[x].mu

    def unit(self, x: int) -> np.ndarray:
        return self.components[x].unit

    def multiply(self, x: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.components[x].multiply(self.field, a, b)

    def basis(self, x: int, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim(x))
        v[i] = self.field.one
        return v

    def __eq__(self, other) -> bool:
        if not isinstance(other, HopfChiCoalgebra) or other.field != self.field or other.cm != self.cm:
            return False
        for x in self.cm.H.elements():
            if self.dim(x) != other.dim(x) or not _equal(self.mu(x), other.mu(x)) or not _equal(self.unit(x), other.unit(x)):
                return False
        return (
            all(_equal(self.coproduct[k], other.coproduct[k]) for k in self.coproduct)
            and _equal(self.counit, other.counit)
            and all(_equal(self.antipode[k], other.antipode[k]) for k in self.antipode)
            and all(_equal(self.action[k], other.action[k]) for k in self.action)
        )

    __hash__ = None

    def __repr__(self) -> str:
        dims = {x: self.dim(x) for x in self.cm.H.elements()}
        return f"HopfChiCoalgebra({self.name or '?'}, over {self.field}, dims={dims})"

    @classmethod
    def ordinary(cls, field: FieldDescriptor, mu: Any, unit: Any, coproduct: Any, counit: Any, antipode: Any,
                 name: str = "") -> "HopfChiCoalgebra":
        """An ordinary Hopf algebra, graded by the trivial crossed module."""
        unit = np.asarray(unit, dtype=object)
        d = unit.shape[0]
        comp = GradedComponent(0, d, np.asarray(mu, dtype=object), unit)
        return cls(field, trivial_xmod(), {0: comp}, {(0, 0): coproduct}, counit, {0: antipode},
                   {(0, 0): field.identity(d)}, name)

    def restrict_to_identity(self) -> "HopfChiCoalgebra":
        """The ordinary Hopf algebra A_1 (its invariant is Kuperberg's)."""
        return HopfChiCoalgebra.ordinary(
            self.field, self.mu(0), self.unit(0), self.coproduct[(0, 0)], self.counit, self.antipode[0],
            name=f"{self.name}|1",
        )


# axioms


def _check_shapes(A: HopfChiCoalgebra) -> None:
    cm, H = A.cm, A.cm.H
    for (x, e), phi in A.action.items():
        if phi.shape != (A.dim(H.mul(cm.chi[e], x)), A.dim(x)):
            raise DimensionMismatch(f"action {x},{e} has shape {phi.shape}")
    for x in H.elements():
        for e in cm.E.elements():
            if A.dim(H.mul(cm.chi[e], x)) != A.dim(x):
                raise DimensionMismatch(f"action of {e} moves A_{x} onto a component of another dimension")


def check_axioms(A: HopfChiCoalgebra) -> Report:
    """Evaluate every Hopf coalgebra and action axiom on basis elements."""
    _check_shapes(A)
    f, cm, H, E = A.field, A.cm, A.cm.H, A.cm.E
    report = Report()
    d = A.dim

    for x in H.elements():
        if not d(x):
            continue
        mu, unit = A.mu(x), A.unit(x)
        ident = f.identity(d(x))
        left = tdot(f, unit, mu, ([0], [0]))
        right = tdot(f, unit, mu, ([0], [1]))
        if not (_equal(left, ident) and _equal(right, ident)):
            report.add("algebra-unit", f"1_{x} is not a two-sided unit of A_{x}")
        t1 = tdot(f, mu, mu, ([2], [0]))
        t2 = np.transpose(tdot(f, mu, mu, ([2], [1])), (2, 0, 1, 3))
        if not _equal(t1, t2):
            report.add("algebra-associativity", f"A_{x} is not associative")

    for x, y, z in itertools.product(H.elements(), repeat=3):
        xy, yz = H.mul(x, y), H.mul(y, z)
        if not d(H.mul(xy, z)):
            continue
        lhs = tdot(f, A.coproduct[(x, y)], A.coproduct[(xy, z)], ([2], [0]))
        rhs = np.transpose(tdot(f, A.coproduct[(x, yz)], A.coproduct[(y, z)], ([1], [2])), (0, 2, 3, 1))
        if not _equal(lhs, rhs):
            report.add("coassociativity", f"coassociativity fails for ({x}, {y}, {z})")

    for x in H.elements():
        if not d(x):
            continue
        ident = f.identity(d(x))
        if not _equal(tdot(f, A.counit, A.coproduct[(0, x)], ([0], [0])), ident):
            report.add("counit", f"(eps (x) id) Delta_(1,{x}) != id")
        if not _equal(tdot(f, A.coproduct[(x, 0)], A.counit, ([1], [0])), ident):
            report.add("counit", f"(id (x) eps) Delta_({x},1) != id")

    for x, y in itertools.product(H.elements(), repeat=2):
        xy = H.mul(x, y)
        if not (d(x) and d(y) and d(xy)):
            continue
        D = A.coproduct[(x, y)]
        lhs = tdot(f, A.mu(xy), D, ([2], [2]))
        both = outer(f, D, D)
        step = tdot(f, both, A.mu(x), ([0, 3], [0, 1]))
        rhs = tdot(f, step, A.mu(y), ([0, 2], [0, 1]))
        if not _equal(lhs, rhs):
            report.add("coproduct-multiplicative", f"Delta_({x},{y}) is not multiplicative")
        if not _equal(tdot(f, D, A.unit(xy), ([2], [0])), outer(f, A.unit(x), A.unit(y))):
            report.add("coproduct-unital", f"Delta_({x},{y})(1) != 1 (x) 1")

    if d(0):
        eps = A.counit
        prod = tdot(f, A.mu(0), eps, ([2], [0]))
        if not _equal(prod, outer(f, eps, eps)) or f.native(np.dot(eps, A.unit(0))) != f.one:
            report.add("counit-multiplicative", "eps is not an algebra map")

    for x in H.elements():
        xi = H.inv(x)
        if not d(x):
            continue
        S, mu = A.antipode[x], A.mu(x)
        target = outer(f, A.counit, A.unit(x))
        left = tdot(f, tdot(f, S, A.coproduct[(xi, x)], ([1], [0])), mu, ([0, 1], [0, 1]))
        right = tdot(f, tdot(f, A.coproduct[(x, xi)], S, ([1], [1])), mu, ([0, 2], [0, 1]))
        if not (_equal(left, target) and _equal(right, target)):
            report.add("antipode", f"antipode identity fails in grading {x}")
        if not _equal(tdot(f, S, A.antipode[xi], ([1], [0])), f.identity(d(x))):
            report.add("involutive", f"S_{x} S_{xi} != id")

    for x in H.elements():
        if d(x) and not _equal(A.action[(x, 0)], f.identity(d(x))):
            report.add("action-identity", f"phi_({x},1) != id")
    for x in H.elements():
        for e, g in itertools.product(E.elements(), repeat=2):
            ex = H.mul(cm.chi[e], x)
            lhs = tdot(f, A.action[(ex, g)], A.action[(x, e)], ([1], [0]))
            if not _equal(lhs, A.action[(x, E.mul(g, e))]):
                report.add("action-composition", f"phi_(chi(e)x,f) phi_(x,e) != phi_(x,fe) for x={x}, e={e}, f={g}")
    for x, y in itertools.product(H.elements(), repeat=2):
        xy = H.mul(x, y)
        for e, g in itertools.product(E.elements(), repeat=2):
            ex, gy = H.mul(cm.chi[e], x), H.mul(cm.chi[g], y)
            D = A.coproduct[(x, y)]
            lhs = tdot(f, A.action[(y, g)], tdot(f, A.action[(x, e)], D, ([1], [0])), ([1], [1]))
            lhs = np.transpose(lhs, (1, 0, 2))
            twisted = E.mul(e, cm.act(x, g))
            rhs = tdot(f, A.coproduct[(ex, gy)], A.action[(xy, twisted)], ([2], [0]))
            if not _equal(lhs, rhs):
                report.add("action-coproduct", f"phi does not commute with Delta_({x},{y}) for e={e}, f={g}")
    for x in H.elements():
        if not d(x):
            continue
        for e in E.elements():
            ex = H.mul(cm.chi[e], x)
            phi = A.action[(x, e)]
            lhs = tdot(f, A.mu(x), phi, ([2], [1]))
            if not _equal(lhs, _phi_pair_product(f, phi, A.mu(ex))):
                report.add("action-multiplicative", f"phi_({x},{e}) is not multiplicative")
            if not _equal(tdot(f, phi, A.unit(x), ([1], [0])), A.unit(ex)):
                report.add("action-unital", f"phi_({x},{e})(1) != 1")
    if report:
        logger.debug(f"Hopf data {A.name or '?'}: {len(report)} violations")
    return report


def _phi_pair_product(f: FieldDescriptor, phi: np.ndarray, mu: np.ndarray) -> np.ndarray:
    """[i, j, m] -> sum_pq phi[p, i] phi[q, j] mu[p, q, m]."""
    step = tdot(f, phi, mu, ([0], [0]))  # (i, q, m)
    return np.transpose(tdot(f, step, phi, ([1], [0])), (0, 2, 1))  # (i, m, j) -> (i, j, m)


def derived_properties(A: HopfChiCoalgebra) -> Report:
    """Consequences of the axioms: S anti-(co)multiplicative, phi invertible and commuting with S."""
    f, cm, H, E = A.field, A.cm, A.cm.H, A.cm.E
    report = Report()
    for x in H.elements():
        xi = H.inv(x)
        if not A.dim(x):
            continue
        S = A.antipode[x]
        # S(ab) = S(b)S(a) for a, b in A_{x^-1}
        lhs = tdot(f, A.mu(xi), S, ([2], [1]))
        rhs = np.transpose(_phi_pair_product(f, S, A.mu(x)), (1, 0, 2))
        if not _equal(lhs, rhs):
            report.add("antipode-antimultiplicative", f"S_{x} is not anti-multiplicative")
        for e in E.elements():
            ex = H.mul(cm.chi[e], x)
            back = tdot(f, A.action[(ex, E.inv(e))], A.action[(x, e)], ([1], [0]))
            if not _equal(back, f.identity(A.dim(x))):
                report.add("action-invertible", f"phi_({x},{e}) is not inverted by phi_(chi(e)x,e^-1)")
            # phi_{x,e} S_x = S_{chi(e)x} phi_{x^-1, ^{x^-1}(e^-1)}
            twisted = cm.act(xi, E.inv(e))
            left = tdot(f, A.action[(x, e)], S, ([1], [0]))
            right = tdot(f, A.antipode[ex], A.action[(xi, twisted)], ([1], [0]))
            if not _equal(left, right):
                report.add("action-antipode", f"phi_({x},{e}) does not commute with S")
    for x, y in itertools.product(H.elements(), repeat=2):
        xy = H.mul(x, y)
        # Delta_{x,y} S_{xy} = (S_x (x) S_y) flip Delta_{y^-1,x^-1}
        lhs = tdot(f, A.coproduct[(x, y)], A.antipode[xy], ([2], [0]))
        step = tdot(f, A.antipode[x], A.coproduct[(H.inv(y), H.inv(x))], ([1], [1]))  # (i, q, k)
        rhs = np.transpose(tdot(f, A.antipode[y], step, ([1], [1])), (1, 0, 2))  # (j, i, k) -> (i, j, k)
        if not _equal(lhs, rhs):
            report.add("antipode-anticomultiplicative", f"S is not anti-comultiplicative for ({x}, {y})")
    return report


# integrals


@dataclass(frozen=True, eq=False)
class Integrals:
    """Right integral ``Lambda`` of ``A_1`` and the right chi-integral ``lam``.

    ``lam[x]`` is the coordinate row of ``lambda_x`` in the dual basis of ``A_x``.
    Normalized so that ``eps(Lambda) = lambda_1(1_1) = dim A_1``.
    """

    Lambda: np.ndarray
    lam: dict[int, np.ndarray]

    def value(self, x: int, v: np.ndarray) -> Any:
        return np.dot(self.lam[x], v) if len(v) else 0


def _unique_solution(field: FieldDescriptor, rows: list[list[Any]], ncols: int, what: str) -> list[Any]:
    basis = linalg.nullspace(field, rows, ncols)
    if len(basis) != 1:
        raise NonUniqueIntegral(f"the space of {what} has dimension {len(basis)}, expected 1")
    return basis[0]


def compute_integrals(A: HopfChiCoalgebra) -> Integrals:
    f, cm, H, E = A.field, A.cm, A.cm.H, A.cm.E
    d1 = A.dim_identity
    if d1 == 0:
        raise InvalidHopfData("A_1 is zero")
    if char_divides(f, d1):
        raise CharacteristicDividesDimension(f"characteristic {f.characteristic} divides dim A_1 = {d1}")
    mu1, eps = A.mu(0), A.counit

    rows: list[list[Any]] = []
    for i in range(d1):
        for m in range(d1):
            rows.append([f.sub(mu1[k, i, m], eps[i] if k == m else f.zero) for k in range(d1)])
            rows.append([f.sub(mu1[i, k, m], eps[i] if k == m else f.zero) for k in range(d1)])
    c = _unique_solution(f, rows, d1, "two-sided integrals of A_1")
    s = f.native(sum(f.mul(a, b) for a, b in zip(eps, c)))
    if f.is_zero(s):
        raise PostconditionViolated("normalization", "eps vanishes on the integral")
    scale = f.div(f.native(d1), s)
    Lambda = f.array([f.mul(scale, v) for v in c])

    support = A.support
    offset: dict[int, int] = {}
    n = 0
    for x in support:
        offset[x] = n
        n += A.dim(x)

    def row() -> list[Any]:
        return [f.zero] * n

    rows = []
    for x, y in itertools.product(support, repeat=2):
        xy = H.mul(x, y)
        if xy not in offset:
            continue
        D = A.coproduct[(x, y)]
        for k in range(A.dim(xy)):
            # (id (x) lambda_y) Delta_{x,y} = eta_x lambda_{xy}
            for i in range(A.dim(x)):
                r = row()
                for j in range(A.dim(y)):
                    r[offset[y] + j] = f.add(r[offset[y] + j], D[i, j, k])
                r[offset[xy] + k] = f.sub(r[offset[xy] + k], A.unit(x)[i])
                rows.append(r)
            # (lambda_x (x) id) Delta_{x,y} = eta_y lambda_{xy}
            for j in range(A.dim(y)):
                r = row()
                for i in range(A.dim(x)):
                    r[offset[x] + i] = f.add(r[offset[x] + i], D[i, j, k])
                r[offset[xy] + k] = f.sub(r[offset[xy] + k], A.unit(y)[j])
                rows.append(r)
    for x in support:
        for e in E.elements():
            ex = H.mul(cm.chi[e], x)
            phi = A.action[(x, e)]
            for k in range(A.dim(x)):
                r = row()
                for m in range(A.dim(ex)):
                    r[offset[ex] + m] = f.add(r[offset[ex] + m], phi[m, k])
                r[offset[x] + k] = f.sub(r[offset[x] + k], f.one)
                rows.append(r)
    v = _unique_solution(f, rows, n, "chi-integrals")
    s = f.native(sum(f.mul(v[offset[0] + i], A.unit(0)[i]) for i in range(d1)))
    if f.is_zero(s):
        raise PostconditionViolated("normalization", "lambda_1 vanishes on 1")
    scale = f.div(f.native(d1), s)
    lam = {}
    for x in H.elements():
        if x in offset:
            lam[x] = f.array([f.mul(scale, v[offset[x] + i]) for i in range(A.dim(x))])
        else:
            lam[x] = f.zeros(0)
    integrals = Integrals(Lambda, lam)
    _check_integrals(A, integrals)
    logger.debug(f"integrals of {A.name or '?'}: Lambda={list(Lambda)}")
    return integrals


def _check_integrals(A: HopfChiCoalgebra, ints: Integrals) -> None:
    f, H = A.field, A.cm.H
    d1 = f.native(A.dim_identity)
    Lambda, lam = ints.Lambda, ints.lam
    if f.native(np.dot(A.counit, Lambda)) != d1:
        raise PostconditionViolated("normalization", "eps(Lambda) != dim A_1")
    if f.native(np.dot(lam[0], Lambda)) != d1:
        raise PostconditionViolated("normalization", "lambda_1(Lambda) != dim A_1")
    for x in A.support:
        if f.native(np.dot(lam[x], A.unit(x))) != d1:
            raise PostconditionViolated("normalization", f"lambda_{x}(1) != dim A_1")
        form = tdot(f, A.mu(x), lam[x], ([2], [0]))
        if not _equal(form, form.T):
            raise PostconditionViolated("symmetry", f"lambda_{x} is not symmetric")
        xi = H.inv(x)
        if not _equal(tdot(f, lam[x], A.antipode[x], ([0], [0])), lam[xi]):
            raise PostconditionViolated("antipode-invariance", f"lambda_{x} S_{x} != lambda_{xi}")
        # sigma Delta_{x,x^-1}(Lambda) = Delta_{x^-1,x}(Lambda)
        a = tdot(f, A.coproduct[(x, xi)], Lambda, ([2], [0]))
        b = tdot(f, A.coproduct[(xi, x)], Lambda, ([2], [0]))
        if not _equal(a.T, b):
            raise PostconditionViolated("cosymmetry", f"Lambda is not cosymmetric in grading {x}")
    if not _equal(tdot(f, A.antipode[0], Lambda, ([1], [0])), Lambda):
        raise PostconditionViolated("antipode-invariance", "S_1(Lambda) != Lambda")


# builtins


Bicharacter = Callable[[int, int], Any]


def builtin_group_algebra(
    G: FiniteGroup,
    E: FiniteGroup,
    omega: Bicharacter | Sequence[Sequence[Any]] | None = None,
    field: FieldDescriptor | None = None,
) -> HopfChiCoalgebra:
    """k[G] graded by E -> 1, with e acting by g -> omega(g, e) g."""
    f = field or FieldDescriptor.rationals()
    cm = abelian_to_trivial(E)
    if omega is None:
        values = [[f.one for _ in E.elements()] for _ in G.elements()]
    elif callable(omega):
        values = [[f.native(omega(g, e)) for e in E.elements()] for g in G.elements()]
    else:
        values = [[f.native(v) for v in row] for row in omega]
        if len(values) != G.order or any(len(r) != E.order for r in values):
            raise DimensionMismatch("omega must be a |G| x |E| table")
    for g in G.elements():
        for e in E.elements():
            if f.is_zero(values[g][e]):
                raise NotABicharacter(f"omega({g}, {e}) = 0")
            for h in G.elements():
                if values[G.mul(g, h)][e] != f.mul(values[g][e], values[h][e]):
                    raise NotABicharacter(f"omega is not multiplicative in G at ({g}, {h}; {e})")
            for k in E.elements():
                if values[g][E.mul(e, k)] != f.mul(values[g][e], values[g][k]):
                    raise NotABicharacter(f"omega is not multiplicative in E at ({g}; {e}, {k})")
    n = G.order
    mu = f.zeros((n, n, n))
    D = f.zeros((n, n, n))
    S = f.zeros((n, n))
    for g in G.elements():
        D[g, g, g] = f.one
        S[G.inv(g), g] = f.one
        for h in G.elements():
            mu[g, h, G.mul(g, h)] = f.one
    unit = f.zeros(n)
    unit[0] = f.one
    counit = f.array([f.one] * n)
    action = {}
    for e in E.elements():
        phi = f.zeros((n, n))
        for g in G.elements():
            phi[g, g] = values[g][e]
        action[(0, e)] = phi
    comp = GradedComponent(0, n, mu, unit)
    return HopfChiCoalgebra(f, cm, {0: comp}, {(0, 0): D}, counit, {0: S}, action, name=f"k[G{n}]")


def cyclic_character(n: int, m: int, zeta: Any, field: FieldDescriptor | None = None) -> Bicharacter:
    """omega(g, e) = zeta^(g e) on Z/n x Z/m."""
    f = field or FieldDescriptor.rationals()
    z = f.native(zeta)
    if f.power(z, n) != f.one or f.power(z, m) != f.one:
        raise NotABicharacter(f"{f.render_native(z)} is not a common root of unity of orders {n} and {m}")
    return lambda g, e: f.power(z, g * e)


def _kp4_products(f: FieldDescriptor) -> tuple[np.ndarray, np.ndarray]:
    mu0 = f.zeros((4, 4, 4))
    for i, j in itertools.product(range(4), repeat=2):
        mu0[i, j, (i + j) % 4] = f.one
    # grading 1: index i + 2j is u^i v^j, and v u = -u v
    mu1 = f.zeros((4, 4, 4))
    for a, b in itertools.product(range(4), repeat=2):
        i, j, k, l = a % 2, a // 2, b % 2, b // 2
        sign = -1 if (j * k) % 2 else 1
        mu1[a, b, (i + k) % 2 + 2 * ((j + l) % 2)] = f.native(sign)
    return mu0, mu1


def _tensor_mult(f: FieldDescriptor, s: np.ndarray, t: np.ndarray, mu_x: np.ndarray, mu_y: np.ndarray) -> np.ndarray:
    both = outer(f, s, t)  # (i, j, k, l)
    step = tdot(f, both, mu_x, ([0, 2], [0, 1]))  # (j, l, p)
    return tdot(f, step, mu_y, ([0, 1], [0, 1]))  # (p, q)


def builtin_kp4(field: FieldDescriptor | None = None) -> HopfChiCoalgebra:
    """An 8-dimensional Hopf algebra, the Kac-Paljutkin algebra, graded by Z/4 -> Z/2."""
    f = field or FieldDescriptor.rationals()
    if f.characteristic == 2:
        raise BadCharacteristic("kp4 needs characteristic != 2")
    cm = z4_to_z2()
    mu0, mu1 = _kp4_products(f)
    mus = {0: mu0, 1: mu1}
    half = f.native(Fraction(1, 2))

    def vec(index: int, scale: Any = 1) -> np.ndarray:
        v = f.zeros(4)
        v[index] = f.native(scale)
        return v

    one, a, a2 = vec(0), vec(1), vec(2)
    u, v = vec(1), vec(2)

    def tensor(s, t):
        return outer(f, s, t)

    def omega(x: int, y: int, s: np.ndarray, t: np.ndarray) -> np.ndarray:
        """(1 (x) 1 + s (x) 1 + 1 (x) t - s (x) t) / 2 in A_x (x) A_y."""
        total = tensor(one, one) + tensor(s, one) + tensor(one, t) - tensor(s, t)
        return f.array(total * half)

    def times(x, y, s, t):
        return _tensor_mult(f, s, t, mus[x], mus[y])

    gens = {
        (0, 0): {"a": times(0, 0, tensor(a, a), omega(0, 0, a2, a2))},
        (0, 1): {"u": times(0, 1, tensor(a, u), omega(0, 1, a2, v)), "v": tensor(a2, v)},
        (1, 0): {"u": times(1, 0, tensor(u, a), omega(1, 0, f.array(-v), a2)), "v": tensor(v, a2)},
        (1, 1): {"a": times(1, 1, tensor(u, u), omega(1, 1, f.array(-v), v))},
    }
    coproduct = {}
    for (x, y), images in gens.items():
        D = f.zeros((4, 4, 4))
        if "a" in images:
            power = tensor(one, one)
            for k in range(4):
                D[:, :, k] = power
                power = times(x, y, power, images["a"])
        else:
            for k in range(4):
                i, j = k % 2, k // 2
                t = tensor(one, one)
                if i:
                    t = times(x, y, t, images["u"])
                if j:
                    t = times(x, y, t, images["v"])
                D[:, :, k] = t
        coproduct[(x, y)] = D
    counit = f.array([1, 1, 1, 1])
    S0 = f.identity(4)
    S1 = f.identity(4)
    S1[3, 3] = f.native(-1)  # S(uv) = vu = -uv
    action = {}
    for n in range(4):
        sign = f.native((-1) ** n)
        action[(0, n)] = f.array(np.diag([f.power(sign, k) for k in range(4)]))
        action[(1, n)] = f.array(np.diag([f.power(sign, k % 2) for k in range(4)]))
    components = {x: GradedComponent(x, 4, mus[x], vec(0)) for x in (0, 1)}
    return HopfChiCoalgebra(f, cm, components, coproduct, counit, {0: S0, 1: S1}, action, name="kp4")


# duals


def opposite(A: HopfChiCoalgebra) -> HopfChiCoalgebra:
    """Opposite multiplication; S^op_x is the inverse of S_{x^-1}."""
    f, H = A.field, A.cm.H
    comps = {x: GradedComponent(x, A.dim(x), np.transpose(A.mu(x), (1, 0, 2)), A.unit(x)) for x in H.elements()}
    antipode = {x: linalg.inverse(f, A.antipode[H.inv(x)]) for x in H.elements()}
    return HopfChiCoalgebra(f, A.cm, comps, A.coproduct, A.counit, antipode, A.action, name=f"{A.name}^op")


def coopposite(A: HopfChiCoalgebra) -> HopfChiCoalgebra:
    """A^cop_x = A_{x^-1}, with the flipped coproduct Delta_{y^-1,x^-1}."""
    f, cm, H = A.field, A.cm, A.cm.H
    comps = {x: GradedComponent(x, A.dim(H.inv(x)), A.mu(H.inv(x)), A.unit(H.inv(x))) for x in H.elements()}
    coproduct = {
        (x, y): np.transpose(A.coproduct[(H.inv(y), H.inv(x))], (1, 0, 2))
        for x in H.elements()
        for y in H.elements()
    }
    antipode = {x: linalg.inverse(f, A.antipode[x]) for x in H.elements()}
    action = {}
    for x in H.elements():
        xi = H.inv(x)
        for e in cm.E.elements():
            action[(x, e)] = A.action[(xi, cm.act(xi, cm.E.inv(e)))]
    return HopfChiCoalgebra(f, cm, comps, coproduct, A.counit, antipode, action, name=f"{A.name}^cop")
