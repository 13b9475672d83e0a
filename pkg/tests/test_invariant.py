from fractions import Fraction

import pytest

from crossed_kuperberg.diagram import build_lens, build_poincare, build_s3, connected_sum, reverse_orientation
from crossed_kuperberg.errors import BadParameters, InvalidHopfData, InvalidLabeling
from crossed_kuperberg.hopfxc import builtin_group_algebra, builtin_kp4, coopposite, opposite
from crossed_kuperberg.invariant import InvariantEngine, compute_invariant, kuperberg, lens_formula
from crossed_kuperberg.labeling import (
    ChiLabeling,
    enumerate_labelings,
    invert_alpha,
    orbit_classes,
    sum_labelings,
    trivial_labeling,
)
from crossed_kuperberg.scalar import FieldDescriptor, Scalar
from crossed_kuperberg.xmod import cyclic, symmetric, trivial_group, z4_to_z2

Q = FieldDescriptor.rationals()
F5 = FieldDescriptor.prime(5)
Z4Z2 = z4_to_z2()

RP3_VALUES = {(0, 0): 1, (0, 1): 0, (1, 0): Fraction(3, 4), (1, 2): Fraction(3, 4)}


def lab(x, e, u="u", l="l"):
    return ChiLabeling({u: x}, {l: e})


def test_real_projective_space(kp4_engine):
    D = build_lens(2, 1)
    for (x, e), value in RP3_VALUES.items():
        assert kp4_engine.invariant(D, lab(x, e)) == Scalar(Q, value)


def test_result_record(kp4_engine):
    result = kp4_engine.evaluate(build_lens(2, 1), lab(1, 0))
    assert result.normalization_exponent == -1
    assert result.as_dict() == {
        "value": "3/4",
        "field": "Q",
        "normalization_exponent": -1,
        "labeling": {"alpha": {"u": 1}, "beta": {"l": 0}},
    }


def test_prime_field_reduces_the_rational_values():
    engine = InvariantEngine(builtin_kp4(F5))
    assert engine.invariant(build_lens(2, 1), lab(1, 2)) == Scalar(F5, Fraction(3, 4))
    assert engine.invariant(build_lens(2, 1), lab(0, 0)) == Scalar(F5, 1)


@pytest.mark.parametrize("p", range(1, 7))
def test_gauge_equivalent_labelings_agree(p, kp4_engine):
    D = build_lens(p, 1)
    for orbit in orbit_classes(enumerate_labelings(D, Z4Z2), D, Z4Z2):
        values = {kp4_engine.invariant(D, member) for member in orbit.members}
        assert len(values) == 1


CONTRACTION_CASES = {
    "L(2,1)": build_lens(2, 1),
    "L(4,1)": build_lens(4, 1),
    "L(5,2)": build_lens(5, 2),
    "L(2,1)#L(3,1)": connected_sum(build_lens(2, 1), build_lens(3, 1)),
}


@pytest.mark.parametrize("D", list(CONTRACTION_CASES.values()), ids=list(CONTRACTION_CASES))
def test_naive_and_greedy_contraction_agree(D, kp4_engine, kp4_naive):
    for labeling in enumerate_labelings(D, Z4Z2):
        assert kp4_engine.invariant(D, labeling) == kp4_naive.invariant(D, labeling)


@pytest.mark.parametrize("p,q", [(1, 1), (2, 1), (3, 1), (3, 2), (4, 1), (4, 3), (5, 2), (6, 1)])
def test_lens_closed_form(p, q, kp4, kp4_integrals, kp4_engine):
    D = build_lens(p, q)
    for labeling in enumerate_labelings(D, Z4Z2):
        x, e = labeling.alpha["u"], labeling.beta["l"]
        expected = kp4_engine.invariant(D, labeling)
        assert lens_formula(p, q, kp4, x, e, kp4_integrals) == expected
        assert kp4_engine.lens(p, q, x, e) == expected


def test_lens_closed_form_rejects_non_labelings(kp4):
    with pytest.raises(InvalidLabeling):
        lens_formula(2, 1, kp4, 1, 1)
    with pytest.raises(BadParameters):
        lens_formula(4, 2, kp4, 0, 0)


def count_roots(G, p):
    return sum(1 for g in G.elements() if G.power(g, p) == 0)


@pytest.mark.parametrize(
    "G,p",
    [(cyclic(2), p) for p in range(1, 9)]
    + [(cyclic(3), p) for p in range(1, 7)]
    + [(cyclic(4), p) for p in range(1, 6)]
    + [(cyclic(6), p) for p in range(1, 5)]
    + [(symmetric(3), p) for p in range(1, 5)],
)
def test_group_algebras_count_homomorphisms(G, p):
    A = builtin_group_algebra(G, trivial_group())
    assert kuperberg(build_lens(p, 1), A) == Scalar(Q, count_roots(G, p))


@pytest.mark.parametrize("n", [2, 3])
def test_poincare_sphere_is_perfect(n):
    assert kuperberg(build_poincare(), builtin_group_algebra(cyclic(n), trivial_group())) == Scalar(Q, 1)


def test_three_sphere(kp4_engine):
    assert kp4_engine.invariant(build_s3(), trivial_labeling(build_s3())) == Scalar(Q, 1)
    assert kp4_engine.invariant(build_lens(1, 1), lab(0, 0)) == Scalar(Q, 1)


def test_kuperberg_needs_a_trivial_grading(kp4):
    with pytest.raises(InvalidHopfData):
        kuperberg(build_lens(2, 1), kp4)
    A1 = kp4.restrict_to_identity()
    assert kuperberg(build_lens(2, 1), A1) == compute_invariant(build_lens(2, 1), lab(0, 0), kp4)


def test_connected_sums_multiply(kp4_engine):
    D1, D2 = build_lens(2, 1), build_lens(3, 1)
    D = connected_sum(D1, D2)
    for lab1 in enumerate_labelings(D1, Z4Z2):
        for lab2 in enumerate_labelings(D2, Z4Z2):
            total = kp4_engine.invariant(D, sum_labelings(D1, D2, lab1, lab2))
            assert total == kp4_engine.invariant(D1, lab1) * kp4_engine.invariant(D2, lab2)


def test_opposite_orientation(kp4, kp4_engine):
    D = build_lens(3, 1)
    reversed_ = reverse_orientation(D)
    engines = [InvariantEngine(opposite(kp4)), InvariantEngine(coopposite(kp4))]
    for labeling in enumerate_labelings(D, Z4Z2):
        value = kp4_engine.invariant(reversed_, invert_alpha(labeling, Z4Z2))
        for engine in engines:
            assert engine.invariant(D, labeling) == value


def test_invalid_inputs_rejected(kp4, kp4_engine):
    with pytest.raises(InvalidLabeling):
        kp4_engine.invariant(build_lens(2, 1), lab(1, 1))
    with pytest.raises(BadParameters):
        InvariantEngine(kp4, strategy="random")


def test_many(kp4_engine):
    D = build_lens(2, 1)
    results = kp4_engine.many(D, enumerate_labelings(D, Z4Z2))
    assert [str(r.value) for r in results] == ["1", "0", "1", "0", "3/4", "3/4"]
