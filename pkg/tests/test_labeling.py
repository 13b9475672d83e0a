import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from crossed_kuperberg.diagram import Word, build_lens, build_poincare, connected_sum
from crossed_kuperberg.errors import BudgetExceeded, InvalidLabeling
from crossed_kuperberg.labeling import (
    ChiLabeling,
    GaugeElement,
    all_gauge_elements,
    check_labeling,
    derivation,
    enumerate_labelings,
    eval_word,
    full_group_orbits,
    gauge_act,
    gauge_group_order,
    invert_alpha,
    orbit_classes,
    sum_labelings,
    trivial_labeling,
)
from crossed_kuperberg.xmod import abelian_to_trivial, conjugation, cyclic, symmetric, trivial_to, z4_to_z2

Z4Z2 = z4_to_z2()
CONJ = conjugation(symmetric(3))

words = st.lists(st.tuples(st.sampled_from(["u1", "u2"]), st.sampled_from([1, -1])), max_size=8)
elements = st.integers(min_value=0, max_value=5)


def expected_classes(p):
    if p % 2:
        return 1
    return 5 if p % 4 == 0 else 4


def partition(classes):
    return {frozenset(c.members) for c in classes}


def test_real_projective_space_labelings():
    D = build_lens(2, 1)
    labs = enumerate_labelings(D, Z4Z2)
    pairs = [(lab.alpha["u"], lab.beta["l"]) for lab in labs]
    assert pairs == [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 2)]
    classes = orbit_classes(labs, D, Z4Z2)
    reps = [(c.representative.alpha["u"], c.representative.beta["l"]) for c in classes]
    assert reps == [(0, 0), (0, 1), (1, 0), (1, 2)]
    assert [c.size for c in classes] == [2, 2, 1, 1]


@pytest.mark.parametrize("p", range(1, 13))
def test_lens_orbit_counts(p):
    D = build_lens(p, 1)
    classes = orbit_classes(enumerate_labelings(D, Z4Z2), D, Z4Z2)
    assert len(classes) == expected_classes(p)


@pytest.mark.parametrize("p,q", [(5, 2), (7, 3), (8, 3), (10, 3), (12, 5)])
def test_lens_orbit_counts_do_not_depend_on_q(p, q):
    D = build_lens(p, q)
    assert len(orbit_classes(enumerate_labelings(D, Z4Z2), D, Z4Z2)) == expected_classes(p)


@pytest.mark.parametrize("n", [2, 4, 6])
@pytest.mark.parametrize("p", range(1, 9))
def test_abelian_to_trivial_counts_cosets(n, p):
    cm = abelian_to_trivial(cyclic(n))
    D = build_lens(p, 1)
    labs = enumerate_labelings(D, cm)
    assert len(labs) == n
    multiples = {(p * e) % n for e in range(n)}
    assert len(orbit_classes(labs, D, cm)) == n // len(multiples)


@pytest.mark.parametrize("p", range(1, 7))
def test_full_group_agrees_with_generators(p):
    D = build_lens(p, 1)
    labs = enumerate_labelings(D, Z4Z2)
    assert partition(full_group_orbits(labs, D, Z4Z2)) == partition(orbit_classes(labs, D, Z4Z2))


def test_full_group_agrees_on_a_connected_sum():
    D = connected_sum(build_lens(2, 1), build_lens(2, 1))
    labs = enumerate_labelings(D, Z4Z2)
    # the merged region only constrains the product of both taut words
    assert len(labs) == 40
    assert partition(full_group_orbits(labs, D, Z4Z2)) == partition(orbit_classes(labs, D, Z4Z2))


@pytest.mark.parametrize("p", [2, 3, 4])
def test_gauge_action_laws(p):
    D = build_lens(p, 1)
    elements_ = list(all_gauge_elements(D, Z4Z2))
    assert len(elements_) == gauge_group_order(D, Z4Z2) == 8
    identity = GaugeElement.identity(D)
    for lab in enumerate_labelings(D, Z4Z2):
        assert gauge_act(identity, lab, D, Z4Z2) == lab
        for g in elements_:
            image = gauge_act(g, lab, D, Z4Z2)
            assert not check_labeling(D, Z4Z2, image)
            for h in elements_:
                composite = gauge_act(g.compose(h, D, Z4Z2), lab, D, Z4Z2)
                assert composite == gauge_act(g, gauge_act(h, lab, D, Z4Z2), D, Z4Z2)


def test_gauge_act_rejects_invalid_labeling():
    D = build_lens(2, 1)
    with pytest.raises(InvalidLabeling):
        gauge_act(GaugeElement.identity(D), ChiLabeling({"u": 1}, {"l": 1}), D, Z4Z2)


def test_check_labeling_codes():
    D = build_lens(3, 1)
    assert check_labeling(D, Z4Z2, ChiLabeling({}, {"l": 0})).codes == {"labeling-keys"}
    assert check_labeling(D, Z4Z2, ChiLabeling({"u": 2}, {"l": 0})).codes == {"labeling-range"}
    assert "grading" in check_labeling(D, Z4Z2, ChiLabeling({"u": 1}, {"l": 0})).codes
    assert "taut" in check_labeling(build_lens(2, 1), Z4Z2, ChiLabeling({"u": 1}, {"l": 1})).codes
    assert not check_labeling(D, Z4Z2, trivial_labeling(D))


def test_budget():
    D = build_poincare()
    with pytest.raises(BudgetExceeded):
        enumerate_labelings(D, Z4Z2, budget=10)
    labs = enumerate_labelings(D, Z4Z2, budget=64)
    assert labs and all(set(lab.alpha.values()) == {0} for lab in labs)
    with pytest.raises(BudgetExceeded):
        full_group_orbits(labs, D, Z4Z2, limit=1)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("orbits", [orbit_classes, full_group_orbits])
def test_representatives_do_not_depend_on_input_order(orbits, seed):
    D = build_lens(4, 1)
    labs = enumerate_labelings(D, Z4Z2)
    shuffled = list(labs)
    random.Random(seed).shuffle(shuffled)
    expected = orbits(labs, D, Z4Z2)
    for order in (shuffled, labs[::-1]):
        classes = orbits(order, D, Z4Z2)
        assert [c.representative for c in classes] == [c.representative for c in expected]
        assert [c.members for c in classes] == [c.members for c in expected]
    for c in expected:
        assert c.representative == min(c.members)
    reps = [c.representative for c in expected]
    assert reps == sorted(reps)


def test_missing_gauge_image_rejected():
    D = build_lens(2, 1)
    labs = [lab for lab in enumerate_labelings(D, Z4Z2) if lab != ChiLabeling({"u": 0}, {"l": 1})]
    with pytest.raises(InvalidLabeling):
        orbit_classes(labs, D, Z4Z2)


def test_duplicate_labelings_rejected():
    D = build_lens(2, 1)
    lab = trivial_labeling(D)
    with pytest.raises(InvalidLabeling):
        orbit_classes([lab, lab], D, Z4Z2)


def test_labeling_value_semantics():
    a = ChiLabeling({"u": 1}, {"l": 2})
    assert a == ChiLabeling({"u": 1}, {"l": 2})
    assert len({a, ChiLabeling({"u": 1}, {"l": 2})}) == 1
    assert a.with_updates(beta={"l": 0}, drop=("u",)) == ChiLabeling({}, {"l": 0})
    assert a.as_dict() == {"alpha": {"u": 1}, "beta": {"l": 2}}
    with pytest.raises(AttributeError):
        a.alpha = {}


def test_invert_and_sum():
    lab = ChiLabeling({"u": 1}, {"l": 0})
    assert invert_alpha(lab, Z4Z2) == lab
    assert invert_alpha(ChiLabeling({"u": 2}, {}), trivial_to(cyclic(3))).alpha == {"u": 1}
    D1, D2 = build_lens(2, 1), build_lens(3, 1)
    total = sum_labelings(D1, D2, lab, ChiLabeling({"u": 0}, {"l": 2}))
    D = connected_sum(D1, D2)
    assert total.alpha == {"1.u": 1, "2.u": 0}
    assert total.beta == {"1.l": 0, "2.l": 2}
    assert not check_labeling(D, Z4Z2, total)


@given(words, words, st.lists(elements, min_size=2, max_size=2), st.lists(elements, min_size=2, max_size=2))
def test_derivation_is_a_crossed_cocycle(w1, w2, alpha_values, d_values):
    alpha = dict(zip(["u1", "u2"], alpha_values))
    d = dict(zip(["u1", "u2"], d_values))
    a, b = Word("c", "c", tuple(w1)), Word("c", "c", tuple(w2))
    joined = Word("c", "c", a.letters + b.letters)
    lhs = derivation(CONJ, alpha, d, joined)
    twisted = CONJ.act(eval_word(CONJ.H, alpha, a), derivation(CONJ, alpha, d, b))
    assert lhs == CONJ.E.mul(derivation(CONJ, alpha, d, a), twisted)
    assert derivation(CONJ, alpha, d, joined.reduced()) == lhs
