from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from crossed_kuperberg.diagram import (
    HeegaardDiagram,
    LowerCircle,
    MergeSites,
    TautFactor,
    TautIdentity,
    UpperCircle,
    Word,
    build_lens,
    build_poincare,
    build_s3,
    connected_sum,
    isomorphic,
    omega,
    path_word,
    rename,
    reverse_orientation,
    taut_boundary,
    validate,
)
from crossed_kuperberg.errors import BadParameters, IllTypedWord, IncompatibleMergeSites, UnknownCircle

LENS_PARAMS = [(1, 1), (2, 1), (3, 1), (3, 2), (4, 1), (4, 3), (5, 1), (5, 2), (7, 3), (8, 3)]

letters = st.lists(st.tuples(st.sampled_from(["a", "b"]), st.sampled_from([1, -1])), max_size=12)


@pytest.mark.parametrize("p,q", LENS_PARAMS)
def test_lens_diagrams_are_valid(p, q):
    D = build_lens(p, q)
    assert not validate(D)
    assert D.genus == 1
    assert len(D.lower("l").points) == p
    assert omega(D, "l").letters == (("u", 1),) * p
    assert D.normalization_exponent == -1


def test_lens_upper_order_steps_by_minus_q():
    assert build_lens(5, 2).upper("u").points == ("s1", "s4", "s2", "s5", "s3")
    assert build_lens(3, 1).upper("u").points == ("s1", "s3", "s2")


@pytest.mark.parametrize("p,q", [(0, 1), (4, 2), (3, 3), (5, 6), (6, 0)])
def test_lens_parameters_rejected(p, q):
    with pytest.raises(BadParameters):
        build_lens(p, q)


def test_poincare_diagram():
    D = build_poincare()
    assert not validate(D)
    assert (D.genus, len(D.components), len(D.tauts)) == (2, 1, 1)
    assert len(D.lower("l1").points) == 7
    assert len(D.lower("l2").points) == 5
    assert omega(D, "l1").letters == (("u1", 1),) * 4 + (("u2", -1), ("u1", -1), ("u2", -1))
    assert omega(D, "l2").letters == (("u1", -1), ("u2", -1), ("u1", -1), ("u2", 1), ("u2", 1))


def test_s3_diagram():
    D = build_s3()
    assert not validate(D)
    assert D.normalization_exponent == 0
    assert taut_boundary(D, D.taut("r")).is_trivial()


def test_flipped_taut_sign_breaks_the_boundary():
    D = build_lens(5, 2)
    t = D.taut("r")
    bad = TautIdentity(t.region, t.base_component, (t.factors[0], replace(t.factors[1], eps=-1)))
    assert "taut-boundary" in validate(replace(D, tauts=(bad,))).codes


def test_dropped_point_breaks_incidence():
    D = build_lens(3, 1)
    lower = D.lower("l")
    broken = replace(D, lowers=(LowerCircle("l", "c", lower.points[1:]),))
    assert "incidence" in validate(broken).codes


def test_structural_violations_named():
    D = build_lens(3, 1)
    assert "euler-components" in validate(replace(D, components=("c", "c2"))).codes
    assert "euler-regions" in validate(replace(D, tauts=D.tauts + (TautIdentity("r2", "c"),))).codes
    assert "genus" in validate(replace(D, genus=-1)).codes
    # an upper whose sides disagree with the single component
    stray = replace(D, uppers=(UpperCircle("u", "c", "elsewhere", D.upper("u").points),))
    assert "ids" in validate(stray).codes


def test_ill_typed_taut_word():
    D = build_lens(3, 1)
    t = D.taut("r")
    wrong = TautFactor(Word("c", "c", (("v", 1),)), "l", 1)
    bad = replace(D, tauts=(TautIdentity("r", "c", (t.factors[0], wrong)),))
    assert "taut-typing" in validate(bad).codes


def test_lookups_raise_unknown_circle():
    D = build_lens(2, 1)
    for lookup in (D.upper, D.lower, D.point, D.taut):
        with pytest.raises(UnknownCircle):
            lookup("missing")


@given(letters)
def test_reduced_words_have_no_cancelling_pairs(seq):
    w = Word("c", "c", tuple(seq)).reduced()
    for (u, e), (v, f) in zip(w.letters, w.letters[1:]):
        assert not (u == v and e == -f)
    assert (w * w.inverse()).is_trivial()
    assert w.reduced() == w


def test_word_composition_is_typed():
    a = Word("c1", "c2", (("u", 1),))
    with pytest.raises(IllTypedWord):
        a * a
    with pytest.raises(IllTypedWord):
        a.power(2)
    assert (a * a.inverse()) == Word.identity("c1")
    assert Word("c", "c", (("u", 1),)).power(-2).letters == (("u", -1), ("u", -1))


def test_substitute_and_typing():
    w = Word("c", "c", (("u", 1), ("v", -1)))
    images = {"v": Word("c", "c", (("u", 1), ("v", 1)))}
    assert w.substitute(images).letters == (("u", 1), ("v", -1), ("u", -1))
    ends = {"u": ("c", "d"), "v": ("c", "d")}
    assert Word("c", "c", (("u", 1), ("v", -1))).typing_error(ends) is None
    assert "starts at" in Word("c", "c", (("u", 1), ("u", 1))).typing_error(ends)


def test_path_word_follows_upper_circles():
    D = HeegaardDiagram(
        genus=0,
        components=("a", "b"),
        uppers=(UpperCircle("u", "b", "a"),),
        lowers=(),
        points=(),
        tauts=(TautIdentity("r", "a"),),
    )
    assert not validate(D)
    assert path_word(D, "a", "b").letters == (("u", -1),)
    assert path_word(D, "b", "a").letters == (("u", 1),)


def test_connected_sum():
    D = connected_sum(build_lens(2, 1), build_lens(3, 1))
    assert not validate(D)
    assert (D.genus, len(D.components), len(D.tauts)) == (2, 1, 1)
    assert set(D.upper_ids) == {"1.u", "2.u"}
    assert len(D.taut("1.r").factors) == 4
    assert D.normalization_exponent == -2


def test_connected_sum_with_disjoint_ids_keeps_names():
    D2 = rename(build_lens(3, 1), lambda s: s + "'")
    D = connected_sum(build_lens(2, 1), D2)
    assert set(D.lower_ids) == {"l", "l'"}
    assert D.components == ("c",)


def test_connected_sum_rejects_bad_sites():
    with pytest.raises(IncompatibleMergeSites):
        connected_sum(build_lens(2, 1), build_lens(3, 1), MergeSites("c", "c", "nowhere", "r"))
    with pytest.raises(IncompatibleMergeSites):
        connected_sum(build_lens(2, 1), build_lens(3, 1), MergeSites("x", "c", "r", "r"))


@pytest.mark.parametrize("D", [build_lens(5, 2), build_poincare(), connected_sum(build_lens(2, 1), build_lens(3, 1))])
def test_reverse_orientation(D):
    R = reverse_orientation(D)
    assert not validate(R)
    assert all(R.point(s.id).sign == -s.sign for s in D.points)
    assert reverse_orientation(R) == D


def test_isomorphism():
    D = build_poincare()
    assert isomorphic(D, rename(D, lambda s: s + "x"))
    assert isomorphic(build_lens(5, 2), build_lens(5, 2))
    assert not isomorphic(build_lens(5, 1), build_lens(5, 2))
    assert not isomorphic(build_lens(3, 1), build_lens(4, 1))


def test_graph_and_summary():
    D = build_poincare()
    g = D.graph()
    assert g.number_of_nodes() == 1 and g.number_of_edges() == 2
    assert "genus 2" in D.summary()
