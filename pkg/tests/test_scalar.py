from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from crossed_kuperberg.errors import BadParameters, DivisionByZero, FieldMismatch, InvalidInput
from crossed_kuperberg.linalg import inverse, nullspace, rref
from crossed_kuperberg.scalar import FieldDescriptor, Scalar, arith, char_divides, parse_scalar, render

Q = FieldDescriptor.rationals()
F7 = FieldDescriptor.prime(7)

fractions = st.fractions(min_value=-1000, max_value=1000, max_denominator=50)
residues = st.integers(min_value=0, max_value=6)


@given(fractions, fractions, fractions)
def test_rational_field_axioms(a, b, c):
    x, y, z = Scalar(Q, a), Scalar(Q, b), Scalar(Q, c)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == Scalar(Q, 0)
    if not x.is_zero():
        assert x * x.inverse() == Scalar(Q, 1)


@given(residues, residues, residues)
def test_prime_field_axioms(a, b, c):
    x, y, z = Scalar(F7, a), Scalar(F7, b), Scalar(F7, c)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == Scalar(F7, 0)
    if not x.is_zero():
        assert x / x == Scalar(F7, 1)


@given(fractions)
def test_render_parse_round_trip(a):
    x = Scalar(Q, a)
    assert parse_scalar(Q, render(x)) == x


def test_rendering_is_canonical():
    assert render(Scalar(Q, Fraction(6, 8))) == "3/4"
    assert render(Scalar(Q, 4)) == "4"
    assert render(Scalar(Q, Fraction(-1, 2))) == "-1/2"
    assert render(Scalar(F7, -1)) == "6"
    assert render(parse_scalar(F7, "1/2")) == "4"


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        Scalar(Q, 1) / Scalar(Q, 0)
    with pytest.raises(DivisionByZero):
        Scalar(F7, 3) / Scalar(F7, 14)
    with pytest.raises(ZeroDivisionError):
        Scalar(F7, 0).inverse()


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        arith(Scalar(Q, 1), Scalar(F7, 1), "add")
    with pytest.raises(FieldMismatch):
        Scalar(Q, 1) * Scalar(FieldDescriptor.prime(5), 2)


def test_arith_ops():
    a, b = Scalar(Q, 3), Scalar(Q, 4)
    assert arith(a, b, "add") == Scalar(Q, 7)
    assert arith(a, b, "sub") == Scalar(Q, -1)
    assert arith(a, b, "mul") == Scalar(Q, 12)
    assert arith(a, b, "div") == Scalar(Q, Fraction(3, 4))
    with pytest.raises(BadParameters):
        arith(a, b, "pow")


def test_negative_powers():
    assert Scalar(Q, 2) ** -2 == Scalar(Q, Fraction(1, 4))
    assert Scalar(F7, 3) ** -1 == Scalar(F7, 5)


def test_field_parameters():
    with pytest.raises(BadParameters):
        FieldDescriptor.prime(6)
    with pytest.raises(BadParameters):
        FieldDescriptor("Q", 3)
    with pytest.raises(InvalidInput):
        FieldDescriptor.from_json({"F": 3})
    with pytest.raises(InvalidInput):
        parse_scalar(Q, "one")
    assert FieldDescriptor.from_json(F7.to_json()) == F7
    assert FieldDescriptor.from_json("Q") == Q


def test_char_divides():
    assert not char_divides(Q, 8)
    assert char_divides(FieldDescriptor.prime(2), 8)
    assert not char_divides(F7, 8)
    with pytest.raises(BadParameters):
        char_divides(Q, 0)


def test_fraction_reduced_into_prime_field():
    assert F7.native(Fraction(1, 3)) == 5
    with pytest.raises(DivisionByZero):
        F7.native(Fraction(1, 7))


def test_linear_algebra_over_q():
    m = Q.array([[1, 2], [3, 4]])
    inv = inverse(Q, m)
    prod = Q.reduce(np.dot(m, inv))
    assert (prod == Q.identity(2)).all()
    reduced, pivots = rref(Q, [[2, 4, 6], [1, 2, 3]], 3)
    assert reduced == [[1, 2, 3]] and pivots == [0]
    basis = nullspace(Q, [[1, 1, 0]], 3)
    assert len(basis) == 2
    for v in basis:
        assert v[0] + v[1] == 0


def test_singular_inverse():
    with pytest.raises(DivisionByZero):
        inverse(Q, Q.array([[1, 2], [2, 4]]))
