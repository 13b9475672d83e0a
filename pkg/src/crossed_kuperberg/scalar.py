"""Exact scalar arithmetic over the rationals and prime fields.

Tensor code works on numpy object arrays of *native* values: ``Fraction``
for the rationals, ``int`` residues for a prime field. :class:`Scalar` is
the boxed public value; :class:`FieldDescriptor` owns every conversion
between the two.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal, Union

import numpy as np

from crossed_kuperberg.errors import BadParameters, DivisionByZero, FieldMismatch, InvalidInput

Native = Union[Fraction, int]
FieldKind = Literal["Q", "Fp"]
ArithOp = Literal["add", "sub", "mul", "div"]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def _inverse_mod(a: int, p: int) -> int:
    # extended Euclid on (a, p)
    old_r, r = a % p, p
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    if old_r != 1:
        raise DivisionByZero(f"{a} is not invertible modulo {p}")
    return old_s % p


@dataclass(frozen=True)
class FieldDescriptor:
    kind: FieldKind = "Q"
    p: int | None = None

    def __post_init__(self):
        if self.kind == "Fp":
            if self.p is None or not is_prime(int(self.p)):
                raise BadParameters(f"prime field needs a prime modulus, got {self.p!r}")
        elif self.kind == "Q":
            if self.p is not None:
                raise BadParameters("the rational field takes no modulus")
        else:
            raise BadParameters(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> "FieldDescriptor":
        return cls("Q")

    @classmethod
    def prime(cls, p: int) -> "FieldDescriptor":
        return cls("Fp", int(p))

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == "Q" else int(self.p)

    def __str__(self) -> str:
        return "Q" if self.kind == "Q" else f"F_{self.p}"

    # natives

    @property
    def zero(self) -> Native:
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self) -> Native:
        return Fraction(1) if self.kind == "Q" else 1

    def native(self, value: Any) -> Native:
        """Coerce ints, Fractions, numeric strings or Scalars into canonical form."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch(f"scalar over {value.field} used in {self}")
            return value.value
        if isinstance(value, str):
            return self.parse_native(value)
        if isinstance(value, (bool, np.integer)):
            value = int(value)
        if self.kind == "Q":
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
            raise InvalidInput(f"cannot read {value!r} as a rational")
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise DivisionByZero(f"denominator of {value} vanishes in {self}")
            return value.numerator * _inverse_mod(value.denominator, self.p) % self.p
        if isinstance(value, int):
            return value % self.p
        raise InvalidInput(f"cannot read {value!r} in {self}")

    def is_zero(self, a: Native) -> bool:
        return a == 0 if self.kind == "Q" else a % self.p == 0

    def add(self, a: Native, b: Native) -> Native:
        return a + b if self.kind == "Q" else (a + b) % self.p

    def sub(self, a: Native, b: Native) -> Native:
        return a - b if self.kind == "Q" else (a - b) % self.p

    def mul(self, a: Native, b: Native) -> Native:
        return a * b if self.kind == "Q" else (a * b) % self.p

    def neg(self, a: Native) -> Native:
        return -a if self.kind == "Q" else (-a) % self.p

    def inv(self, a: Native) -> Native:
        if self.is_zero(a):
            raise DivisionByZero("division by zero")
        if self.kind == "Q":
            return 1 / Fraction(a)
        return _inverse_mod(a, self.p)

    def div(self, a: Native, b: Native) -> Native:
        return self.mul(a, self.inv(b))

    def power(self, a: Native, n: int) -> Native:
        if n < 0:
            return self.power(self.inv(a), -n)
        if self.kind == "Q":
            return Fraction(a) ** n
        return pow(int(a), n, self.p)

    def render_native(self, a: Native) -> str:
        a = self.native(a)
        if self.kind == "Q":
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return str(a)

    def parse_native(self, text: str) -> Native:
        text = text.strip()
        try:
            if "/" in text:
                num, den = text.split("/", 1)
                value = Fraction(int(num), int(den))
            else:
                value = Fraction(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"bad scalar {text!r}: {exc}") from exc
        return self.native(value)

    # arrays

    def array(self, values: Any) -> np.ndarray:
        arr = np.array(values, dtype=object)
        flat = arr.reshape(-1)
        for i, v in enumerate(flat):
            flat[i] = self.native(v)
        return flat.reshape(arr.shape)

    def zeros(self, shape: tuple[int, ...] | int) -> np.ndarray:
        arr = np.empty(shape, dtype=object)
        arr.fill(self.zero)
        return arr

    def identity(self, n: int) -> np.ndarray:
        arr = self.zeros((n, n))
        for i in range(n):
            arr[i, i] = self.one
        return arr

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        """Bring an array produced by numpy arithmetic back to canonical natives."""
        arr = np.asarray(arr, dtype=object)
        if arr.ndim == 0:
            return np.array(self.native(arr.item()), dtype=object)
        return self.array(arr)

    def scalar(self, value: Any) -> "Scalar":
        return Scalar(self, self.native(value))

    def to_json(self) -> Any:
        return "Q" if self.kind == "Q" else {"Fp": int(self.p)}

    @classmethod
    def from_json(cls, data: Any) -> "FieldDescriptor":
        if data == "Q":
            return cls.rationals()
        if isinstance(data, dict) and set(data) == {"Fp"}:
            return cls.prime(int(data["Fp"]))
        raise InvalidInput(f"unknown field declaration {data!r}")


@dataclass(frozen=True)
class Scalar:
    field: FieldDescriptor
    value: Native

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.native(self.value))

    def _other(self, other: Any) -> Native:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.field.native(other)
        return NotImplemented

    def _wrap(self, value: Native) -> "Scalar":
        return Scalar(self.field, value)

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(b, self.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, n: int):
        return self._wrap(self.field.power(self.value, n))

    def inverse(self) -> "Scalar":
        return self._wrap(self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __str__(self) -> str:
        return self.field.render_native(self.value)


def arith(a: Scalar, b: Scalar, op: ArithOp) -> Scalar:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    f = a.field
    if op == "add":
        return Scalar(f, f.add(a.value, b.value))
    if op == "sub":
        return Scalar(f, f.sub(a.value, b.value))
    if op == "mul":
        return Scalar(f, f.mul(a.value, b.value))
    if op == "div":
        return Scalar(f, f.div(a.value, b.value))
    raise BadParameters(f"unknown operation {op!r}")


def char_divides(field: FieldDescriptor, n: int) -> bool:
    if n < 1:
        raise BadParameters("n must be positive")
    c = field.characteristic
    return c != 0 and n % c == 0


def render(x: Scalar) -> str:
    return str(x)


def parse_scalar(field: FieldDescriptor, text: str) -> Scalar:
    return Scalar(field, field.parse_native(text))
