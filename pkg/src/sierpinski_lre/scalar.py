"""Exact scalars of the form ``(a + b*sqrt(2)) * 2**e``."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Number = Union[int, "ExactScalar"]


class ExactScalar:
    """Element of the ring Z[sqrt 2][1/2], kept in a unique normal form.

    The normal form has ``a`` and ``b`` not both even; zero is ``(0, 0, 0)``.
    """

    __slots__ = ("a", "b", "e")

    def __init__(self, a: int = 0, b: int = 0, e: int = 0):
        if a == 0 and b == 0:
            self.a, self.b, self.e = 0, 0, 0
            return
        while not (a & 1) and not (b & 1):
            a >>= 1
            b >>= 1
            e += 1
        self.a, self.b, self.e = a, b, e

    # constructors ------------------------------------------------------
    @classmethod
    def coerce(cls, x: Number | Fraction) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, int):
            return cls(x, 0, 0)
        if isinstance(x, Fraction):
            den = x.denominator
            if den & (den - 1):
                raise ValueError(f"{x} has a non-dyadic denominator")
            return cls(x.numerator, 0, -(den.bit_length() - 1))
        raise TypeError(f"cannot convert {type(x).__name__} to ExactScalar")

    @classmethod
    def sqrt2_power(cls, k: int) -> "ExactScalar":
        """``sqrt(2) ** k`` for any integer ``k``."""
        half, odd = divmod(k, 2)
        return cls(0, 1, half) if odd else cls(1, 0, half)

    # arithmetic --------------------------------------------------------
    def __add__(self, other: Number) -> "ExactScalar":
        o = ExactScalar.coerce(other)
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        e = min(self.e, o.e)
        s1, s2 = self.e - e, o.e - e
        return ExactScalar((self.a << s1) + (o.a << s2), (self.b << s1) + (o.b << s2), e)

    __radd__ = __add__

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.a, -self.b, self.e)

    def __sub__(self, other: Number) -> "ExactScalar":
        return self + (-ExactScalar.coerce(other))

    def __rsub__(self, other: Number) -> "ExactScalar":
        return ExactScalar.coerce(other) - self

    def __mul__(self, other: Number) -> "ExactScalar":
        o = ExactScalar.coerce(other)
        return ExactScalar(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a, self.e + o.e)

    __rmul__ = __mul__

    def scale2(self, k: int) -> "ExactScalar":
        """Multiply by ``2**k``."""
        if self.is_zero():
            return self
        return ExactScalar(self.a, self.b, self.e + k)

    def conjugate(self) -> "ExactScalar":
        """Galois conjugate sqrt(2) -> -sqrt(2) (not complex conjugation)."""
        return ExactScalar(self.a, -self.b, self.e)

    # comparisons -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            try:
                other = ExactScalar.coerce(other)
            except ValueError:
                return False
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return (self.a, self.b, self.e) == (other.a, other.b, other.e)

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.e))

    def __bool__(self) -> bool:
        return not self.is_zero()

    # conversions -------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.a) * Fraction(2) ** self.e

    def __float__(self) -> float:
        return (self.a + self.b * 2**0.5) * 2.0**self.e

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "e": self.e}

    def __repr__(self) -> str:
        return f"ExactScalar({self.a}, {self.b}, {self.e})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.to_fraction())
        return f"({self.a}+{self.b}*sqrt2)*2^{self.e}"


ZERO = ExactScalar(0)
ONE = ExactScalar(1)
INV_SQRT2 = ExactScalar.sqrt2_power(-1)
INV_SQRT8 = ExactScalar.sqrt2_power(-3)
