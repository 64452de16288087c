import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sierpinski_lre.scalar import INV_SQRT2, INV_SQRT8, ONE, ZERO, ExactScalar

small = st.integers(-50, 50)
scalars = st.builds(ExactScalar, small, small, st.integers(-6, 6))


def approx(x: ExactScalar) -> float:
    return (x.a + x.b * math.sqrt(2)) * 2.0**x.e


def test_conjugate_pair():
    assert ExactScalar(1, 1) * ExactScalar(1, -1) == ExactScalar(-1)


def test_normal_form():
    assert ExactScalar(4, 2, 0) == ExactScalar(2, 1, 1)
    x = ExactScalar(12, 4, -3)
    assert (x.a, x.b, x.e) == (3, 1, -1)
    assert (ZERO.a, ZERO.b, ZERO.e) == (0, 0, 0)
    assert ExactScalar(0, 0, 5) == ZERO and not ExactScalar(0, 0, 5)


def test_constants():
    assert INV_SQRT2 * INV_SQRT2 == ExactScalar.coerce(Fraction(1, 2))
    assert INV_SQRT8 * INV_SQRT8 * 8 == ONE
    assert ExactScalar.sqrt2_power(3) == ExactScalar(0, 2)
    assert ExactScalar.sqrt2_power(-2) == ExactScalar(1, 0, -1)


def test_coerce():
    assert ExactScalar.coerce(Fraction(3, 8)).to_fraction() == Fraction(3, 8)
    with pytest.raises(ValueError):
        ExactScalar.coerce(Fraction(1, 3))
    with pytest.raises(TypeError):
        ExactScalar.coerce(0.5)


def test_to_fraction_rejects_irrational():
    assert ExactScalar(3, 0, -2).is_rational
    assert not ExactScalar(0, 1).is_rational
    with pytest.raises(ValueError):
        ExactScalar(0, 1).to_fraction()


@given(scalars, scalars, scalars)
def test_ring_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == ZERO
    assert x + ZERO == x and x * ONE == x


@given(scalars, scalars)
def test_arithmetic_matches_floats(x, y):
    assert math.isclose(approx(x * y), approx(x) * approx(y), rel_tol=1e-9, abs_tol=1e-9)
    assert math.isclose(approx(x + y), approx(x) + approx(y), rel_tol=1e-9, abs_tol=1e-9)
    assert math.isclose(float(x), approx(x), rel_tol=1e-12, abs_tol=1e-12)


@given(scalars, st.integers(-5, 5))
def test_equality_survives_rescaling(x, k):
    assert x.scale2(k).scale2(-k) == x
    assert hash(x.scale2(k).scale2(-k)) == hash(x)


@given(scalars)
def test_conjugate_norm_is_rational(x):
    n = x * x.conjugate()
    assert n.is_rational
