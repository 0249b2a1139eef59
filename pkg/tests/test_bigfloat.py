from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from cflab.bigfloat import (BigFloat, FloatApprox, agree_digits, format_decimal, from_rational, max_digits,
                            parse_decimal, working_precision)

fracs = st.builds(Fraction, st.integers(-10**30, 10**30), st.integers(1, 10**20))
nonzero = fracs.filter(lambda x: x != 0)


def rel_err(x: BigFloat, exact: Fraction) -> Fraction:
    return abs(x.to_fraction() - exact) / abs(exact)


def test_rounding_contract():
    assert rel_err(from_rational(Fraction(1, 3), 64), Fraction(1, 3)) < Fraction(1, 2**64)
    assert abs(parse_decimal(from_rational(Fraction(5, 7), 64).to_decimal(10)) - Fraction(7142857143, 10**10)) < Fraction(1, 10**10)
    assert from_rational(0, 64).is_zero()


def test_working_precision_uses_guard_bits(monkeypatch):
    monkeypatch.setenv("CFLAB_PRECISION_GUARD_BITS", "10")
    assert working_precision(25) == 110
    monkeypatch.delenv("CFLAB_PRECISION_GUARD_BITS")
    assert working_precision(25) == 164


@given(fracs, fracs)
def test_arithmetic_is_correctly_rounded(x, y):
    prec = 80
    a, b = BigFloat.from_rational(x, prec), BigFloat.from_rational(y, prec)
    fa, fb = a.to_fraction(), b.to_fraction()
    for got, exact in ((a + b, fa + fb), (a * b, fa * fb)):
        if exact:
            assert rel_err(got, exact) <= Fraction(1, 2**prec)
        else:
            assert got.is_zero()
    if fb:
        assert rel_err(a / b, fa / fb) <= Fraction(1, 2**prec) or fa == 0


@given(nonzero.map(abs))
def test_sqrt_matches_mpmath(x):
    with mpmath.workprec(200):
        want = mpmath.sqrt(mpmath.mpf(x.numerator) / x.denominator)
        got = BigFloat.from_rational(x, 120).sqrt()
        assert abs(mpmath.mpf(got.to_fraction().numerator) / got.to_fraction().denominator - want) <= want * mpmath.mpf(2) ** -118


@given(fracs)
def test_decimal_roundtrip(x):
    text = format_decimal(x, 30)
    assert abs(parse_decimal(text) - x) <= Fraction(1, 10**29) * max(1, abs(x))


def test_agree_digits_examples():
    one = FloatApprox.exact(1, 128)
    assert agree_digits(one, one) == max_digits(128)
    assert agree_digits(one, FloatApprox.exact(Fraction(10001, 10000), 128)) == 4


@given(fracs, st.integers(1, 100))
def test_interval_arithmetic_contains_exact(x, k):
    a = FloatApprox.exact(x, 64)
    b = FloatApprox.exact(Fraction(1, k), 64)
    assert (a * b + a).contains(x / k + x)
    assert (a / b - b).contains(x * k - Fraction(1, k))


def test_parse_decimal_rejects_garbage():
    with pytest.raises(ValueError):
        parse_decimal("1.2.3")
