from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from cflab.bigfloat import agree_digits
from cflab.cf_engine import (CFSpec, closed_form_AB, convergent, eval_cf, h_family_spec, ratio_limit_check)
from cflab.constants import const_value
from cflab.errors import BudgetExceeded, PoleError, SingularConvergent

COR21 = CFSpec.parse("3n^2+3n+1", "-2n^4")
coeff = st.integers(-5, 5)
specs = st.builds(lambda a, b: CFSpec.parse(a, b),
                  st.tuples(coeff, coeff, st.integers(1, 4)).map(lambda t: f"{t[2]}n^2+{t[1]}n+{abs(t[0]) + 1}"),
                  st.tuples(coeff, st.integers(1, 3)).map(lambda t: f"-{t[1]}n^4+{t[0]}n^3"))


def test_hand_iteration():
    assert convergent(COR21, 0) .A == 1 and convergent(COR21, 0).B == 0
    c1 = convergent(COR21, 1)
    assert (c1.A, c1.B) == (1, 1)
    c2 = convergent(COR21, 2)
    assert (c2.A, c2.B) == (5, 7)


@given(specs, st.integers(1, 30))
def test_cross_determinant(cf, n):
    cn, cm = convergent(cf, n), convergent(cf, n - 1)
    prod = Fraction((-1) ** n)
    for k in range(1, n):
        prod *= cf.b(k)
    assert cn.A * cm.B - cm.A * cn.B == prod


@settings(max_examples=30)
@given(specs, st.integers(2, 200))
def test_rescale_invariance(cf, n):
    lo = convergent(cf, n, "float", prec=200, rescale_bits=100)
    hi = convergent(cf, n, "float", prec=200, rescale_bits=1000)
    ex = convergent(cf, n)
    if ex.B == 0:
        return
    want = Fraction(ex.A, 1) / ex.B
    for c in (lo, hi):
        got = c.A.to_fraction() / c.B.to_fraction()
        assert abs(got - want) <= abs(want) * Fraction(1, 2**180) * n + Fraction(1, 2**180)


def test_catalan_fraction_value():
    r = eval_cf(COR21, 25)
    G = const_value("catalan", 30).value.to_fraction()
    assert abs(r.value.to_fraction() - 1 / (2 * G)) < Fraction(1, 10**25)
    assert r.decay == "geometric" and not r.finite


def test_log2_value():
    r = eval_cf(CFSpec.parse("3n+3", "-2n^2"), 25)
    L = const_value("log2", 30).value.to_fraction()
    assert abs(r.value.to_fraction() - 1 / (2 * L - 1)) < Fraction(1, 10**24)


def test_finite_fraction():
    r = eval_cf(CFSpec.parse("n+1", "0"), 30)
    assert r.finite and r.value.to_fraction() == 1 and r.error_bound.to_fraction() == 0
    r = eval_cf(CFSpec.parse("n+1", "n-2"), 30)
    # 1 + 1*(-1)/(2 + 0) = 1/2
    assert r.finite and r.value.to_fraction() == Fraction(1, 2)


def test_budget_and_singular():
    with pytest.raises(BudgetExceeded):
        eval_cf(COR21, 25, max_iter=20)
    with pytest.raises(SingularConvergent):
        eval_cf(CFSpec.parse("0", "1"), 10)


def test_polynomial_tail_bound_holds():
    # the zeta(4) fraction converges like n^-5; its bound must cover the true error
    cf = CFSpec.parse("n^4+(n+1)^4+2{n^2+(n+1)^2}", "-n^8")
    r = eval_cf(cf, 12)
    z2, z4 = (const_value(z, 30).value.to_fraction() for z in ("zeta2", "zeta4"))
    exact = -1 / (z4 + 4 * z2 - 8)
    assert r.decay == "polynomial"
    assert abs(r.value.to_fraction() - exact) <= r.error_bound.to_fraction()


def test_closed_form_examples():
    assert closed_form_AB(0, 0, 0, 0) == (1, 0)
    assert closed_form_AB(0, 0, 0, 2) == (5, 7)
    cf = CFSpec.parse("3n^2+7n+3", "-2n^2(n+1)(n+2)")
    assert cf == h_family_spec(2, 0, 1)
    c = convergent(cf, 3)
    assert closed_form_AB(2, 0, 1, 3) == (c.A, c.B)
    with pytest.raises(PoleError):
        closed_form_AB(-1, 0, 0, 3)


@pytest.mark.parametrize("p", [(0, 0, 0), (2, 2, 2), (0, 0, Fraction(-1, 2))])
def test_ratio_limit_examples(p):
    assert abs(ratio_limit_check(*p).value.to_fraction() - 2) < Fraction(1, 100)


def test_ratio_limit_approaches_two():
    # away from the examples the approach is slow (about 2(1 + s/n)) but monotone in n
    far = [abs(ratio_limit_check(4, 4, Fraction(-1, 2), n_max=n).value.to_fraction() - 2) for n in (200, 400, 800)]
    assert far[0] > far[1] > far[2]
    assert far[2] < far[0] / 3


def test_against_mpmath_lentz():
    cf = CFSpec.parse("2n+1", "n^2")
    # 1 + 1/(3 + 4/(5 + ...)) = 4/pi; also evaluated bottom-up in mpmath
    with mpmath.workprec(400):
        v = mpmath.mpf(0)
        for k in range(400, 0, -1):
            v = k * k / (2 * k + 1 + v)
        want = 1 + v
        got = eval_cf(cf, 40).value.to_fraction()
        assert abs(mpmath.mpf(got.numerator) / got.denominator - want) < mpmath.mpf(10) ** -38
        assert abs(want - 4 / mpmath.pi) < mpmath.mpf(10) ** -38
    assert agree_digits(eval_cf(cf, 40), eval_cf(cf, 45)) >= 39
