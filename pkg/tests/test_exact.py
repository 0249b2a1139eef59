from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cflab.exact import (Polynomial, double_factorial, interpolate, linear_factorization, monic_divisors,
                         pochhammer, poly_eval, poly_gcd, poly_shift, resultant)
from cflab.polyparse import PolySyntaxError, parse_poly

n = Polynomial([0, 1])
rationals = st.builds(Fraction, st.integers(-40, 40), st.integers(1, 12))
polys = st.lists(rationals, max_size=5).map(Polynomial)


@pytest.mark.parametrize("text, x, want", [("3n^2+3n+1", 1, 7), ("0", 5, 0), ("n^4", 2, 16)])
def test_eval(text, x, want):
    assert poly_eval(parse_poly(text), x) == want


@pytest.mark.parametrize("p, j, want", [(n * n, 1, n * n + 2 * n + 1), (n, -1, n - 1), (2 * n + 3, 1, 2 * n + 5)])
def test_shift(p, j, want):
    assert poly_shift(p, j) == want


def test_gcd_examples():
    assert poly_gcd(n**2, n**3) == n**2
    assert poly_gcd(n, n + 1) == Polynomial.constant(1)
    assert poly_gcd(n**2 - 1, n**2 + 2 * n + 1) == n + 1
    with pytest.raises(ValueError):
        poly_gcd(Polynomial(), Polynomial())


def test_linear_factorization():
    assert linear_factorization(parse_poly("-2n^4")) == (-2, [0, 0, 0, 0], Polynomial.constant(1))
    unit, roots, rest = linear_factorization(parse_poly("-n^3(2n-3)"))
    assert (unit, roots, rest) == (-2, [0, 0, 0, Fraction(3, 2)], Polynomial.constant(1))
    q = n**2 + n + 1
    assert linear_factorization(q) == (1, [], q)
    with pytest.raises(ValueError):
        linear_factorization(Polynomial())


def test_monic_divisors():
    one = Polynomial.constant(1)
    assert monic_divisors(n**2) == [one, n, n**2]
    assert set(map(str, monic_divisors(n * (n + 2)))) == set(map(str, [one, n, n + 2, n * (n + 2)]))
    assert monic_divisors(n**2 + n + 1) == [one, n**2 + n + 1]


def test_pochhammer_and_double_factorial():
    assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)
    assert pochhammer(Fraction(7, 3), 0) == 1
    assert pochhammer(1, 5) == 120
    assert [double_factorial(k) for k in (5, -1, -3)] == [15, 1, -1]
    with pytest.raises(ValueError):
        double_factorial(-5)


def test_parse_examples():
    assert parse_poly("3n^2+3n+1") == 3 * n**2 + 3 * n + 1
    assert parse_poly("-2n^3(2n+3)") == -4 * n**4 - 6 * n**3
    assert parse_poly("0").is_zero()
    assert parse_poly("n^4+(n+1)^4+2{n^2+(n+1)^2}") == n**4 + (n + 1)**4 + 2 * (n**2 + (n + 1)**2)


@pytest.mark.parametrize("bad", ["", "n^", "3n+", "(n+1", "n^-1", "x+1", "n/0", "n^(1/2)"])
def test_parse_errors(bad):
    with pytest.raises(PolySyntaxError):
        parse_poly(bad)


@given(polys, polys)
def test_ring_axioms(p, q):
    assert p * q == q * p
    assert (p + q) - q == p
    for x in (0, 1, Fraction(-3, 2)):
        assert poly_eval(p * q, x) == poly_eval(p, x) * poly_eval(q, x)


@given(polys, st.lists(rationals, min_size=1, max_size=4).map(lambda cs: Polynomial(cs + [1])))
def test_divmod(p, q):
    d, r = p.divmod(q)
    assert d * q + r == p
    assert r.degree < q.degree


@given(polys, rationals)
def test_shift_is_composition(p, j):
    for x in (0, 2, Fraction(1, 3)):
        assert poly_eval(poly_shift(p, j), x) == poly_eval(p, x + j)


@given(st.lists(rationals, min_size=1, max_size=4), st.lists(rationals, min_size=1, max_size=4))
def test_gcd_of_products(common, other):
    g = Polynomial.from_roots(common)
    p = g * Polynomial.from_roots(other)
    assert (p.divmod(poly_gcd(p, g))[1]).is_zero()
    assert poly_gcd(p, g) == g.monic()


@given(st.lists(rationals, min_size=1, max_size=3), st.lists(rationals, min_size=1, max_size=3))
def test_resultant_vanishes_iff_common_root(ra, rb):
    r = resultant(Polynomial.from_roots(ra), Polynomial.from_roots(rb))
    assert (r == 0) == bool(set(ra) & set(rb))


@given(polys)
def test_interpolate_roundtrip(p):
    xs = list(range(max(p.degree, 0) + 1))
    assert interpolate(xs, [poly_eval(p, x) for x in xs]) == p


@given(polys)
def test_parse_render_roundtrip(p):
    assert parse_poly(str(p)) == p
