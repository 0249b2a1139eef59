from fractions import Fraction

import mpmath
import pytest

from cflab.bigfloat import agree_digits, parse_decimal
from cflab.constants import (BASE_CONSTANTS, ClosedFormConstant, const_value, eval_closed_form,
                             parse_closed_form)
from cflab.errors import BudgetExceeded

mpmath.mp.dps = 80
ORACLE = {
    "one": mpmath.mpf(1), "pi_sq": mpmath.pi**2, "log2": mpmath.log(2), "catalan": mpmath.catalan,
    "zeta2": mpmath.zeta(2), "zeta3": mpmath.zeta(3), "zeta4": mpmath.zeta(4),
    "zeta5": mpmath.zeta(5), "zeta7": mpmath.zeta(7),
}


def as_mpf(x):
    f = x.value.to_fraction()
    return mpmath.mpf(f.numerator) / f.denominator


@pytest.mark.parametrize("name", BASE_CONSTANTS)
@pytest.mark.parametrize("method", [1, 2])
def test_against_mpmath(name, method):
    v = const_value(name, 60, method)
    assert abs(as_mpf(v) - ORACLE[name]) < mpmath.mpf(10) ** -60
    assert abs(as_mpf(v) - ORACLE[name]) <= float(v.error_bound.to_fraction()) + 1e-70


@pytest.mark.parametrize("name, text", [("pi_sq", "9.86960440109"), ("log2", "0.693147180560"),
                                        ("catalan", "0.915965594177")])
def test_twelve_digit_examples(name, text):
    got = parse_decimal(const_value(name, 12).to_decimal(12))
    assert abs(got - Fraction(text)) <= Fraction(1, 10**11)


def test_budget():
    with pytest.raises(BudgetExceeded):
        const_value("catalan", 10**6)
    with pytest.raises(KeyError):
        const_value("e", 10)


@pytest.mark.parametrize("text, oracle", [
    ("(16+3pi^2)/(16-pi^2)", (16 + 3 * mpmath.pi**2) / (16 - mpmath.pi**2)),
    ("1/1", mpmath.mpf(1)),
    ("2/(2zeta5+6zeta3-9)", 2 / (2 * mpmath.zeta(5) + 6 * mpmath.zeta(3) - 9)),
    ("720/(450G-299)", 720 / (450 * mpmath.catalan - 299)),
    ("1/(1-log2)", 1 / (1 - mpmath.log(2))),
    ("1/(2G)", 1 / (2 * mpmath.catalan)),
])
def test_closed_forms(text, oracle):
    v = eval_closed_form(parse_closed_form(text), 40)
    assert abs(as_mpf(v) - oracle) < mpmath.mpf(10) ** -40 * max(1, abs(oracle))


def test_closed_form_json_roundtrip():
    c = parse_closed_form("(16+3pi^2)/(16-pi^2)")
    assert ClosedFormConstant.from_json(c.to_json()) == c
    assert c.numerator == {"one": 16, "pi_sq": 3}


def test_methods_agree_at_100_digits():
    for name in ("catalan", "zeta3", "log2"):
        assert agree_digits(const_value(name, 100, 1), const_value(name, 100, 2)) >= 100


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_closed_form("1/(2x)")
