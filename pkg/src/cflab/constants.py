"""Reference values for pi^2, log 2, Catalan's G and zeta(2..7).

Every constant has two independent routes:

==========  =====================================  ======================================
constant    method 1                               method 2
==========  =====================================  ======================================
pi_sq       Machin arctangent formula, squared     Gauss three-term arctangent, squared
log2        2 atanh(1/3)                           4 atanh(1/7) + 2 atanh(1/17)
catalan     Chebyshev-weighted alternating sum     Euler (binomial) transform
zeta2/4     pi^2/6, pi^4/90                        alternating eta(s), Chebyshev weights
zeta3/5/7   eta(s), Chebyshev weights              eta(s), Euler transform
==========  =====================================  ======================================

The series run in fixed-point integer arithmetic with guard bits; the number
of truncations is counted and becomes the error bound, so each result is a
rigorous :class:`FloatApprox`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping

from .bigfloat import BigFloat, FloatApprox, working_precision
from .errors import BudgetExceeded, IndistinguishableFromZero

BASE_CONSTANTS = (
    "one",
    "pi_sq",
    "log2",
    "catalan",
    "zeta2",
    "zeta3",
    "zeta4",
    "zeta5",
    "zeta7",
)
MAX_DIGITS = 1000

# decimal symbols accepted in closed-form text, mapped to base constants
SYMBOLS = {
    "1": "one",
    "pi^2": "pi_sq",
    "log2": "log2",
    "G": "catalan",
    "zeta2": "zeta2",
    "zeta3": "zeta3",
    "zeta4": "zeta4",
    "zeta5": "zeta5",
    "zeta7": "zeta7",
}


# -- fixed-point series ------------------------------------------------------


@dataclass
class _Fixed:
    """Integer ``value`` approximating ``value / 2**bits`` within ``err`` ulps."""

    value: int
    bits: int
    err: int = 0


def _atan_inv(x: int, bits: int, sign: int = -1) -> _Fixed:
    """atan(1/x) (sign=-1) or atanh(1/x) (sign=+1) in fixed point."""
    one = 1 << bits
    power = one // x
    x2 = x * x
    total, k, err = 0, 0, 1
    while power:
        term = power // (2 * k + 1)
        total += term if (k % 2 == 0 or sign > 0) else -term
        power //= x2
        k += 1
        err += 2
    # discarded tail is below one ulp
    return _Fixed(total, bits, err + 1)


def _combine(parts: list[tuple[int, _Fixed]]) -> _Fixed:
    bits = parts[0][1].bits
    return _Fixed(
        sum(c * p.value for c, p in parts),
        bits,
        sum(abs(c) * p.err for c, p in parts),
    )


def _pi_machin(bits: int) -> _Fixed:
    return _combine([(16, _atan_inv(5, bits)), (-4, _atan_inv(239, bits))])


def _pi_gauss(bits: int) -> _Fixed:
    return _combine(
        [(48, _atan_inv(18, bits)), (32, _atan_inv(57, bits)), (-20, _atan_inv(239, bits))]
    )


def _log2_a(bits: int) -> _Fixed:
    return _combine([(2, _atan_inv(3, bits, sign=+1))])


def _log2_b(bits: int) -> _Fixed:
    return _combine([(4, _atan_inv(7, bits, sign=+1)), (2, _atan_inv(17, bits, sign=+1))])


def alternating_chebyshev(term_den: Callable[[int], int], bits: int) -> _Fixed:
    """sum_{k>=0} (-1)^k / term_den(k) with Chebyshev-polynomial weights.

    Cohen, Rodriguez Villegas and Zagier's first algorithm: with d = T_n(3)
    the weighted sum is within |S|/d of the true sum S. ``term_den`` must give
    positive integers whose reciprocals are completely monotone.
    """
    guard = 8
    n = int((bits + guard) / math.log2(3 + math.sqrt(8))) + 2
    t0, t1 = 1, 3
    for _ in range(n - 1):
        t0, t1 = t1, 6 * t1 - t0
    d = t1
    one = 1 << (bits + guard)
    b = Fraction(-1)
    c = Fraction(-d)
    s = 0
    for k in range(n):
        c = b - c
        s += (c.numerator * one) // (c.denominator * term_den(k))
        b = b * (k + n) * (k - n) / ((k + Fraction(1, 2)) * (k + 1))
    value = s // d
    # n floors before the division, one after it, and the weighting error one/d
    err = n // d + 1 + one // d + 1
    return _Fixed(value >> guard, bits, (err >> guard) + 2)


def alternating_euler(term_den: Callable[[int], int], bits: int) -> _Fixed:
    """sum_{k>=0} (-1)^k / term_den(k) by the Euler binomial transform.

    The sum equals sum_m D_m / 2^(m+1) with D_m = sum_j (-1)^j C(m,j) a_j.
    Fixed-point a_j carry at most one ulp each, so D_m / 2^(m+1) is off by
    under half an ulp; the tail after M terms is below a_0 / 2^M.
    """
    guard = 8
    work = bits + guard
    m_terms = work + 4
    one = 1 << work
    a = [one // term_den(j) for j in range(m_terms)]
    s = 0
    for m in range(m_terms):
        diff = 0
        binom = 1
        for j in range(m + 1):
            diff += -binom * a[j] if j & 1 else binom * a[j]
            binom = binom * (m - j) // (j + 1)
        s += diff >> (m + 1)
    err = (3 * m_terms) // 2 + 2
    return _Fixed(s >> guard, bits, (err >> guard) + 2)


def _eta_den(s: int) -> Callable[[int], int]:
    return lambda k: (k + 1) ** s


def _beta2_den(k: int) -> int:
    return (2 * k + 1) ** 2


# -- public API --------------------------------------------------------------


def _to_approx(f: _Fixed, prec: int, scale: Fraction = Fraction(1), power: int = 1) -> FloatApprox:
    """Convert fixed point (optionally raised to ``power`` and scaled) to a FloatApprox."""
    x = Fraction(f.value, 1 << f.bits)
    e = Fraction(f.err, 1 << f.bits)
    if power == 1:
        val, err = x * scale, e * abs(scale)
    else:
        hi = (abs(x) + e) ** power
        val = x**power * scale
        err = (hi - abs(x) ** power) * abs(scale)
    v = BigFloat.from_rational(val, prec)
    return FloatApprox.of(v, err + v.ulp().to_fraction())


def _bits_for(digits: int) -> int:
    return working_precision(digits) + 16


def _compute(name: str, digits: int, method: int) -> FloatApprox:
    prec = working_precision(digits)
    bits = _bits_for(digits)
    if name == "one":
        return FloatApprox.exact(1, prec)
    if name == "pi_sq":
        pi = _pi_machin(bits) if method == 1 else _pi_gauss(bits)
        return _to_approx(pi, prec, power=2)
    if name == "log2":
        return _to_approx(_log2_a(bits) if method == 1 else _log2_b(bits), prec)
    if name == "catalan":
        f = alternating_chebyshev if method == 1 else alternating_euler
        return _to_approx(f(_beta2_den, bits), prec)
    if name in ("zeta2", "zeta4"):
        s = int(name[-1])
        if method == 1:
            pi = _pi_machin(bits)
            return _to_approx(pi, prec, Fraction(1, 6 if s == 2 else 90), power=s)
        eta = alternating_chebyshev(_eta_den(s), bits)
        return _to_approx(eta, prec, 1 / (1 - Fraction(2) ** (1 - s)))
    if name in ("zeta3", "zeta5", "zeta7"):
        s = int(name[-1])
        f = alternating_chebyshev if method == 1 else alternating_euler
        return _to_approx(f(_eta_den(s), bits), prec, 1 / (1 - Fraction(2) ** (1 - s)))
    raise KeyError(f"unknown base constant {name!r}")


@lru_cache(maxsize=None)
def const_value(name: str, digits: int, method: int = 1) -> FloatApprox:
    """Value of a base constant to ``digits`` decimal digits (cached per process)."""
    if name not in BASE_CONSTANTS:
        raise KeyError(f"unknown base constant {name!r}")
    if digits > MAX_DIGITS:
        raise BudgetExceeded(f"{digits} digits exceeds the {MAX_DIGITS}-digit constant budget")
    if digits < 1:
        raise ValueError("digits must be positive")
    return _compute(name, digits, method)


@dataclass(frozen=True)
class ClosedFormConstant:
    """(sum c_i C_i) / (sum d_j C_j) over the base constants."""

    numerator: Mapping[str, Fraction]
    denominator: Mapping[str, Fraction] = field(default_factory=lambda: {"one": Fraction(1)})

    def __post_init__(self):
        for part in (self.numerator, self.denominator):
            for k in part:
                if k not in BASE_CONSTANTS:
                    raise KeyError(f"unknown base constant {k!r}")
        if not any(v != 0 for v in self.denominator.values()):
            raise ValueError("closed form needs a nonzero denominator")

    def to_json(self) -> dict:
        return {
            "numerator": {k: _rat_text(v) for k, v in sorted(self.numerator.items())},
            "denominator": {k: _rat_text(v) for k, v in sorted(self.denominator.items())},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ClosedFormConstant":
        return cls(
            {k: Fraction(v) for k, v in data["numerator"].items()},
            {k: Fraction(v) for k, v in data["denominator"].items()},
        )

    def __str__(self) -> str:
        return f"({_lin_text(self.numerator)})/({_lin_text(self.denominator)})"


def _rat_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


_PRETTY = {v: k for k, v in SYMBOLS.items()}


def _lin_text(m: Mapping[str, Fraction]) -> str:
    parts = []
    for k in BASE_CONSTANTS:
        c = m.get(k, 0)
        if c == 0:
            continue
        sym = _PRETTY[k]
        mag = abs(c)
        body = _rat_text(mag) if sym == "1" else (sym if mag == 1 else f"{_rat_text(mag)}*{sym}")
        parts.append(("-" if c < 0 else "+") + body)
    if not parts:
        return "0"
    s = "".join(parts)
    return s[1:] if s[0] == "+" else s


def linear_value(m: Mapping[str, Fraction], digits: int) -> FloatApprox:
    prec = working_precision(digits)
    acc = FloatApprox.exact(0, prec)
    for k in sorted(m):
        c = Fraction(m[k])
        if c:
            acc = acc + const_value(k, digits) * FloatApprox.exact(c, prec)
    return acc


def eval_closed_form(expr: ClosedFormConstant, digits: int) -> FloatApprox:
    """Evaluate a closed form with propagated error bounds."""
    num = linear_value(expr.numerator, digits)
    den = linear_value(expr.denominator, digits)
    if abs(den.value) <= den.error_bound:
        raise IndistinguishableFromZero(f"denominator of {expr} vanishes at {digits} digits")
    return num / den


# -- closed-form text ----------------------------------------------------------

_TERM = re.compile(
    r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*\*?\s*(pi\^2|log2|G|zeta[234579]|ζ\([234579]\)|π\^?2)?\s*"
)
_ALIASES = {"π2": "pi^2", "π^2": "pi^2"}


def parse_linear(text: str) -> dict[str, Fraction]:
    """``450G-299`` -> {"catalan": 450, "one": -299}."""
    src = text.replace(" ", "")
    if src.startswith("(") and src.endswith(")"):
        src = src[1:-1]
    if not src:
        raise ValueError("empty linear combination")
    out: dict[str, Fraction] = {}
    pos = 0
    while pos < len(src):
        m = _TERM.match(src, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ValueError(f"cannot read term at position {pos} in {text!r}")
        if pos and not m.group(1):
            raise ValueError(f"missing operator at position {pos} in {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        sym = m.group(3) or "1"
        sym = _ALIASES.get(sym, sym)
        if sym.startswith("ζ("):
            sym = "zeta" + sym[2]
        name = SYMBOLS[sym]
        out[name] = out.get(name, Fraction(0)) + sign * coef
        pos = m.end()
    return {k: v for k, v in out.items() if v != 0}


def _split_top(text: str) -> tuple[str, str]:
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            left, right = text[:i], text[i + 1:]
            # a '/' between digits belongs to a rational literal
            if left and right and left[-1].isdigit() and right[0].isdigit():
                continue
            return left, right
    return text, "1"


def parse_closed_form(text: str) -> ClosedFormConstant:
    """``720/(450G-299)`` or ``(16+3pi^2)/(16-pi^2)``."""
    num, den = _split_top(text.strip())
    return ClosedFormConstant(parse_linear(num), parse_linear(den))
