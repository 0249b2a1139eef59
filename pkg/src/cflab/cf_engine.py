"""Convergents and limits of polynomial continued fractions.

``CF[a, b] = a(0) + b(1)/(a(1) + b(2)/(a(2) + ...))`` is evaluated through the
three-term recurrence

    A_0 = 1, A_1 = a(0), A_{n+1} = a(n) A_n + b(n) A_{n-1}
    B_0 = 0, B_1 = 1,    B_{n+1} = a(n) B_n + b(n) B_{n-1}

with A_n/B_n converging to the value. The closed-form finite sums for A_n and
B_n of the H-family give an independent exact oracle (:func:`closed_form_AB`).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .bigfloat import BigFloat, FloatApprox, working_precision
from .errors import BudgetExceeded, PoleError, SingularConvergent
from .exact import Polynomial, RationalLike, as_rational, binomial, pochhammer, render_poly
from .polyparse import parse_poly

CONSECUTIVE = 8
DEFAULT_RESCALE_BITS = 1000


@dataclass(frozen=True)
class CFSpec:
    a: Polynomial
    b: Polynomial

    @classmethod
    def parse(cls, a_text: str, b_text: str) -> "CFSpec":
        return cls(parse_poly(a_text), parse_poly(b_text))

    @property
    def balanced_degrees(self) -> bool:
        """deg b == 2 deg a, the regime all the catalogued identities live in."""
        return self.b.degree == 2 * self.a.degree

    def __str__(self) -> str:
        return f"CF[{render_poly(self.a)}, {render_poly(self.b)}]"


@dataclass(frozen=True)
class ConvergentPair:
    A: Union[Fraction, BigFloat]
    B: Union[Fraction, BigFloat]
    index: int


@dataclass(frozen=True)
class CFApprox(FloatApprox):
    """Result of :func:`eval_cf`: a FloatApprox plus how it was reached."""

    iterations: int = 0
    finite: bool = False
    decay: str = "geometric"
    last_gap: Fraction = Fraction(0)

    def as_approx(self) -> FloatApprox:
        return FloatApprox(self.value, self.error_bound)


def _int_coeffs(p: Polynomial) -> tuple[int, ...] | None:
    if all(c.denominator == 1 for c in p.coeffs):
        return tuple(int(c) for c in p.coeffs)
    return None


def _evaluator(p: Polynomial):
    ints = _int_coeffs(p)
    if ints is not None:
        def f(n: int) -> int:
            acc = 0
            for c in reversed(ints):
                acc = acc * n + c
            return acc
        return f
    return lambda n: p(n)


def convergent(cf: CFSpec, n: int, mode: str = "exact", prec: int = 256,
               rescale_bits: int = DEFAULT_RESCALE_BITS) -> ConvergentPair:
    """(A_n, B_n) by the recurrence, exactly or in ``prec``-bit floating point.

    In float mode the four running values are jointly rescaled by a power of two
    once they exceed ``2**rescale_bits``; A_n/B_n is unchanged by this.
    """
    if n < 0:
        raise ValueError("convergent index must be nonnegative")
    a, b = _evaluator(cf.a), _evaluator(cf.b)
    if mode == "exact":
        A_prev, A = Fraction(1), Fraction(a(0))
        B_prev, B = Fraction(0), Fraction(1)
        if n == 0:
            return ConvergentPair(A_prev, B_prev, 0)
        for k in range(1, n):
            ak, bk = a(k), b(k)
            A_prev, A = A, ak * A + bk * A_prev
            B_prev, B = B, ak * B + bk * B_prev
        return ConvergentPair(A, B, n)
    if mode != "float":
        raise ValueError(f"unknown mode {mode!r}")
    one = BigFloat.from_int(1, prec)
    A_prev, A = one, BigFloat.coerce(a(0), prec)
    B_prev, B = BigFloat.zero(prec), one
    if n == 0:
        return ConvergentPair(A_prev, B_prev, 0)
    for k in range(1, n):
        ak, bk = a(k), b(k)
        A_prev, A = A, A.mul(ak) + A_prev.mul(bk)
        B_prev, B = B, B.mul(ak) + B_prev.mul(bk)
        A, A_prev, B, B_prev = _rescale(A, A_prev, B, B_prev, rescale_bits)
    return ConvergentPair(A, B, n)


def _rescale(A, A_prev, B, B_prev, rescale_bits):
    mags = [x.magnitude() for x in (A, B) if not x.is_zero()]
    if mags and max(mags) > rescale_bits:
        s = -max(mags)
        return A.ldexp(s), A_prev.ldexp(s), B.ldexp(s), B_prev.ldexp(s)
    return A, A_prev, B, B_prev


def _exact_value(cf: CFSpec, k: int) -> Fraction:
    pair = convergent(cf, k, "exact")
    if pair.B == 0:
        raise SingularConvergent(f"B_{k} = 0 in {cf}")
    return pair.A / pair.B


def eval_cf(cf: CFSpec, target_digits: int, max_iter: int = 100_000, prec: int | None = None,
            rescale_bits: int = DEFAULT_RESCALE_BITS, consecutive: int = CONSECUTIVE) -> CFApprox:
    """Limit of A_n/B_n to ``target_digits`` digits.

    Stops once the convergent gap stayed below 10**-target_digits * max(1, |x|)
    for ``consecutive`` steps and the tail estimate is below the same tolerance.
    The error bound is ``consecutive`` times the last gap; when the gaps decay
    only like a power n**-m (ratio of successive gaps tending to 1) the power is
    fitted from the last 16 gaps and the bound is raised to twice the integrated
    tail gap * n / (m - 1).
    """
    if target_digits < 1:
        raise ValueError("target_digits must be at least 1")
    prec = prec or working_precision(target_digits)
    tol = Fraction(1, 10**target_digits)
    a, b = _evaluator(cf.a), _evaluator(cf.b)

    one = BigFloat.from_int(1, prec)
    A_prev, A = one, BigFloat.coerce(a(0), prec)
    B_prev, B = BigFloat.zero(prec), one
    ratio = A
    below = 0
    gaps: deque[Fraction] = deque(maxlen=16)
    gap = Fraction(0)

    for n in range(1, max_iter + 1):
        bn = b(n)
        if bn == 0:
            val = _exact_value(cf, n)
            return CFApprox(BigFloat.from_rational(val, prec), BigFloat.zero(64),
                            iterations=n, finite=True, decay="finite")
        an = a(n)
        A_prev, A = A, A.mul(an) + A_prev.mul(bn)
        B_prev, B = B, B.mul(an) + B_prev.mul(bn)
        A, A_prev, B, B_prev = _rescale(A, A_prev, B, B_prev, rescale_bits)
        if B.is_zero():
            raise SingularConvergent(f"B_{n + 1} = 0 in {cf}")
        new_ratio = A / B
        gap = abs(new_ratio.to_fraction() - ratio.to_fraction())
        ratio = new_ratio
        gaps.append(gap)
        scale = max(Fraction(1), abs(ratio.to_fraction()))
        below = below + 1 if gap <= tol * scale else 0
        if below < consecutive:
            continue
        bound, decay = _tail_bound(gaps, n, consecutive)
        # rounding: each step perturbs A_n/B_n by a few relative ulps
        bound += 4 * (n + 1) * ratio.ulp().to_fraction()
        if bound <= tol * scale:
            return CFApprox(ratio, BigFloat.from_rational(bound, 64), iterations=n + 1,
                            decay=decay, last_gap=gap)
    raise BudgetExceeded(f"{cf} did not reach {target_digits} digits in {max_iter} iterations; "
                         f"last gap {float(gap):.3e}", last_gap=gap)


def _tail_bound(gaps: deque, n: int, consecutive: int) -> tuple[Fraction, str]:
    g = gaps[-1]
    base = consecutive * g
    if len(gaps) < 16 or g == 0 or gaps[0] == 0:
        return base, "geometric"
    rho = (float(g) / float(gaps[0])) ** (1 / 15)
    if rho < 0.8:
        return base, "geometric"
    m = math.log(float(gaps[0]) / float(g)) / math.log(n / (n - 15))
    if m <= 1.05:
        # too slow to bound; keep iterating
        return Fraction(10) ** 6 * max(g, Fraction(1)), "stalled"
    tail = g * Fraction(n) / Fraction(m - 1).limit_denominator(10**6)
    return max(base, 2 * tail), "polynomial"


# -- closed form oracle for the H family ------------------------------------


def h_family_poles(alpha, beta, gamma) -> list[str]:
    bad = []
    for label, v in (("(alpha+1)/2", (alpha + 1) / 2), ("(beta+1)/2", (beta + 1) / 2),
                     ("gamma+1", gamma + 1)):
        if v.denominator == 1 and v <= 0:
            bad.append(f"{label} = {v}")
    return bad


def _inner_term(i: int, ah: Fraction, bh: Fraction, gamma: Fraction) -> Fraction:
    return (pochhammer(Fraction(1, 2), i) * pochhammer(gamma + 1, i)
            / (pochhammer(ah, i + 1) * pochhammer(bh, i + 1)))


def closed_form_AB(alpha: RationalLike, beta: RationalLike, gamma: RationalLike,
                   n: int) -> tuple[Fraction, Fraction]:
    """Exact A_n, B_n for CF[D(n(n+alpha)(n+beta)), -2n(n+alpha)(n+beta)(n+gamma)] as finite sums."""
    alpha, beta, gamma = as_rational(alpha), as_rational(beta), as_rational(gamma)
    bad = h_family_poles(alpha, beta, gamma)
    if bad:
        raise PoleError("pole parameters: " + ", ".join(bad))
    if n < 0:
        raise ValueError("n must be nonnegative")
    ah, bh = (alpha + 1) / 2, (beta + 1) / 2
    pre = pochhammer(gamma + 1, n) * math.factorial(n)
    inner = [Fraction(0)]
    for i in range(n):
        inner.append(inner[-1] + _inner_term(i, ah, bh, gamma))
    A = Fraction(0)
    B = Fraction(0)
    for k in range((n + 1) // 2, n + 1):
        w = (pochhammer(ah, k) * pochhammer(bh, k) / (pochhammer(gamma + 1, k) * math.factorial(k))
             * 4**k * binomial(k, n - k) * (-1) ** (n - k))
        A += w
        B += w * inner[k]
    return pre * A, pre * B / 4


def h_family_spec(alpha: RationalLike, beta: RationalLike, gamma: RationalLike) -> CFSpec:
    """CF[D(n(n+alpha)(n+beta)), -2n(n+alpha)(n+beta)(n+gamma)] with D the forward difference."""
    alpha, beta, gamma = as_rational(alpha), as_rational(beta), as_rational(gamma)
    n = Polynomial([0, 1])
    cubic = n * (n + alpha) * (n + beta)
    return CFSpec(cubic.forward_difference(), -2 * cubic * (n + gamma))


def ratio_limit_check(alpha: RationalLike, beta: RationalLike, gamma: RationalLike,
                      n_max: int = 200, prec: int = 128) -> FloatApprox:
    """A'_{n_max+1} / A'_{n_max} with A'_n = A_n / ((gamma+1)_n n!)."""
    alpha, beta, gamma = as_rational(alpha), as_rational(beta), as_rational(gamma)
    bad = h_family_poles(alpha, beta, gamma)
    if bad:
        raise PoleError("pole parameters: " + ", ".join(bad))
    cf = h_family_spec(alpha, beta, gamma)
    A_n = convergent(cf, n_max, "exact").A
    A_n1 = convergent(cf, n_max + 1, "exact").A
    if A_n == 0:
        raise SingularConvergent(f"A_{n_max} = 0")
    # A'_{n+1}/A'_n = (A_{n+1}/A_n) / ((gamma+1+n)(n+1))
    r = A_n1 / A_n / ((gamma + 1 + n_max) * (n_max + 1))
    return FloatApprox.exact(r, prec)
