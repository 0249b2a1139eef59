"""Continued-fraction values from a nonvanishing particular solution.

If y solves y(n+1) = a(n) y(n) + b(n) y(n-1) with y(n) != 0 for n >= 0, then

    CF[a, b] = (a(0) - y(1)/y(0)) + 1 / (y(0)^2 * sum_k t_k),
    t_k = (-1)^k b(1)...b(k) / (y(k) y(k+1)).

Successive terms satisfy t_{k+1}/t_k = -b(k+1) / (R(k) R(k+1)) with R the
solution's ratio, so the series is generated without ever forming y(k), which
grows factorially.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bigfloat import BigFloat, FloatApprox, working_precision
from .cf_engine import CFSpec
from .errors import BudgetExceeded, IndistinguishableFromZero, ViolatedHypothesis
from .petkovsek import HypergeometricTerm, RationalFunction, Recurrence2, certify

WINDOW = 16
CHECK_EVERY = 64


@dataclass(frozen=True)
class SolutionSeries:
    cf: CFSpec
    solution: HypergeometricTerm
    term_ratio: RationalFunction

    @classmethod
    def build(cls, cf: CFSpec, solution: HypergeometricTerm) -> "SolutionSeries":
        R = solution.ratio
        ratio = RationalFunction(-cf.b.shift(1) * R.den * R.den.shift(1), R.num * R.num.shift(1))
        return cls(cf, solution, ratio)

    @property
    def y0(self) -> Fraction:
        return self.solution.y0

    @property
    def y1(self) -> Fraction:
        return self.y0 * self.solution.ratio(0)

    @property
    def offset(self) -> Fraction:
        """a(0) - y(1)/y(0)."""
        return self.cf.a(0) - self.y1 / self.y0

    @property
    def t0(self) -> Fraction:
        return 1 / (self.y0 * self.y1)


def _check(cf: CFSpec, sol: HypergeometricTerm) -> SolutionSeries:
    if sol.first_valid_index != 0:
        raise ViolatedHypothesis(f"solution vanishes or has a pole before n = {sol.first_valid_index}")
    if sol.y0 == 0:
        raise ViolatedHypothesis("y(0) = 0")
    if not certify(Recurrence2.from_cf(cf.a, cf.b), sol):
        raise ViolatedHypothesis(f"ratio {sol.ratio} does not solve the recurrence of {cf}")
    return SolutionSeries.build(cf, sol)


def series_terms_exact(cf: CFSpec, sol: HypergeometricTerm, K: int) -> list[Fraction]:
    """t_0, ..., t_{K-1} exactly."""
    s = _check(cf, sol)
    out = [s.t0]
    for k in range(K - 1):
        out.append(out[-1] * s.term_ratio(k))
    return out


def _tail(window: list[tuple[int, Fraction]]) -> tuple[Fraction, str] | None:
    """Bound on sum_{k>N} |t_k| from the last WINDOW terms, or None if not yet decreasing."""
    (n0, t0), (n1, t1) = window[0], window[-1]
    if t1 == 0:
        return Fraction(0), "finite"
    ratios = [abs(window[i + 1][1] / window[i][1]) for i in range(len(window) - 1)]
    rho = max(ratios)
    if rho < Fraction(4, 5):
        return abs(t1) * rho / (1 - rho), "geometric"
    if abs(t1) >= abs(t0):
        return None
    m = math.log(abs(t0 / t1)) / math.log(n1 / n0)
    if m <= 1.05:
        return None
    return abs(t1) * n1 / Fraction(m - 1).limit_denominator(10**6), "polynomial"


@dataclass(frozen=True)
class SeriesResult:
    value: FloatApprox
    terms: int
    decay: str
    exponent: float | None = None


def cf_from_solution_detail(cf: CFSpec, sol: HypergeometricTerm, target_digits: int,
                            max_terms: int = 100_000) -> SeriesResult:
    s = _check(cf, sol)
    prec = working_precision(target_digits)
    tol = Fraction(1, 10 ** (target_digits + 1))
    t = BigFloat.from_rational(s.t0, prec)
    total = BigFloat.zero(prec)
    window: list[tuple[int, Fraction]] = []
    rounding = Fraction(0)
    ulp_unit = Fraction(1, 2**prec)
    tr = s.term_ratio
    num_eval, den_eval = tr.num, tr.den
    for k in range(max_terms):
        tf = t.to_fraction()
        total = total + t
        # t_k carries about 2k+2 relative roundings, the running sum one more
        rounding += abs(tf) * (2 * k + 3) * ulp_unit
        window.append((k + 1, tf))
        if len(window) > WINDOW:
            window.pop(0)
        if len(window) == WINDOW and (k + 1) % CHECK_EVERY == 0:
            got = _tail(window)
            if got is not None:
                tail, decay = got
                bound = 2 * tail + rounding + total.ulp().to_fraction()
                if bound <= tol * abs(total.to_fraction()):
                    return _finish(s, total, bound, prec, k + 1, decay, window)
        d = den_eval(k)
        if d == 0:
            raise ViolatedHypothesis(f"y({k + 1}) or y({k + 2}) vanishes")
        r = num_eval(k) / d
        if r == 0:
            return _finish(s, total, rounding + total.ulp().to_fraction(), prec, k + 1, "finite", window)
        t = t.mul(r)
    raise BudgetExceeded(f"particular-solution series for {cf} did not reach {target_digits} digits "
                         f"in {max_terms} terms")


def _finish(s: SolutionSeries, total: BigFloat, bound: Fraction, prec: int, terms: int,
            decay: str, window) -> SeriesResult:
    S = FloatApprox.of(total, bound)
    if abs(S.value.to_fraction()) <= S.error_bound.to_fraction():
        raise IndistinguishableFromZero("particular-solution series sums to zero within its bound")
    y0sq = FloatApprox.exact(s.y0 * s.y0, prec)
    value = FloatApprox.exact(s.offset, prec) + (y0sq * S).reciprocal()
    m = None
    if decay == "polynomial":
        (n0, t0), (n1, t1) = window[0], window[-1]
        m = math.log(abs(t0 / t1)) / math.log(n1 / n0)
    return SeriesResult(value, terms, decay, m)


def cf_from_solution(cf: CFSpec, sol: HypergeometricTerm, target_digits: int,
                     max_terms: int = 100_000) -> FloatApprox:
    return cf_from_solution_detail(cf, sol, target_digits, max_terms).value
