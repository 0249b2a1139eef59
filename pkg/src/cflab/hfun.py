"""The H function H(alpha, beta; gamma) and the identities it satisfies.

H is the reciprocal of CF[D(n(n+alpha)(n+beta)), -2n(n+alpha)(n+beta)(n+gamma)].
Where 2 gamma - alpha - beta < 1 it also equals

    1/4 * sum_n (1/2)_n (gamma+1)_n / (((alpha+1)/2)_{n+1} ((beta+1)/2)_{n+1})

whose terms only decay like n**(-1-eps), eps = (alpha+beta+1)/2 - gamma. The
continued fraction converges geometrically everywhere the parameters are
admissible, so it is the authoritative route; the series and the contiguous
relations serve as independent cross-checks.

Contiguous relations (R1 in alpha, R2 in gamma):

    alpha(alpha-2gamma-1) H(a,b;g) - (alpha-1)(alpha+beta-2gamma-1) H(a-2,b;g) + 1 = 0
    2gamma(2gamma-alpha-beta-1) H(a,b;g) - (2gamma-alpha-1)(2gamma-beta-1) H(a,b;g-1) + 1 = 0
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .bigfloat import BigFloat, FloatApprox, working_precision
from .cf_engine import eval_cf, h_family_poles, h_family_spec
from .errors import BudgetExceeded, DegenerateRelation, DivergentSeries, PoleError, SingularConvergent
from .exact import RationalLike, as_rational, pochhammer

LADDER_GUARD_DIGITS = 10
MAX_LADDER_DEPTH = 40


@dataclass(frozen=True, order=True)
class HParams:
    alpha: Fraction
    beta: Fraction
    gamma: Fraction

    def __init__(self, alpha: RationalLike, beta: RationalLike, gamma: RationalLike):
        object.__setattr__(self, "alpha", as_rational(alpha))
        object.__setattr__(self, "beta", as_rational(beta))
        object.__setattr__(self, "gamma", as_rational(gamma))

    @property
    def eps(self) -> Fraction:
        """(alpha+beta+1)/2 - gamma; the series converges iff this is positive."""
        return (self.alpha + self.beta + 1) / 2 - self.gamma

    def poles(self) -> list[str]:
        return h_family_poles(self.alpha, self.beta, self.gamma)

    @property
    def is_pole(self) -> bool:
        return bool(self.poles())

    @property
    def regular(self) -> bool:
        """No pole and eps is not a nonpositive integer."""
        e = self.eps
        return not self.is_pole and not (e.denominator == 1 and e <= 0)

    def swapped(self) -> "HParams":
        return HParams(self.beta, self.alpha, self.gamma)

    def shifted(self, da: RationalLike = 0, db: RationalLike = 0, dg: RationalLike = 0) -> "HParams":
        return HParams(self.alpha + da, self.beta + db, self.gamma + dg)

    def __str__(self) -> str:
        return f"({self.alpha}, {self.beta}; {self.gamma})"


def _params(p) -> HParams:
    return p if isinstance(p, HParams) else HParams(*p)


def _require_regular(p: HParams) -> None:
    bad = p.poles()
    if bad:
        raise PoleError(f"H{p}: " + ", ".join(bad))
    e = p.eps
    if e.denominator == 1 and e <= 0:
        raise PoleError(f"H{p}: (alpha+beta+1)/2 - gamma = {e} is a nonpositive integer")


# -- the hypergeometric series -----------------------------------------------


def series_convergence_class(p) -> str:
    p = _params(p)
    if p.is_pole:
        return "pole"
    return "convergent" if 2 * p.gamma - p.alpha - p.beta < 1 else "divergent"


def h_series_term(p, n: int) -> Fraction:
    p = _params(p)
    if p.is_pole:
        raise PoleError(f"H{p}: " + ", ".join(p.poles()))
    ah, bh = (p.alpha + 1) / 2, (p.beta + 1) / 2
    return (pochhammer(Fraction(1, 2), n) * pochhammer(p.gamma + 1, n)
            / (pochhammer(ah, n + 1) * pochhammer(bh, n + 1)))


def _power_tail(ts: list[float], ns: list[int], eps: float) -> tuple[float, float]:
    """Tail sum past ns[-1] for t_k ~ C k^(-1-eps) (1 + D/k).

    Returns (estimate, uncertainty): the estimate integrates the two-parameter
    model from N + 1/2; the uncertainty is its distance from the one-parameter
    (D = 0) model, which dominates the neglected O(k^-2) corrections.
    """
    n0, n1 = ns[0], ns[-1]
    t0, t1 = ts[0], ts[-1]
    s = 1 + eps
    # t * k^s = C + C D / k, fitted through the two end points
    u0, u1 = t0 * n0**s, t1 * n1**s
    cd = (u0 - u1) / (1 / n0 - 1 / n1)
    c = u1 - cd / n1
    x = n1 + 0.5
    two = c * x**-eps / eps + cd * x ** (-s) / s
    one = u1 * x**-eps / eps
    return two, abs(two - one)


def h_value_series(p, max_terms: int = 100_000) -> FloatApprox:
    """H as 1/4 of the hypergeometric series, with a fitted power-law tail.

    Terms are generated by their ratio in double precision; the accumulated
    rounding is bounded by (4k+4) machine epsilons per term.
    """
    p = _params(p)
    cls = series_convergence_class(p)
    if cls != "convergent":
        raise DivergentSeries(f"series for H{p} is {cls}")
    if max_terms < 32:
        raise ValueError("need at least 32 terms for the tail fit")
    ah, bh, g = float((p.alpha + 1) / 2), float((p.beta + 1) / 2), float(p.gamma)
    t = float(h_series_term(p, 0))
    terms = []
    round_err = 0.0
    last: deque = deque(maxlen=16)
    eps_m = 2.0**-52
    for k in range(max_terms):
        terms.append(t)
        round_err += abs(t) * (4 * k + 4) * eps_m
        last.append((k, t))
        t *= (k + 0.5) * (k + 1 + g) / ((k + 1 + ah) * (k + 1 + bh))
    total = math.fsum(terms)
    ns = [k for k, _ in last]
    ts = [v for _, v in last]
    tail, tail_err = _power_tail(ts, ns, float(p.eps))
    value = Fraction(total + tail) / 4
    err = Fraction(tail_err + round_err + abs(total) * eps_m) / 4
    v = BigFloat.from_rational(value, 64)
    return FloatApprox.of(v, err + v.ulp().to_fraction())


# -- continued fraction route ------------------------------------------------


def h_value_cf(p, target_digits: int, max_iter: int = 100_000) -> FloatApprox:
    p = _params(p)
    _require_regular(p)
    cf = eval_cf(h_family_spec(p.alpha, p.beta, p.gamma), target_digits, max_iter=max_iter)
    return cf.as_approx().reciprocal()


def h_value_raw(p, target_digits: int, max_iter: int = 100_000) -> FloatApprox:
    """1/CF without the regularity checks; a terminating CF gives its finite value."""
    p = _params(p)
    cf = eval_cf(h_family_spec(p.alpha, p.beta, p.gamma), target_digits, max_iter=max_iter)
    return cf.as_approx().reciprocal()


# -- contiguous relations ------------------------------------------------------


def _apply(coef: Fraction, H: FloatApprox, shift: Fraction, divisor: Fraction) -> FloatApprox:
    prec = H.prec
    return (H * FloatApprox.exact(coef, prec) + FloatApprox.exact(shift, prec)) / FloatApprox.exact(divisor, prec)


def alpha_step_down(p, H_at_p: FloatApprox) -> FloatApprox:
    """H(alpha-2, beta; gamma) from H(alpha, beta; gamma)."""
    p = _params(p)
    a, b, g = p.alpha, p.beta, p.gamma
    div = (a - 1) * (a + b - 2 * g - 1)
    if div == 0:
        raise DegenerateRelation(f"alpha relation at H{p} divides by (alpha-1)(alpha+beta-2gamma-1) = 0")
    return _apply(a * (a - 2 * g - 1), H_at_p, Fraction(1), div)


def alpha_step_up(p, H_at_p: FloatApprox) -> FloatApprox:
    """H(alpha+2, beta; gamma) from H(alpha, beta; gamma)."""
    p = _params(p)
    a2, b, g = p.alpha + 2, p.beta, p.gamma
    div = a2 * (a2 - 2 * g - 1)
    if div == 0:
        raise DegenerateRelation(f"alpha relation at H{p.shifted(da=2)} divides by alpha(alpha-2gamma-1) = 0")
    return _apply((a2 - 1) * (a2 + b - 2 * g - 1), H_at_p, Fraction(-1), div)


def gamma_step_down(p, H_at_p: FloatApprox) -> FloatApprox:
    """H(alpha, beta; gamma-1) from H(alpha, beta; gamma)."""
    p = _params(p)
    a, b, g = p.alpha, p.beta, p.gamma
    div = (2 * g - a - 1) * (2 * g - b - 1)
    if div == 0:
        raise DegenerateRelation(f"gamma relation at H{p} divides by (2gamma-alpha-1)(2gamma-beta-1) = 0")
    return _apply(2 * g * (2 * g - a - b - 1), H_at_p, Fraction(1), div)


def gamma_step_up(p, H_at_p: FloatApprox) -> FloatApprox:
    """H(alpha, beta; gamma+1) from H(alpha, beta; gamma)."""
    p = _params(p)
    a, b, g = p.alpha, p.beta, p.gamma + 1
    div = 2 * g * (2 * g - a - b - 1)
    if div == 0:
        raise DegenerateRelation(f"gamma relation at H{p.shifted(dg=1)} divides by 2gamma(2gamma-alpha-beta-1) = 0")
    return _apply((2 * g - a - 1) * (2 * g - b - 1), H_at_p, Fraction(-1), div)


# -- ladder planner ------------------------------------------------------------

# each move names the neighbour to evaluate and how to come back from it
_MOVES = (
    ("gamma-1", (0, 0, -1)),
    ("alpha+2", (2, 0, 0)),
    ("beta+2", (0, 2, 0)),
)


@dataclass(frozen=True)
class LadderStep:
    move: str
    source: HParams  # where H is known
    target: HParams  # where the step produces H


def _back(move: str, source: HParams, H: FloatApprox) -> FloatApprox:
    if move == "gamma-1":
        return gamma_step_up(source, H)
    if move == "alpha+2":
        return alpha_step_down(source, H)
    # beta+2: use the alpha relation on the swapped parameters (H is symmetric)
    return alpha_step_down(source.swapped(), H)


def _move_ok(move: str, here: HParams, there: HParams) -> bool:
    if there.is_pole:
        return False
    probe = FloatApprox.exact(1, 64)
    try:
        _back(move, there, probe)
    except DegenerateRelation:
        return False
    return True


def plan_ladder(p, min_steps: int = 0) -> list[LadderStep]:
    """Shortest chain of contiguous-relation steps from a convergent-series point to p.

    Breadth-first over gamma-1, alpha+2, beta+2 moves (tried in that order, so
    gamma is normalized first); moves whose relation would divide by zero or
    land on a pole are skipped, so a blocked route falls back to the next one.
    Steps are returned in evaluation order: the first step's source is the
    point evaluated directly.
    """
    p = _params(p)
    _require_regular(p)
    start = p
    queue = deque([(start, [])])
    seen = {start}
    blocked = []
    while queue:
        here, path = queue.popleft()
        if len(path) >= min_steps and series_convergence_class(here) == "convergent" and here.regular:
            return list(reversed(path))
        if len(path) >= MAX_LADDER_DEPTH:
            continue
        for name, (da, db, dg) in _MOVES:
            there = here.shifted(da, db, dg)
            if there in seen:
                continue
            if not _move_ok(name, here, there):
                blocked.append(f"{name} from H{here}")
                continue
            seen.add(there)
            queue.append((there, path + [LadderStep(name, there, here)]))
    raise DegenerateRelation(f"no ladder reaches H{p}; blocked steps: " + "; ".join(blocked[:12]))


def run_ladder(steps: list[LadderStep], target_digits: int) -> FloatApprox:
    digits = target_digits + LADDER_GUARD_DIGITS
    H = h_value_cf(steps[0].source, digits)
    prec = working_precision(digits)
    H = FloatApprox(H.value.with_prec(prec), H.error_bound)
    for s in steps:
        H = _back(s.move, s.source, H)
    return H


def h_anywhere(p, target_digits: int, route: str = "auto") -> FloatApprox:
    """H at any admissible parameters.

    ``route``: "direct" uses the continued fraction only, "ladder" forces at
    least one contiguous-relation step from a convergent-series point, and
    "auto" tries the continued fraction and falls back to a ladder if it stalls.
    """
    p = _params(p)
    _require_regular(p)
    if route in ("auto", "direct"):
        try:
            return h_value_cf(p, target_digits)
        except (BudgetExceeded, SingularConvergent):
            if route == "direct":
                raise
    elif route != "ladder":
        raise ValueError(f"unknown route {route!r}")
    steps = plan_ladder(p, min_steps=1 if route == "ladder" else 0)
    if not steps:
        return h_value_cf(p, target_digits)
    return run_ladder(steps, target_digits)


# -- the geometrically convergent series ---------------------------------------


def h_geometric_series(p, max_terms: int = 120, prec: int | None = None) -> FloatApprox:
    """H = sum_n (alpha+1)_n (beta+1)_n 2^n / ((gamma+1)_{n+1} (n+1)! A'_n A'_{n+1}).

    A'_n = A_n / ((gamma+1)_n n!) are the normalized convergent numerators,
    generated by their own three-term recurrence. The term ratio tends to 1/2;
    the tail is bounded geometrically by the largest ratio of the last terms.
    """
    p = _params(p)
    _require_regular(p)
    prec = prec or working_precision(40)
    a, b, g = p.alpha, p.beta, p.gamma
    cf = h_family_spec(a, b, g)
    one = BigFloat.from_int(1, prec)
    Ap_prev, Ap = one, BigFloat.from_rational(cf.a(0) / (g + 1), prec)
    c = BigFloat.from_rational(1 / (g + 1), prec)
    total = BigFloat.zero(prec)
    last_terms: deque = deque(maxlen=8)
    round_rel = Fraction(0)
    for n in range(max_terms):
        if Ap_prev.is_zero() or Ap.is_zero():
            raise SingularConvergent(f"A'_{n if Ap_prev.is_zero() else n + 1} = 0 for H{p}")
        term = c / (Ap_prev * Ap)
        total = total + term
        last_terms.append(abs(term.to_fraction()))
        round_rel += abs(term.to_fraction()) * (16 * n + 16)
        # advance A' and the weight c
        nxt = (Ap.mul(cf.a(n + 1)) - Ap_prev.mul(2 * (n + 1 + a) * (n + 1 + b))) / ((n + 2) * (n + 2 + g))
        Ap_prev, Ap = Ap, nxt
        c = c.mul(2 * (a + 1 + n) * (b + 1 + n) / ((g + 2 + n) * (n + 2)))
    ratios = [last_terms[i + 1] / last_terms[i] for i in range(len(last_terms) - 1) if last_terms[i]]
    rho = max(ratios) if ratios else Fraction(1)
    if rho >= Fraction(3, 4):
        raise BudgetExceeded(f"term ratio {float(rho):.3f} of the series for H{p} is not yet below 3/4")
    tail = last_terms[-1] * rho / (1 - rho)
    err = tail + round_rel * Fraction(1, 2**prec) + total.ulp().to_fraction()
    return FloatApprox.of(total, err)


def symmetry_check(p_idx: int, q_idx: int, target_digits: int) -> bool:
    """|H(2p,0;q) - H(2q,0;p)| < 10**-target_digits."""
    x = h_anywhere((2 * p_idx, 0, q_idx), target_digits + 5)
    y = h_anywhere((2 * q_idx, 0, p_idx), target_digits + 5)
    diff = abs(x.value.to_fraction() - y.value.to_fraction())
    return diff < Fraction(1, 10**target_digits)
