"""Hypergeometric solutions of second-order recurrences with polynomial coefficients.

A recurrence ``p2(n) y(n+2) + p1(n) y(n+1) + p0(n) y(n) = 0`` is searched for
solutions whose ratio y(n+1)/y(n) is a rational function, following the Hyper
procedure: every such ratio can be written

    Z * A(n)/B(n) * C(n+1)/C(n),   A | p0(n),  B | p2(n-1),  C a polynomial,

so we enumerate the monic divisor pairs (A, B), read Z off the leading
coefficients and solve a linear system for C.

The Gosper-Petkovsek normal form f(n) = p(n)/p(n-1) * z q(n)/r(n) of a rational
function is provided alongside, with z carrying the leading-coefficient ratio
and p, q, r monic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ViolatedHypothesis
from .exact import (
    Polynomial,
    RationalLike,
    as_rational,
    binomial,
    interpolate,
    monic_divisors,
    poly_gcd,
    rational_roots,
    render_poly,
    render_rational,
    resultant,
)
from .polyparse import parse_poly

MAX_C_DEGREE = 12
ONE = Polynomial.constant(1)


@dataclass(frozen=True)
class RationalFunction:
    num: Polynomial
    den: Polynomial

    def __init__(self, num: Polynomial, den: Polynomial = ONE):
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Polynomial(), ONE
        else:
            g = poly_gcd(num, den)
            num, den = num.exact_div(g), den.exact_div(g)
            lc = den.lead
            num, den = num * (1 / lc), den * (1 / lc)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def parse(cls, num_text: str, den_text: str = "1") -> "RationalFunction":
        return cls(parse_poly(num_text), parse_poly(den_text))

    def __call__(self, n: RationalLike) -> Fraction:
        d = self.den(n)
        if d == 0:
            raise ZeroDivisionError(f"pole of {self} at n = {n}")
        return self.num(n) / d

    def shift(self, j: RationalLike) -> "RationalFunction":
        return RationalFunction(self.num.shift(j), self.den.shift(j))

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalFunction) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    @property
    def lead_ratio(self) -> Fraction:
        return self.num.lead / self.den.lead if self.num else Fraction(0)

    def to_json(self) -> dict:
        return {"num": render_poly(self.num), "den": render_poly(self.den)}

    @classmethod
    def from_json(cls, data) -> "RationalFunction":
        return cls.parse(data["num"], data.get("den", "1"))

    def __str__(self) -> str:
        if self.den == ONE:
            return render_poly(self.num)
        return f"({render_poly(self.num)})/({render_poly(self.den)})"


# -- Gosper-Petkovsek normal form ------------------------------------------------


@dataclass(frozen=True)
class GPForm:
    z: Fraction
    p: Polynomial
    q: Polynomial
    r: Polynomial

    def reconstruct(self) -> RationalFunction:
        """p(n)/p(n-1) * z q(n)/r(n)."""
        return RationalFunction(self.p * self.q * self.z, self.p.shift(-1) * self.r)

    def condition_failures(self, max_shift: int | None = None) -> list[str]:
        """Which of the three gcd conditions fail (empty list when all hold)."""
        bad = []
        for j in _shift_roots(self.q, self.r, max_shift):
            if poly_gcd(self.q, self.r.shift(j)).degree > 0:
                bad.append(f"gcd(q(n), r(n+{j})) != 1")
        if poly_gcd(self.p.shift(-1), self.q).degree > 0:
            bad.append("gcd(p(n-1), q(n)) != 1")
        if poly_gcd(self.p, self.r).degree > 0:
            bad.append("gcd(p(n), r(n)) != 1")
        return bad


def _shift_roots(q: Polynomial, r: Polynomial, max_shift: int | None = None) -> list[int]:
    """Nonnegative integers j with Res_n(q(n), r(n+j)) = 0, in increasing order.

    The resultant is a polynomial in j of degree at most deg q * deg r; it is
    interpolated from that many plus one integer samples.
    """
    if q.degree <= 0 or r.degree <= 0:
        return []
    k = q.degree * r.degree
    xs = list(range(k + 1))
    ys = [resultant(q, r.shift(j)) for j in xs]
    res = interpolate(xs, ys)
    if res.is_zero():
        raise ArithmeticError("resultant vanished identically; inputs share a factor")
    out = [int(x) for x in rational_roots(res) if x.denominator == 1 and x >= 0]
    if max_shift is not None:
        out = [j for j in out if j <= max_shift]
    return sorted(out)


def gp_normal_form(f: RationalFunction) -> GPForm:
    if f.is_zero():
        raise ValueError("the zero function has no normal form")
    z = f.num.lead / f.den.lead
    q, r = f.num.monic(), f.den.monic()
    c = ONE
    for j in _shift_roots(q, r):
        g = poly_gcd(q, r.shift(j))
        if g.degree <= 0:
            continue
        q = q.exact_div(g)
        r = r.exact_div(g.shift(-j))
        for i in range(1, j + 1):
            c = c * g.shift(-i)
    # f = z q/r * c(n+1)/c(n), so p(n) = c(n+1)
    return GPForm(z, c.shift(1), q, r)


# -- recurrences and hypergeometric terms -------------------------------------------


@dataclass(frozen=True)
class Recurrence2:
    """p2(n) y(n+2) + p1(n) y(n+1) + p0(n) y(n) = 0."""

    p2: Polynomial
    p1: Polynomial
    p0: Polynomial

    def __post_init__(self):
        if self.p2.is_zero() or self.p0.is_zero():
            raise ValueError("p2 and p0 must be nonzero for a second-order recurrence")

    @classmethod
    def from_cf(cls, a: Polynomial, b: Polynomial) -> "Recurrence2":
        """y(n+1) = a(n) y(n) + b(n) y(n-1), shifted to y(n+2) - a(n+1) y(n+1) - b(n+1) y(n) = 0."""
        return cls(ONE, -a.shift(1), -b.shift(1))

    def residual(self, ratio: RationalFunction) -> Polynomial:
        """Numerator of p2 R(n+1)R(n) + p1 R(n) + p0 with denominators cleared."""
        N, D = ratio.num, ratio.den
        N1, D1 = N.shift(1), D.shift(1)
        return self.p2 * N1 * N + self.p1 * N * D1 + self.p0 * D * D1


@dataclass(frozen=True)
class HypergeometricTerm:
    """y with y(first_valid_index) = y0 and y(n+1) = ratio(n) y(n)."""

    ratio: RationalFunction
    y0: Fraction = Fraction(1)
    first_valid_index: int = 0

    def to_json(self) -> dict:
        return {**self.ratio.to_json(), "y0": render_rational(self.y0),
                "first_valid_index": self.first_valid_index}


def first_valid_index(ratio: RationalFunction) -> int:
    """Smallest k >= 0 past every nonnegative integer zero or pole of the ratio."""
    worst = -1
    for poly in (ratio.num, ratio.den):
        if poly.degree > 0:
            for x in rational_roots(poly):
                if x.denominator == 1 and x >= 0:
                    worst = max(worst, int(x))
    return worst + 1


def make_term(ratio: RationalFunction, y0: RationalLike = 1) -> HypergeometricTerm:
    return HypergeometricTerm(ratio, as_rational(y0), first_valid_index(ratio))


def certify(rec: Recurrence2, term: HypergeometricTerm | RationalFunction) -> bool:
    ratio = term.ratio if isinstance(term, HypergeometricTerm) else term
    return rec.residual(ratio).is_zero()


def term_value(term: HypergeometricTerm, n: int) -> Fraction:
    return _term_prefix(term, n)[-1]


def term_values(term: HypergeometricTerm, n: int) -> list[Fraction]:
    """[y(k0), ..., y(n)] with k0 = first_valid_index."""
    return list(_term_prefix(term, n))


@lru_cache(maxsize=256)
def _term_prefix(term: HypergeometricTerm, n: int) -> tuple[Fraction, ...]:
    k0 = term.first_valid_index
    if n < k0:
        raise ViolatedHypothesis(f"y_{n} requested below the first valid index {k0}")
    ys = [term.y0]
    for k in range(k0, n):
        ys.append(ys[-1] * term.ratio(k))
    return tuple(ys)


# -- the Hyper search ----------------------------------------------------------------


def _z_candidates(P: list[Polynomial]) -> list[Fraction]:
    d = max(p.degree for p in P)
    coeffs = [p.coeffs[d] if p.degree >= d and p.degree >= 0 else Fraction(0) for p in P]
    # sum_i coeffs[i] Z^i = 0 with Z != 0
    char = Polynomial(coeffs)
    if char.degree <= 0:
        return []
    return [z for z in rational_roots(char) if z != 0]


def _falling(d: int, j: int) -> int:
    out = 1
    for i in range(j):
        out *= d - i
    return out


def _degree_bound(R: list[Polynomial]) -> int:
    """Degree bound for polynomial solutions of sum_i R_i(n) C(n+i) = 0."""
    Q = []
    for j in range(len(R)):
        acc = Polynomial()
        for i in range(j, len(R)):
            acc = acc + R[i] * binomial(i, j)
        Q.append(acc)
    live = [(j, q) for j, q in enumerate(Q) if not q.is_zero()]
    if not live:
        return MAX_C_DEGREE
    b = max(q.degree - j for j, q in live)
    top = [(j, q.lead) for j, q in live if q.degree - j == b]
    bound = len(R) - 1
    # alpha(d) = sum lc(Q_j) d^(falling j); test integer candidates directly
    for d in range(MAX_C_DEGREE + 1):
        if sum(lc * _falling(d, j) for j, lc in top) == 0:
            bound = max(bound, d)
    return min(bound, MAX_C_DEGREE)


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : rows x = 0} from the reduced row echelon form."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def polynomial_solutions(R: list[Polynomial]) -> list[Polynomial]:
    """Basis of polynomial C with sum_i R_i(n) C(n+i) = 0."""
    D = _degree_bound(R)
    ncols = D + 1
    # column k is the contribution of the monomial n^k
    cols = []
    for k in range(ncols):
        mono = Polynomial.monomial(k)
        acc = Polynomial()
        for i, Ri in enumerate(R):
            acc = acc + Ri * mono.shift(i)
        cols.append(acc)
    height = max((c.degree for c in cols), default=-1) + 1
    rows = [[c.coeffs[i] if i <= c.degree else Fraction(0) for c in cols] for i in range(height)]
    return [Polynomial(v) for v in _nullspace(rows, ncols)]


def hyper_solve(rec: Recurrence2) -> list[HypergeometricTerm]:
    """All hypergeometric solutions (one per reduced ratio), canonically sorted."""
    found: dict[RationalFunction, HypergeometricTerm] = {}
    p2_prev = rec.p2.shift(-1)
    for A in monic_divisors(rec.p0):
        for B in monic_divisors(p2_prev):
            P2 = rec.p2.exact_div(B.shift(1)) * A.shift(1)
            P1 = rec.p1
            P0 = rec.p0.exact_div(A) * B
            for z in _z_candidates([P0, P1, P2]):
                R = [P0, P1 * z, P2 * z * z]
                for C in polynomial_solutions(R):
                    ratio = RationalFunction(A * C.shift(1) * z, B * C)
                    if ratio.is_zero() or ratio in found:
                        continue
                    if not certify(rec, ratio):
                        continue
                    found[ratio] = make_term(ratio)
    return sorted(found.values(), key=_term_key)


def _term_key(t: HypergeometricTerm):
    r = t.ratio
    return (r.num.degree, r.den.degree, r.lead_ratio, render_poly(r.num), render_poly(r.den))
