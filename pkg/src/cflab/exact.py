"""Exact rational arithmetic and univariate polynomials in the variable ``n``.

Integers are Python ints and rationals are :class:`fractions.Fraction`, both of
which normalize eagerly (lowest terms, positive denominator). This module adds
the polynomial type used for every a(n), b(n) and recurrence coefficient, plus
the combinatorial helpers (Pochhammer symbols, double factorials) the rest of
the package consumes.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Iterable, Sequence, Union

RationalLike = Union[int, Fraction]


def as_rational(x: RationalLike | str) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class Polynomial:
    """Immutable polynomial over Q in one variable.

    ``coeffs[i]`` is the coefficient of n**i; trailing zeros are stripped so the
    zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def constant(cls, c: RationalLike) -> "Polynomial":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c: RationalLike = 1) -> "Polynomial":
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable[RationalLike], lead: RationalLike = 1) -> "Polynomial":
        p = cls.constant(lead)
        for r in roots:
            p = p * cls([-as_rational(r), 1])
        return p

    # -- basic properties -----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({render_poly(self)!r})"

    def __str__(self) -> str:
        return render_poly(self)

    # -- arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        return Polynomial.constant(as_rational(x))

    def __add__(self, other) -> "Polynomial":
        o = self._coerce(other).coeffs
        s = self.coeffs
        n = max(len(s), len(o))
        return Polynomial(
            (s[i] if i < len(s) else 0) + (o[i] if i < len(o) else 0) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        o = self._coerce(other).coeffs
        s = self.coeffs
        if not s or not o:
            return Polynomial()
        out = [Fraction(0)] * (len(s) + len(o) - 1)
        for i, a in enumerate(s):
            if a == 0:
                continue
            for j, b in enumerate(o):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lead
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lc
            if c == 0:
                continue
            quot[i - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other) -> "Polynomial":
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other) -> "Polynomial":
        return self.divmod(self._coerce(other))[1]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = self.divmod(other)
        if r:
            raise ValueError(f"{other} does not divide {self}")
        return q

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    # -- evaluation and transforms ---------------------------------------------

    def __call__(self, x):
        return poly_eval(self, x)

    def shift(self, j: RationalLike) -> "Polynomial":
        return poly_shift(self, j)

    def diff(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def forward_difference(self) -> "Polynomial":
        """n -> p(n+1) - p(n)."""
        return poly_shift(self, 1) - self

    def content_integer(self) -> "Polynomial":
        """Primitive integer associate with positive leading coefficient."""
        if self.is_zero():
            return self
        den = reduce(math.lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(math.gcd, ints)
        if ints[-1] < 0:
            g = -g
        return Polynomial(Fraction(c, g) for c in ints)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)


def poly_eval(p: Polynomial, x):
    """Horner evaluation; exact when ``x`` is an int or Fraction."""
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    if isinstance(acc, Fraction) or isinstance(x, (int, Fraction)):
        return Fraction(acc)
    return acc


def poly_shift(p: Polynomial, j: RationalLike) -> Polynomial:
    """The polynomial n -> p(n + j)."""
    j = as_rational(j)
    out = Polynomial()
    lin = Polynomial([j, 1])
    for c in reversed(p.coeffs):
        out = out * lin + c
    return out


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic gcd over Q[n]."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    while q:
        p, q = q, p % q
    return p.monic()


def poly_compose(p: Polynomial, q: Polynomial) -> Polynomial:
    out = Polynomial()
    for c in reversed(p.coeffs):
        out = out * q + c
    return out


def _divisors(m: int) -> list[int]:
    m = abs(m)
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d * d != m:
                large.append(m // d)
        d += 1
    return small + large[::-1]


def rational_roots(p: Polynomial) -> list[Fraction]:
    """Distinct rational roots by the rational-root test on the primitive form."""
    if p.is_zero():
        raise ValueError("zero polynomial has every number as a root")
    roots: list[Fraction] = []
    q = p.content_integer()
    if q.coeffs and q.coeffs[0] == 0:
        roots.append(Fraction(0))
        k = next(i for i, c in enumerate(q.coeffs) if c != 0)
        q = Polynomial(q.coeffs[k:])
    if q.degree <= 0:
        return roots
    a0 = int(q.coeffs[0])
    an = int(q.coeffs[-1])
    cands = set()
    for num in _divisors(a0):
        for den in _divisors(an):
            cands.add(Fraction(num, den))
            cands.add(Fraction(-num, den))
    for r in sorted(cands):
        if poly_eval(q, r) == 0:
            roots.append(r)
    return sorted(roots)


def linear_factorization(p: Polynomial) -> tuple[Fraction, list[Fraction], Polynomial]:
    """Split ``p = unit * prod(n - root) * remainder``.

    ``unit`` is the leading coefficient, roots carry multiplicity and the monic
    ``remainder`` has no rational root. The remainder is not factored further.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    unit = p.lead
    rest = p.monic()
    roots: list[Fraction] = []
    for r in rational_roots(rest):
        lin = Polynomial([-r, 1])
        while True:
            q, rem = rest.divmod(lin)
            if rem:
                break
            roots.append(r)
            rest = q
    return unit, sorted(roots), rest


def monic_divisors(p: Polynomial) -> list[Polynomial]:
    """All monic divisors built from rational linear factors and the opaque remainder."""
    _, roots, rest = linear_factorization(p)
    mult: dict[Fraction, int] = {}
    for r in roots:
        mult[r] = mult.get(r, 0) + 1
    keys = sorted(mult)
    blocks = [Polynomial.constant(1)]
    if rest.degree > 0:
        blocks.append(rest)
    out = []
    for exps in product(*(range(mult[k] + 1) for k in keys)):
        base = Polynomial.from_roots(r for r, e in zip(keys, exps) for _ in range(e))
        for blk in blocks:
            out.append(base * blk)
    out.sort(key=lambda d: (d.degree, d.coeffs))
    return out


def pochhammer(a: RationalLike, k: int) -> Fraction:
    """Rising factorial (a)_k."""
    if k < 0:
        raise ValueError("pochhammer needs k >= 0")
    a = as_rational(a)
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def double_factorial(k: int) -> Fraction:
    """k!! with (-1)!! = 1 and (-3)!! = -1."""
    if k < -3:
        raise ValueError(f"double factorial undefined for {k} < -3")
    if k == -3:
        return Fraction(-1)
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return Fraction(out)


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def render_rational(x: Fraction) -> str:
    x = as_rational(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def render_poly(p: Polynomial) -> str:
    """Expanded form with descending powers, e.g. ``3n^2+3n+1``."""
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if i == 0:
            body = render_rational(mag)
        else:
            var = "n" if i == 1 else f"n^{i}"
            if mag == 1:
                body = var
            elif mag.denominator == 1:
                body = f"{mag.numerator}{var}"
            else:
                body = f"({render_rational(mag)}){var}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += sign + body
    return out


def resultant(p: Polynomial, q: Polynomial) -> Fraction:
    """Resultant via the Euclidean recurrence."""
    if p.is_zero() or q.is_zero():
        return Fraction(0)
    res = Fraction(1)
    while True:
        dp, dq = p.degree, q.degree
        if dq == 0:
            return res * q.lead ** dp
        r = p % q
        if r.is_zero():
            return Fraction(0)
        if dp % 2 == 1 and dq % 2 == 1:
            res = -res
        res *= q.lead ** (dp - r.degree)
        p, q = q, r


def interpolate(xs: Sequence[RationalLike], ys: Sequence[RationalLike]) -> Polynomial:
    """Lagrange interpolation through the given points."""
    out = Polynomial()
    for i, xi in enumerate(xs):
        term = Polynomial.constant(ys[i])
        for j, xj in enumerate(xs):
            if j != i:
                term = term * Polynomial([-as_rational(xj), 1]) * (1 / (as_rational(xi) - xj))
        out = out + term
    return out
