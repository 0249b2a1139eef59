"""Arbitrary-precision binary floating point with explicit error bounds.

A :class:`BigFloat` is ``man * 2**exp`` with ``|man|`` holding exactly ``prec``
bits (or ``man == 0``). Every operation rounds to nearest, ties to even, at the
precision of its widest operand unless another precision is requested.

:class:`FloatApprox` pairs a value with an absolute error bound; its arithmetic
propagates bounds conservatively (input bounds plus one ulp per rounding).
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

MIN_PRECISION = 16
DEFAULT_GUARD_BITS = 64
_LOG2_10 = math.log2(10)


def guard_bits() -> int:
    return int(os.environ.get("CFLAB_PRECISION_GUARD_BITS", DEFAULT_GUARD_BITS))


def working_precision(digits: int) -> int:
    """Bits used for a ``digits``-digit target: 4 bits per digit plus guard bits."""
    return max(MIN_PRECISION, 4 * int(digits) + guard_bits())


def _round_shift(man: int, shift: int) -> int:
    """man / 2**shift rounded to nearest, ties to even (shift > 0)."""
    q, r = divmod(man, 1 << shift)
    half = 1 << (shift - 1)
    if r > half or (r == half and q & 1):
        q += 1
    return q


def _normalize(man: int, exp: int, prec: int) -> tuple[int, int]:
    if man == 0:
        return 0, 0
    sign = -1 if man < 0 else 1
    m = abs(man)
    bl = m.bit_length()
    if bl > prec:
        shift = bl - prec
        m = _round_shift(m, shift)
        exp += shift
        if m.bit_length() > prec:
            m >>= 1
            exp += 1
    elif bl < prec:
        m <<= prec - bl
        exp -= prec - bl
    return sign * m, exp


Number = Union[int, Fraction, "BigFloat"]


@dataclass(frozen=True, slots=True)
class BigFloat:
    man: int
    exp: int
    prec: int

    # -- construction -----------------------------------------------------------

    @classmethod
    def make(cls, man: int, exp: int, prec: int) -> "BigFloat":
        if prec < MIN_PRECISION:
            raise ValueError(f"precision must be at least {MIN_PRECISION} bits")
        m, e = _normalize(man, exp, prec)
        return cls(m, e, prec)

    @classmethod
    def zero(cls, prec: int) -> "BigFloat":
        return cls(0, 0, prec)

    @classmethod
    def from_int(cls, n: int, prec: int) -> "BigFloat":
        return cls.make(int(n), 0, prec)

    @classmethod
    def from_rational(cls, x, prec: int) -> "BigFloat":
        return from_rational(x, prec)

    @classmethod
    def coerce(cls, x: Number, prec: int) -> "BigFloat":
        if isinstance(x, BigFloat):
            return x
        return from_rational(x, prec)

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.man == 0

    @property
    def sign(self) -> int:
        return (self.man > 0) - (self.man < 0)

    def magnitude(self) -> int:
        """floor(log2|x|) for nonzero x."""
        return self.exp + abs(self.man).bit_length() - 1

    def ulp(self) -> "BigFloat":
        """One unit in the last place of this value (of 2**-prec for zero)."""
        if self.man == 0:
            return BigFloat.make(1, -self.prec, self.prec)
        return BigFloat.make(1, self.exp, self.prec)

    def to_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.man << self.exp)
        return Fraction(self.man, 1 << -self.exp)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def with_prec(self, prec: int) -> "BigFloat":
        return BigFloat.make(self.man, self.exp, prec)

    def ldexp(self, k: int) -> "BigFloat":
        return BigFloat(self.man, self.exp + k, self.prec) if self.man else self

    # -- arithmetic ---------------------------------------------------------

    def _other(self, x: Number) -> "BigFloat":
        return BigFloat.coerce(x, self.prec)

    def add(self, other: Number, prec: int | None = None) -> "BigFloat":
        o = self._other(other)
        p = prec or max(self.prec, o.prec)
        if self.man == 0:
            return o.with_prec(p)
        if o.man == 0:
            return self.with_prec(p)
        # skip the exact alignment when one operand is far below the other's ulp
        hi, lo = (self, o) if self.magnitude() >= o.magnitude() else (o, self)
        if hi.magnitude() - lo.magnitude() > p + 4:
            sticky = BigFloat.make(lo.sign, hi.magnitude() - p - 3, p)
            lo = sticky
        e = min(hi.exp, lo.exp)
        man = (hi.man << (hi.exp - e)) + (lo.man << (lo.exp - e))
        return BigFloat.make(man, e, p)

    def __add__(self, other: Number) -> "BigFloat":
        return self.add(other)

    __radd__ = __add__

    def __neg__(self) -> "BigFloat":
        return BigFloat(-self.man, self.exp, self.prec)

    def __abs__(self) -> "BigFloat":
        return BigFloat(abs(self.man), self.exp, self.prec)

    def __sub__(self, other: Number) -> "BigFloat":
        return self.add(-self._other(other))

    def __rsub__(self, other: Number) -> "BigFloat":
        return self._other(other).add(-self)

    def mul(self, other: Number, prec: int | None = None) -> "BigFloat":
        if isinstance(other, int) and not isinstance(other, bool):
            return BigFloat.make(self.man * other, self.exp, prec or self.prec)
        o = self._other(other)
        return BigFloat.make(self.man * o.man, self.exp + o.exp, prec or max(self.prec, o.prec))

    def __mul__(self, other: Number) -> "BigFloat":
        return self.mul(other)

    __rmul__ = __mul__

    def div(self, other: Number, prec: int | None = None) -> "BigFloat":
        o = self._other(other)
        if o.man == 0:
            raise ZeroDivisionError("BigFloat division by zero")
        p = prec or max(self.prec, o.prec)
        if self.man == 0:
            return BigFloat.zero(p)
        shift = p + abs(o.man).bit_length() - abs(self.man).bit_length() + 2
        num = self.man << shift if shift > 0 else self.man
        shift = max(shift, 0)
        q, r = divmod(abs(num), abs(o.man))
        # sticky bit keeps round-to-nearest correct after truncation
        q = (q << 1) | (1 if r else 0)
        sign = -1 if (self.man < 0) != (o.man < 0) else 1
        return BigFloat.make(sign * q, self.exp - o.exp - shift - 1, p)

    def __truediv__(self, other: Number) -> "BigFloat":
        return self.div(other)

    def __rtruediv__(self, other: Number) -> "BigFloat":
        return self._other(other).div(self)

    def sqrt(self) -> "BigFloat":
        if self.man < 0:
            raise ValueError("sqrt of a negative BigFloat")
        if self.man == 0:
            return self
        p = self.prec
        m, e = self.man, self.exp
        shift = 2 * p + 4 - m.bit_length()
        if (e - shift) % 2:
            shift += 1
        root = math.isqrt(m << shift)
        exact = root * root == (m << shift)
        root = (root << 1) | (0 if exact else 1)
        return BigFloat.make(root, (e - shift) // 2 - 1, p)

    # -- comparison -----------------------------------------------------------

    def _cmp(self, other: Number) -> int:
        a = self.to_fraction()
        b = other.to_fraction() if isinstance(other, BigFloat) else Fraction(other)
        return (a > b) - (a < b)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (BigFloat, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other: Number) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: Number) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: Number) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: Number) -> bool:
        return self._cmp(other) >= 0

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    # -- decimal I/O ----------------------------------------------------------

    def to_decimal(self, digits: int) -> str:
        """Scientific notation with ``digits`` significant digits."""
        return format_decimal(self.to_fraction(), digits)

    def __repr__(self) -> str:
        digits = max(1, int(self.prec / _LOG2_10))
        return f"BigFloat({self.to_decimal(digits)}, prec={self.prec})"


def from_rational(x, prec: int) -> BigFloat:
    """Nearest ``prec``-bit value to the exact rational ``x``."""
    if prec < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits")
    if isinstance(x, BigFloat):
        return x.with_prec(prec)
    x = Fraction(x)
    if x == 0:
        return BigFloat.zero(prec)
    num, den = x.numerator, x.denominator
    shift = prec + den.bit_length() - abs(num).bit_length() + 2
    if shift >= 0:
        q, r = divmod(abs(num) << shift, den)
    else:
        q, r = divmod(abs(num), den << -shift)
    q = (q << 1) | (1 if r else 0)
    sign = -1 if num < 0 else 1
    return BigFloat.make(sign * q, -shift - 1, prec)


def format_decimal(x: Fraction, digits: int) -> str:
    """Round an exact rational to ``digits`` significant decimal digits."""
    if digits < 1:
        raise ValueError("digits must be positive")
    if x == 0:
        return "0." + "0" * (digits - 1) + "e+0" if digits > 1 else "0e+0"
    sign = "-" if x < 0 else ""
    x = abs(x)
    e10 = math.floor(math.log10(x.numerator) - math.log10(x.denominator))
    # correct the float estimate of the decimal exponent
    while x >= Fraction(10) ** (e10 + 1):
        e10 += 1
    while x < Fraction(10) ** e10:
        e10 -= 1
    scaled = x * Fraction(10) ** (digits - 1 - e10)
    q, r = divmod(scaled.numerator, scaled.denominator)
    if 2 * r > scaled.denominator or (2 * r == scaled.denominator and q & 1):
        q += 1
    if q >= 10**digits:
        q //= 10
        e10 += 1
    s = str(q)
    mant = s[0] + ("." + s[1:] if len(s) > 1 else "")
    return f"{sign}{mant}e{e10:+d}"


_DECIMAL_RE = re.compile(r"^\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*$")


def parse_decimal(text: str) -> Fraction:
    """Exact rational value of a decimal literal (inverse of :func:`format_decimal`)."""
    m = _DECIMAL_RE.match(text)
    if not m or not (m.group(2) or m.group(3)):
        raise ValueError(f"not a decimal literal: {text!r}")
    sign, ip, fp, ex = m.groups()
    fp = fp or ""
    val = Fraction(int((ip or "0") + fp), 10 ** len(fp))
    if ex:
        val *= Fraction(10) ** int(ex)
    return -val if sign == "-" else val


def bigfloat_from_decimal(text: str, prec: int) -> BigFloat:
    return from_rational(parse_decimal(text), prec)


# -- error-tracked values ------------------------------------------------------


def _pad(e: BigFloat) -> BigFloat:
    # error bounds are carried at 64 bits; inflate by 2**-60 relative to stay an upper bound
    return e.add(e.ldexp(-60), prec=64) if e.man else e


@dataclass(frozen=True, slots=True)
class FloatApprox:
    """A value with an absolute error bound: truth lies in [value - err, value + err]."""

    value: BigFloat
    error_bound: BigFloat

    @classmethod
    def exact(cls, x: Number, prec: int) -> "FloatApprox":
        v = BigFloat.coerce(x, prec)
        if isinstance(x, BigFloat) or v.to_fraction() == Fraction(x):
            return cls(v, BigFloat.zero(64))
        return cls(v, _pad(v.ulp().with_prec(64)))

    @classmethod
    def of(cls, value: BigFloat, error: Number = 0) -> "FloatApprox":
        e = abs(BigFloat.coerce(error, 64)).with_prec(64)
        return cls(value, _pad(e))

    @property
    def prec(self) -> int:
        return self.value.prec

    def __float__(self) -> float:
        return float(self.value)

    def _lift(self, other) -> "FloatApprox":
        if isinstance(other, FloatApprox):
            return other
        return FloatApprox.exact(other, self.prec)

    def __add__(self, other) -> "FloatApprox":
        o = self._lift(other)
        v = self.value + o.value
        e = self.error_bound.add(o.error_bound, prec=64).add(v.ulp(), prec=64)
        return FloatApprox(v, _pad(e))

    __radd__ = __add__

    def __neg__(self) -> "FloatApprox":
        return FloatApprox(-self.value, self.error_bound)

    def __sub__(self, other) -> "FloatApprox":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "FloatApprox":
        return self._lift(other) - self

    def __mul__(self, other) -> "FloatApprox":
        o = self._lift(other)
        v = self.value * o.value
        a, b = abs(self.value).with_prec(64), abs(o.value).with_prec(64)
        ea, eb = self.error_bound, o.error_bound
        e = a.mul(eb, 64).add(b.mul(ea, 64), 64).add(ea.mul(eb, 64), 64).add(v.ulp(), 64)
        return FloatApprox(v, _pad(e))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "FloatApprox":
        o = self._lift(other)
        b = abs(o.value).with_prec(64)
        eb = o.error_bound
        if b <= eb:
            raise ZeroDivisionError("divisor is indistinguishable from zero")
        v = self.value / o.value
        a = abs(self.value).with_prec(64)
        ea = self.error_bound
        # |a/b - (a+da)/(b+db)| <= (|a| eb + |b| ea) / (|b| (|b| - eb))
        num = a.mul(eb, 64).add(b.mul(ea, 64), 64)
        den = b.mul(b.add(-eb, 64), 64)
        e = num.div(den, 64).add(v.ulp(), 64)
        return FloatApprox(v, _pad(_pad(e)))

    def __rtruediv__(self, other) -> "FloatApprox":
        return self._lift(other) / self

    def reciprocal(self) -> "FloatApprox":
        return FloatApprox.exact(1, self.prec) / self

    def widen(self, extra: Number) -> "FloatApprox":
        return FloatApprox(self.value, _pad(self.error_bound.add(abs(BigFloat.coerce(extra, 64)), 64)))

    def contains(self, x: Number) -> bool:
        d = abs(self.value.to_fraction() - (x.to_fraction() if isinstance(x, BigFloat) else Fraction(x)))
        return d <= self.error_bound.to_fraction()

    def to_decimal(self, digits: int) -> str:
        return self.value.to_decimal(digits)

    def __repr__(self) -> str:
        return f"FloatApprox({self.value.to_decimal(max(1, int(self.prec / _LOG2_10)))} ± {self.error_bound.to_decimal(3)})"


def max_digits(prec: int) -> int:
    """Decimal digits resolvable at ``prec`` bits."""
    return int(prec / _LOG2_10)


def agree_digits(a: FloatApprox, b: FloatApprox) -> int:
    """Largest d >= 0 with |a - b| + err_a + err_b <= 10**-d * max(1, |a|).

    Differences within a few ulps of the representation are not significant, so
    the limit is the decimal resolution of the coarser operand.
    """
    limit = max_digits(min(a.prec, b.prec))
    va, vb = a.value.to_fraction(), b.value.to_fraction()
    diff = abs(va - vb)
    slack = 4 * max(a.value.ulp().to_fraction(), b.value.ulp().to_fraction())
    diff = max(Fraction(0), diff - slack)
    total = diff + a.error_bound.to_fraction() + b.error_bound.to_fraction()
    if total == 0:
        return limit
    scale = max(Fraction(1), abs(va))
    rel = total / scale
    if rel > 1:
        return 0
    d = max(0, math.floor(-(math.log10(rel.numerator) - math.log10(rel.denominator))) - 1)
    while rel <= Fraction(1, 10 ** (d + 1)):
        d += 1
    while d > 0 and rel > Fraction(1, 10**d):
        d -= 1
    return min(d, limit)
