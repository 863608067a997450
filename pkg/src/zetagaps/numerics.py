"""Log-domain reals, outward-rounded enclosures and a few special functions.

Quantities such as ``exp(exp(30.76))`` overflow every hardware float, so a
value is carried as a sign together with the natural log of its magnitude.
The log is an mpmath float held on a private context whose working precision
is ``precision_bits + GUARD_BITS``; every directed operation is widened by
``2**-precision_bits`` times the magnitude of the terms it combined, which
dominates the working-precision rounding error by a factor of ``2**GUARD_BITS``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Callable, Union

import mpmath
import numpy as np
from scipy import special

from .errors import DomainError, NoBracket

DEFAULT_PRECISION_BITS = 160
GUARD_BITS = 64

_ctx = mpmath.MPContext()
_ctx.prec = DEFAULT_PRECISION_BITS + GUARD_BITS
_bits = DEFAULT_PRECISION_BITS

mpf = _ctx.mpf


def set_precision(bits: int) -> None:
    """Change the stored precision of log magnitudes (process-wide)."""
    global _bits
    if bits < 128:
        raise ValueError("precision_bits must be >= 128")
    _bits = int(bits)
    _ctx.prec = _bits + GUARD_BITS


def precision_bits() -> int:
    return _bits


def _nudge(x, up: bool, scale=None):
    if x == 0 and scale is None:
        return x
    if not _ctx.isfinite(x):
        return x
    s = abs(x) if scale is None else scale
    if s == 0:
        return x
    delta = _ctx.ldexp(s, -_bits)
    return x + delta if up else x - delta


def _to_mpf(v):
    if isinstance(v, Fraction):
        return mpf(v.numerator) / v.denominator
    if isinstance(v, str):
        return mpf(v.strip())
    return mpf(v)


def _round_ln(sign: int, ln, rnd: int, scale=None):
    # rnd < 0 rounds the represented real toward -inf, rnd > 0 toward +inf
    if rnd == 0 or sign == 0:
        return ln
    return _nudge(ln, (rnd > 0) == (sign > 0), scale)


@total_ordering
@dataclass(frozen=True)
class LogReal:
    """Signed real stored as ``sign * exp(ln_mag)``."""

    sign: int
    ln_mag: object

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"bad sign {self.sign!r}")
        ln = self.ln_mag if isinstance(self.ln_mag, _ctx.mpf) else _to_mpf(self.ln_mag)
        object.__setattr__(self, "ln_mag", ln)
        if (self.sign == 0) != (ln == _ctx.ninf):
            raise ValueError("sign == 0 exactly when ln_mag == -inf")

    # -- construction -------------------------------------------------------
    @classmethod
    def zero(cls) -> LogReal:
        return cls(0, _ctx.ninf)

    @classmethod
    def from_ln(cls, ln, sign: int = 1) -> LogReal:
        return cls(sign, _to_mpf(ln))

    @classmethod
    def of(cls, value, rnd: int = 0) -> LogReal:
        """Convert a plain number (int, float, str, Fraction, mpf)."""
        if isinstance(value, LogReal):
            return value
        v = _to_mpf(value)
        if v == 0:
            return cls.zero()
        sign = 1 if v > 0 else -1
        ln = _ctx.log(abs(v))
        # the conversion error of v is relative, hence absolute on ln
        return cls(sign, _round_ln(sign, ln, rnd, abs(ln) + 1))

    # -- conversion ---------------------------------------------------------
    def to_mpf(self, rnd: int = 0):
        if self.sign == 0:
            return mpf(0)
        v = self.sign * _ctx.exp(self.ln_mag)
        if rnd:
            v = _nudge(v, rnd > 0)
        return v

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.ln_mag > 710:
            return self.sign * math.inf
        return float(self.to_mpf())

    def log10_abs(self):
        return self.ln_mag / _ctx.ln10

    # -- arithmetic (round to nearest) ---------------------------------------
    def __neg__(self) -> LogReal:
        return LogReal(-self.sign, self.ln_mag)

    def __abs__(self) -> LogReal:
        return LogReal(abs(self.sign), self.ln_mag)

    def __add__(self, other) -> LogReal:
        return _add(self, _as_logreal(other), 0)

    __radd__ = __add__

    def __sub__(self, other) -> LogReal:
        return _add(self, -_as_logreal(other), 0)

    def __rsub__(self, other) -> LogReal:
        return _add(_as_logreal(other), -self, 0)

    def __mul__(self, other) -> LogReal:
        return _mul(self, _as_logreal(other), 0)

    __rmul__ = __mul__

    def __truediv__(self, other) -> LogReal:
        return _mul(self, _as_logreal(other).reciprocal(), 0)

    def __rtruediv__(self, other) -> LogReal:
        return _mul(_as_logreal(other), self.reciprocal(), 0)

    def reciprocal(self) -> LogReal:
        if self.sign == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return LogReal(self.sign, -self.ln_mag)

    def __pow__(self, n) -> LogReal:
        return _pow(self, n, 0)

    def sqrt(self) -> LogReal:
        if self.sign < 0:
            raise DomainError("sqrt of a negative LogReal")
        if self.sign == 0:
            return self
        return LogReal(1, self.ln_mag / 2)

    # -- ordering -----------------------------------------------------------
    def _key(self):
        if self.sign == 0:
            return (0, mpf(0))
        return (self.sign, self.sign * self.ln_mag)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogReal):
            try:
                other = LogReal.of(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.sign == other.sign and (self.sign == 0 or self.ln_mag == other.ln_mag)

    def __lt__(self, other) -> bool:
        other = _as_logreal(other)
        return self._key() < other._key()

    def __hash__(self):
        return hash((self.sign, self.ln_mag))

    def __repr__(self) -> str:
        if self.sign == 0:
            return "LogReal(0)"
        s = "+" if self.sign > 0 else "-"
        return f"LogReal({s}exp({_ctx.nstr(self.ln_mag, 20)}))"


def _as_logreal(v) -> LogReal:
    return v if isinstance(v, LogReal) else LogReal.of(v)


def _add(a: LogReal, b: LogReal, rnd: int) -> LogReal:
    if a.sign == 0:
        return b
    if b.sign == 0:
        return a
    if a.ln_mag < b.ln_mag:
        a, b = b, a
    d = b.ln_mag - a.ln_mag
    if a.sign == b.sign:
        tail = _ctx.log1p(_ctx.exp(d))
    else:
        if d == 0:
            return LogReal.zero()
        tail = _ctx.log(-_ctx.expm1(d))
    ln = a.ln_mag + tail
    scale = abs(a.ln_mag) + abs(tail) + 1
    return LogReal(a.sign, _round_ln(a.sign, ln, rnd, scale))


def _mul(a: LogReal, b: LogReal, rnd: int) -> LogReal:
    if a.sign == 0 or b.sign == 0:
        return LogReal.zero()
    sign = a.sign * b.sign
    return LogReal(sign, _round_ln(sign, a.ln_mag + b.ln_mag, rnd))


def _pow(a: LogReal, n, rnd: int) -> LogReal:
    if isinstance(n, int):
        if n == 0:
            return LogReal(1, mpf(0))
        if a.sign == 0:
            if n < 0:
                raise ZeroDivisionError("zero to a negative power")
            return a
        sign = a.sign if n % 2 else 1
        return LogReal(sign, _round_ln(sign, a.ln_mag * n, rnd))
    if a.sign < 0:
        raise DomainError("non-integer power of a negative LogReal")
    if a.sign == 0:
        return a
    return LogReal(1, _round_ln(1, a.ln_mag * _to_mpf(n), rnd))


def log_add(a: LogReal, b: LogReal) -> LogReal:
    """Sum of two log-domain reals via the log-sum-exp identity."""
    return _add(a, b, 0)


def _mpf_mul_dir(x, y, up: bool):
    return _nudge(x * y, up)


@dataclass(frozen=True)
class RigorousBound:
    """Closed enclosure ``[lo, hi]`` of a real, with outward rounding."""

    lo: LogReal
    hi: LogReal
    rounding_certified: bool = True

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError(f"empty enclosure {self.lo!r} > {self.hi!r}")

    # -- construction -------------------------------------------------------
    @classmethod
    def point(cls, x: LogReal) -> RigorousBound:
        return cls(x, x)

    @classmethod
    def of(cls, value) -> RigorousBound:
        """Enclose a number; decimal strings enclose the exact decimal."""
        if isinstance(value, RigorousBound):
            return value
        if isinstance(value, LogReal):
            return cls(value, value)
        if isinstance(value, int) and abs(value) < 2 ** 53:
            v = mpf(value)
        else:
            v = _to_mpf(value)
        return cls.from_mpf(v, v)

    @classmethod
    def from_mpf(cls, lo, hi, certified: bool = True) -> RigorousBound:
        return cls(LogReal.of(lo, -1), LogReal.of(hi, +1), certified)

    @classmethod
    def from_ln(cls, ln) -> RigorousBound:
        """Enclose ``exp(ln)`` where ``ln`` is itself a bound or a number."""
        return RigorousBound.of(ln).exp()

    @classmethod
    def hull(cls, *bounds: RigorousBound) -> RigorousBound:
        bs = [RigorousBound.of(b) for b in bounds]
        return cls(min(b.lo for b in bs), max(b.hi for b in bs),
                   all(b.rounding_certified for b in bs))

    # -- arithmetic ---------------------------------------------------------
    def _cert(self, other) -> bool:
        return self.rounding_certified and other.rounding_certified

    def __neg__(self) -> RigorousBound:
        return RigorousBound(-self.hi, -self.lo, self.rounding_certified)

    def __add__(self, other) -> RigorousBound:
        o = RigorousBound.of(other)
        return RigorousBound(_add(self.lo, o.lo, -1), _add(self.hi, o.hi, +1), self._cert(o))

    __radd__ = __add__

    def __sub__(self, other) -> RigorousBound:
        return self + (-RigorousBound.of(other))

    def __rsub__(self, other) -> RigorousBound:
        return RigorousBound.of(other) + (-self)

    def __mul__(self, other) -> RigorousBound:
        o = RigorousBound.of(other)
        pairs = [(x, y) for x in (self.lo, self.hi) for y in (o.lo, o.hi)]
        lo = min(_mul(x, y, -1) for x, y in pairs)
        hi = max(_mul(x, y, +1) for x, y in pairs)
        return RigorousBound(lo, hi, self._cert(o))

    __rmul__ = __mul__

    def reciprocal(self) -> RigorousBound:
        if self.lo.sign * self.hi.sign <= 0:
            raise DomainError("reciprocal of an enclosure containing zero")
        return RigorousBound(self.hi.reciprocal(), self.lo.reciprocal(), self.rounding_certified)

    def __truediv__(self, other) -> RigorousBound:
        return self * RigorousBound.of(other).reciprocal()

    def __rtruediv__(self, other) -> RigorousBound:
        return RigorousBound.of(other) * self.reciprocal()

    def __pow__(self, n) -> RigorousBound:
        if isinstance(n, int):
            return self._ipow(n)
        return self.pow(RigorousBound.of(n))

    def _ipow(self, n: int) -> RigorousBound:
        if n < 0:
            return self.reciprocal()._ipow(-n)
        if n == 0:
            one = LogReal(1, mpf(0))
            return RigorousBound(one, one, self.rounding_certified)
        if n % 2 == 1:
            return RigorousBound(_pow(self.lo, n, -1), _pow(self.hi, n, +1), self.rounding_certified)
        if self.lo.sign >= 0:
            return RigorousBound(_pow(self.lo, n, -1), _pow(self.hi, n, +1), self.rounding_certified)
        if self.hi.sign <= 0:
            return RigorousBound(_pow(self.hi, n, -1), _pow(self.lo, n, +1), self.rounding_certified)
        big = max(abs(self.lo), abs(self.hi))
        return RigorousBound(LogReal.zero(), _pow(big, n, +1), self.rounding_certified)

    def pow(self, y: RigorousBound) -> RigorousBound:
        """``self ** y`` for a strictly positive base and real exponent."""
        y = RigorousBound.of(y)
        if self.lo.sign <= 0:
            raise DomainError("real power needs a strictly positive base")
        ys = (y.lo.to_mpf(-1), y.hi.to_mpf(+1))
        ls = (self.lo.ln_mag, self.hi.ln_mag)
        lo = min(_mpf_mul_dir(a, b, False) for a in ys for b in ls)
        hi = max(_mpf_mul_dir(a, b, True) for a in ys for b in ls)
        return RigorousBound(LogReal(1, lo), LogReal(1, hi), self._cert(y))

    def sqrt(self) -> RigorousBound:
        if self.lo.sign < 0:
            raise DomainError("sqrt of an enclosure reaching below zero")
        return RigorousBound(self.lo.sqrt(), self.hi.sqrt(), self.rounding_certified)

    def log(self) -> RigorousBound:
        """Natural log of a strictly positive enclosure."""
        if self.lo.sign <= 0:
            raise DomainError("log of a non-positive enclosure")
        return RigorousBound(LogReal.of(self.lo.ln_mag, -1), LogReal.of(self.hi.ln_mag, +1),
                             self.rounding_certified)

    def ln_interval(self):
        """``(ln lo, ln hi)`` as mpf values, for positive enclosures."""
        if self.lo.sign <= 0:
            raise DomainError("ln_interval of a non-positive enclosure")
        return self.lo.ln_mag, self.hi.ln_mag

    def exp(self) -> RigorousBound:
        return RigorousBound(LogReal(1, self.lo.to_mpf(-1)), LogReal(1, self.hi.to_mpf(+1)),
                             self.rounding_certified)

    # -- queries ------------------------------------------------------------
    def is_positive(self) -> bool:
        return self.lo.sign > 0

    def is_negative(self) -> bool:
        return self.hi.sign < 0

    def certainly_lt(self, other) -> bool:
        return self.hi < RigorousBound.of(other).lo

    def certainly_le(self, other) -> bool:
        return self.hi <= RigorousBound.of(other).lo

    def certainly_gt(self, other) -> bool:
        return self.lo > RigorousBound.of(other).hi

    def contains(self, value) -> bool:
        if isinstance(value, RigorousBound):
            return self.lo <= value.lo and value.hi <= self.hi
        x = _as_logreal(value)
        return self.lo <= x <= self.hi

    def mid(self):
        """Approximate midpoint as an mpf (may be huge)."""
        return (self.lo.to_mpf() + self.hi.to_mpf()) / 2

    def __float__(self) -> float:
        return float(_add(self.lo, self.hi, 0) * LogReal.of(0.5))

    def sign(self) -> int:
        if self.is_positive():
            return 1
        if self.is_negative():
            return -1
        return 0

    def relative_width(self):
        """``ln(hi/lo)`` for positive enclosures."""
        lo, hi = self.ln_interval()
        return hi - lo

    def __repr__(self) -> str:
        return f"RigorousBound({self.lo!r}, {self.hi!r})"


def rb(value) -> RigorousBound:
    return RigorousBound.of(value)


def rb_pi() -> RigorousBound:
    p = +_ctx.pi
    return RigorousBound.from_mpf(p, p)


def rb_e() -> RigorousBound:
    return RigorousBound.of(1).exp()


def nstr(x, digits: int = 25) -> str:
    return _ctx.nstr(x, digits)


def ln_factorial(n: int) -> LogReal:
    """``n!`` as a LogReal; its ``ln_mag`` is ``ln(n!)``."""
    if n < 0:
        raise DomainError("factorial of a negative integer")
    if n < 2:
        return LogReal(1, mpf(0))
    return LogReal(1, _ctx.loggamma(n + 1))


def factorial_bound(n: int) -> RigorousBound:
    x = ln_factorial(n)
    return RigorousBound(LogReal(1, _nudge(x.ln_mag, False)), LogReal(1, _nudge(x.ln_mag, True)))


_CIN_SWITCH = 4.0
_CIN_TERMS = 40


def cin(z):
    """Entire cosine integral ``Cin(z) = int_0^z (1 - cos t)/t dt`` for ``z >= 0``.

    Accepts scalars or arrays; the Taylor series is used up to z = 4 and
    ``euler_gamma + ln z - Ci(z)`` beyond.
    """
    za = np.asarray(z, dtype=float)
    if np.any(za < 0):
        raise DomainError("cin needs z >= 0")
    out = np.empty_like(za)
    small = za <= _CIN_SWITCH
    if np.any(small):
        zs = za[small]
        w = zs * zs
        term = w / 2.0  # z^2 / 2!
        acc = term / 2.0
        for k in range(2, _CIN_TERMS):
            term = -term * w / ((2 * k - 1) * (2 * k))
            acc = acc + term / (2 * k)
        out[small] = acc
    big = ~small
    if np.any(big):
        zb = za[big]
        _, ci = special.sici(zb)
        out[big] = np.euler_gamma + np.log(zb) - ci
    return float(out) if out.ndim == 0 else out


def find_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12,
              max_iter: int = 2000) -> float:
    """Bisection on a sign-changing bracket; stops once ``hi - lo <= tol``."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoBracket(f"f({lo})={flo} and f({hi})={fhi} share a sign")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = lo + (hi - lo) / 2
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo + (hi - lo) / 2


Number = Union[int, float, str, Fraction, LogReal, RigorousBound]
