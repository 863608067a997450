"""Zeta on the critical line: theta, Hardy Z, N(t), S(t) and S1(T).

Z is evaluated with the Riemann-Siegel formula (five correction terms) for
t >= 100 and through an Euler-Maclaurin evaluation of zeta below that.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy import integrate, special

from .errors import DomainError, TooCloseToZero

T_MIN = 10.0
T_MAX = 1e7
RS_SWITCH = 100.0
EXCLUSION = 1e-6
ARG_TRACKING = "ARG_TRACKING"
COUNT_MINUS_MAIN = "COUNT_MINUS_MAIN"

_TWO_PI = 2 * math.pi


# -- theta -----------------------------------------------------------------

def rs_theta(t):
    """Asymptotic Riemann-Siegel theta, accurate to ~1e-12 for t >= 10."""
    ta = np.asarray(t, dtype=float)
    if np.any(ta < T_MIN):
        raise DomainError("rs_theta needs t >= 10")
    r = 1.0 / ta
    r2 = r * r
    tail = r * (1 / 48 + r2 * (7 / 5760 + r2 * (31 / 80640 + r2 * (127 / 430080 + r2 * 511 / 1216512))))
    out = ta / 2 * np.log(ta / _TWO_PI) - ta / 2 - math.pi / 8 + tail
    return float(out) if out.ndim == 0 else out


def theta_exact(t):
    """theta(t) = Im log Gamma(1/4 + i t/2) - (t/2) log pi, valid for all real t."""
    ta = np.asarray(t, dtype=float)
    out = special.loggamma(0.25 + 0.5j * ta).imag - 0.5 * ta * math.log(math.pi)
    return float(out) if out.ndim == 0 else out


def main_term(t):
    """Smooth part of N(t): (t/2pi) log t - ((1 + log 2pi)/2pi) t + 7/8."""
    ta = np.asarray(t, dtype=float)
    out = ta / _TWO_PI * np.log(ta) - (1 + math.log(_TWO_PI)) / _TWO_PI * ta + 7 / 8
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class MainTerm:
    t: float
    value: float

    @classmethod
    def at(cls, t: float) -> MainTerm:
        return cls(t, main_term(t))


# -- Euler-Maclaurin zeta --------------------------------------------------

_EM_TERMS = 40
_B2K = special.bernoulli(2 * _EM_TERMS)[2::2]


def zeta_em(s, N: int | None = None):
    """zeta(s) for complex s (vectorized) by Euler-Maclaurin summation.

    N defaults to |Im s|/pi + 20, which makes the correction series decay
    geometrically with ratio about 1/2.
    """
    sa = np.atleast_1d(np.asarray(s, dtype=complex))
    if N is None:
        N = int(np.abs(sa).max() / math.pi) + 20
    n = np.arange(1, N, dtype=float)
    logn = np.log(n)
    out = np.empty(sa.shape, dtype=complex)
    flat_s = sa.ravel()
    res = np.empty(flat_s.shape, dtype=complex)
    step = max(1, (1 << 20) // max(N, 1))
    lN = math.log(N)
    for i in range(0, len(flat_s), step):
        s_ = flat_s[i:i + step]
        head = np.exp(-np.outer(s_, logn)).sum(axis=1)
        Ns = np.exp(-s_ * lN)
        acc = head + N * Ns / (s_ - 1) + Ns / 2
        P = s_ / 2 * Ns / N
        for k in range(1, _EM_TERMS + 1):
            term = _B2K[k - 1] * P
            acc = acc + term
            if np.all(np.abs(term) < 1e-17 * np.abs(acc)):
                break
            P = P * (s_ + 2 * k - 1) * (s_ + 2 * k) / ((2 * k + 1) * (2 * k + 2) * N * N)
        res[i:i + step] = acc
    out[...] = res.reshape(sa.shape)
    return out if np.ndim(s) else complex(out[0])


# -- Riemann-Siegel --------------------------------------------------------

_PSI_DEGREE = 90


@lru_cache(maxsize=1)
def _rs_corrections():
    """Polynomials C0..C4 in z = p - 1/2 from the Taylor series of
    Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p)."""
    ctx = mpmath.MPContext()
    ctx.dps = 160
    deg = _PSI_DEGREE
    pi = ctx.pi
    # around p = 1/2 the numerator is cos(2 pi z^2 - 5 pi / 8) and the denominator -cos(2 pi z)
    num = [ctx.mpf(0)] * (deg + 1)
    for j in range(deg // 2 + 1):
        c = (-1) ** (j // 2) * (2 * pi) ** j / ctx.factorial(j)
        if j % 2 == 0:
            num[2 * j] += ctx.cos(5 * pi / 8) * c
        else:
            num[2 * j] += ctx.sin(5 * pi / 8) * c
    den = [ctx.mpf(0)] * (deg + 1)
    for j in range(0, deg + 1, 2):
        den[j] = -((-1) ** (j // 2)) * (2 * pi) ** j / ctx.factorial(j)
    q = [ctx.mpf(0)] * (deg + 1)
    for n in range(deg + 1):
        acc = num[n] - ctx.fsum(q[i] * den[n - i] for i in range(n))
        q[n] = acc / den[0]
    P = np.polynomial.Polynomial([float(v) for v in q])
    d = lambda k: P.deriv(k) if k else P
    PI = math.pi
    return (
        d(0),
        -d(3) / (96 * PI ** 2),
        d(6) / (18432 * PI ** 4) + d(2) / (64 * PI ** 2),
        -d(9) / (5308416 * PI ** 6) - d(5) / (3840 * PI ** 4) - d(1) / (64 * PI ** 2),
        d(12) / (2038431744 * PI ** 8) + 11 * d(8) / (5898240 * PI ** 6)
        + 19 * d(4) / (24576 * PI ** 4) + d(0) / (128 * PI ** 2),
    )


def _rs_Z(t: np.ndarray) -> np.ndarray:
    tau = np.sqrt(t / _TWO_PI)
    N = np.floor(tau).astype(np.int64)
    z = tau - N - 0.5
    th = rs_theta(t)
    out = np.empty_like(t)
    nmax = int(N.max())
    n = np.arange(1, nmax + 1, dtype=float)
    logn = np.log(n)
    rsq = 1.0 / np.sqrt(n)
    step = max(1, (1 << 21) // nmax)
    for i in range(0, len(t), step):
        sl = slice(i, i + step)
        ph = th[sl, None] - t[sl, None] * logn[None, :]
        w = np.where(n[None, :] <= N[sl, None], rsq[None, :], 0.0)
        out[sl] = 2 * (np.cos(ph) * w).sum(axis=1)
    C = _rs_corrections()
    inv = 1.0 / tau
    corr = C[4](z)
    for k in (3, 2, 1, 0):
        corr = C[k](z) + inv * corr
    sign = np.where(N % 2 == 1, 1.0, -1.0)
    return out + sign * np.sqrt(inv) * corr


def _em_Z(t: np.ndarray) -> np.ndarray:
    z = zeta_em(0.5 + 1j * t)
    return (np.exp(1j * theta_exact(t)) * z).real


def _Z_unchecked(t) -> np.ndarray:
    ta = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(ta)
    lo = ta < RS_SWITCH
    if np.any(lo):
        out[lo] = _em_Z(ta[lo])
    if np.any(~lo):
        out[~lo] = _rs_Z(ta[~lo])
    return out


def hardy_Z(t):
    """Hardy's Z(t) = exp(i theta(t)) zeta(1/2 + i t) for 10 <= t <= 1e7 (vectorized)."""
    ta = np.asarray(t, dtype=float)
    if np.any(ta < T_MIN) or np.any(ta > T_MAX):
        raise DomainError("hardy_Z is provided on 10 <= t <= 1e7")
    out = _Z_unchecked(ta)
    return float(out[0]) if ta.ndim == 0 else out


# -- counting --------------------------------------------------------------

def grid_step(t: float) -> float:
    return 0.2 / math.log(max(t, math.e))


def scan_sign_changes(a: float, b: float, refine: int = 0):
    """Grid over [a, b] with step 0.2/log b halved ``refine`` times; returns
    the grid, Z on it and the indices i with a sign change on [g_i, g_{i+1}]."""
    h = grid_step(b) / (2 ** refine)
    m = max(2, int(math.ceil((b - a) / h)) + 1)
    g = np.linspace(a, b, m)
    z = _Z_unchecked(g)
    idx = np.flatnonzero(np.signbit(z[:-1]) != np.signbit(z[1:]))
    return g, z, idx


def check_not_near_zero(t: float, radius: float = EXCLUSION) -> None:
    z = _Z_unchecked(np.array([t - radius, t, t + radius]))
    if np.signbit(z[0]) != np.signbit(z[2]) or z[1] == 0.0:
        raise TooCloseToZero(f"t = {t} lies within {radius} of a zero ordinate")


@dataclass(frozen=True)
class CountResult:
    count: int
    certified: bool
    implied_S: float


def _stable_count(a: float, b: float) -> tuple[int, bool]:
    """Sign changes on [a, b] at step, step/2, step/4; stable when all three agree."""
    g, z, _ = scan_sign_changes(a, b, refine=2)
    counts = []
    for stride in (4, 2, 1):
        zz = z[::stride]
        if (len(z) - 1) % stride:
            zz = np.append(zz, z[-1])
        counts.append(int(np.count_nonzero(np.signbit(zz[:-1]) != np.signbit(zz[1:]))))
    return counts[-1], counts[0] == counts[1] == counts[2]


def count_N(t: float, zl=None) -> CountResult:
    """Number of zero ordinates in (0, t].

    With a ZeroList covering t the count is read off it; otherwise Z is scanned
    from 10 (no ordinate lies below 14).  Certified when the scan is stable
    under two halvings and the implied S(t) lies in [-1.1, 1.1], or when it
    matches the independent argument-tracking value of S(t).
    """
    if t < T_MIN:
        raise DomainError("count_N needs t >= 10")
    check_not_near_zero(t)
    if zl is not None and zl.t_min <= T_MIN + 1e-12 and zl.t_max >= t:
        count = int(np.searchsorted(zl.gammas, t, side="right"))
        stable = zl.count_certified
    else:
        count, stable = _stable_count(T_MIN, t)
    implied = count - theta_exact(t) / math.pi - 1
    ok = abs(implied) <= 1.1
    if not ok:
        ok = abs(implied - s_arg(t)) < 0.5
    return CountResult(count, bool(stable and ok), float(implied))


# -- S(t) ------------------------------------------------------------------

@dataclass(frozen=True)
class SFunSample:
    t: float
    s_value: float
    method: str
    est_error: float


def _arg_increment(zvals: np.ndarray) -> float:
    return float(np.angle(zvals[1:] / zvals[:-1]).sum())


def s_arg(t: float, max_rounds: int = 12) -> float:
    """S(t) by continuous variation of arg zeta along 2 -> 2 + it -> 1/2 + it.

    On the vertical segment Re zeta > 0, so its principal argument is the
    continuous one; the horizontal segment is refined until consecutive
    argument steps stay below pi/4.
    """
    sig = np.linspace(2.0, 0.5, 65)
    vals = zeta_em(sig + 1j * t)
    for _ in range(max_rounds):
        steps = np.abs(np.angle(vals[1:] / vals[:-1]))
        bad = np.flatnonzero(steps > math.pi / 4)
        if len(bad) == 0:
            break
        mids = 0.5 * (sig[bad] + sig[bad + 1])
        mvals = zeta_em(mids + 1j * t)
        sig = np.insert(sig, bad + 1, mids)
        vals = np.insert(vals, bad + 1, mvals)
    arg0 = float(np.angle(vals[0]))
    return (arg0 + _arg_increment(vals)) / math.pi


def s_of_t(t: float, method: str = COUNT_MINUS_MAIN, zl=None) -> SFunSample:
    """S(t) = (1/pi) arg zeta(1/2 + it).

    COUNT_MINUS_MAIN uses the exact identity N(t) = theta(t)/pi + 1 + S(t),
    so the usual O(1/t) remainder of the smooth term is carried by theta.
    ARG_TRACKING follows the argument along the standard path.
    """
    if t < T_MIN:
        raise DomainError("s_of_t needs t >= 10")
    check_not_near_zero(t)
    if method == ARG_TRACKING:
        return SFunSample(t, s_arg(t), ARG_TRACKING, 1e-8)
    if method != COUNT_MINUS_MAIN:
        raise ValueError(f"unknown method {method!r}")
    c = count_N(t, zl)
    return SFunSample(t, c.implied_S, COUNT_MINUS_MAIN, 1e-10 + 1e-15 * t * math.log(t))


def s_from_ordinates(t, gammas: np.ndarray):
    """Vectorized S(t) = #{gamma <= t} - theta(t)/pi - 1 given sorted ordinates."""
    ta = np.asarray(t, dtype=float)
    n = np.searchsorted(gammas, ta, side="right")
    out = n - theta_exact(ta) / math.pi - 1
    return float(out) if out.ndim == 0 else out


def theta_integral(a: float, b: float) -> float:
    """int_a^b theta(t) dt by adaptive quadrature."""
    if b <= a:
        return 0.0
    pieces = np.linspace(a, b, max(2, int((b - a) / 50) + 2))
    return math.fsum(integrate.quad(theta_exact, lo, hi, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
                     for lo, hi in zip(pieces[:-1], pieces[1:]))


def s1_between(a: float, b: float, gammas: np.ndarray) -> float:
    """int_a^b S(t) dt using the exact jump structure of N(t)."""
    g = np.asarray(gammas, dtype=float)
    inside = g[(g > a) & (g <= b)]
    n_a = int(np.searchsorted(g, a, side="right"))
    jumps = n_a * (b - a) + math.fsum(b - inside)
    return jumps - theta_integral(a, b) / math.pi - (b - a)


def s1_of_T(T: float, zl=None) -> float:
    """S1(T) = int_0^T S(t) dt; ordinates up to T come from ``zl`` or a fresh scan."""
    if T <= 0:
        raise DomainError("T must be positive")
    if zl is None:
        from .zeros import isolate_zeros
        zl = isolate_zeros(T_MIN, max(T, T_MIN + 1.0))
    elif zl.t_max < T or zl.t_min > 14.0:
        from .errors import OutOfRange
        raise OutOfRange("zero list must cover (0, T]")
    return s1_between(0.0, T, zl.gammas)
