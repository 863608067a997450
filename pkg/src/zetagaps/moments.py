"""Moments of S(t+h) - S(t) and mean-value checks for Dirichlet polynomials."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional, Sequence

import numpy as np

from .constants import a1, a2, eval_C1, eval_moment_error_constants, m0
from .errors import DomainError, KTooLarge, OutOfRange, SupportTooLarge, TableTooSmall
from .primesums import PrimeTable, prime_cos_sum, r_xt, selberg_sine_sum
from .zeros import ZeroList, sigma_xt
from .zeta_engine import count_N, s_from_ordinates, theta_exact

QUAD_POINTS = 15
MAX_SUPPORT = 12
MAX_K = 3


@lru_cache(maxsize=None)
def _gauss(m: int):
    x, w = np.polynomial.legendre.leggauss(m)
    return x, w


@lru_cache(maxsize=None)
def _m0_up() -> float:
    return math.nextafter(float(m0().hi), math.inf)


@lru_cache(maxsize=None)
def _c1_up(k: int) -> float:
    return math.nextafter(float(eval_C1(k).value.hi), math.inf)


# -- Dirichlet polynomials -------------------------------------------------

@dataclass(frozen=True)
class DirichletPoly:
    """f(t) = sum_{n <= X} a_n n^{-it}."""

    coefficients: Mapping[int, complex]
    cutoff: float

    def __post_init__(self):
        bad = [n for n in self.coefficients if n < 1 or n > self.cutoff]
        if bad:
            raise DomainError(f"indices {bad[:3]} outside [1, X]")

    @classmethod
    def from_arrays(cls, ns: Sequence[int], coefs: Sequence[complex], cutoff: Optional[float] = None):
        d: dict[int, complex] = {}
        for n, c in zip(ns, coefs):
            d[int(n)] = d.get(int(n), 0j) + complex(c)
        return cls(d, float(cutoff if cutoff is not None else max(d, default=1)))

    def arrays(self):
        ns = np.array(sorted(self.coefficients), dtype=np.int64)
        cs = np.array([complex(self.coefficients[n]) for n in ns.tolist()], dtype=complex)
        return ns, cs

    def __call__(self, t):
        ns, cs = self.arrays()
        ta = np.asarray(t, dtype=float)
        out = np.exp(-1j * np.multiply.outer(ta, np.log(ns.astype(float)))) @ cs
        return complex(out) if out.ndim == 0 else out

    def scale(self, c: complex) -> DirichletPoly:
        return DirichletPoly({n: c * a for n, a in self.coefficients.items()}, self.cutoff)

    def weighted_norm(self) -> float:
        """sum n |a_n|^2."""
        return math.fsum(n * abs(a) ** 2 for n, a in self.coefficients.items())


def _interval_integral(omega: np.ndarray, T1: float, T2: float) -> np.ndarray:
    """int_{T1}^{T2} exp(i omega t) dt in a form that stays accurate as omega -> 0."""
    L = T2 - T1
    mid = 0.5 * (T1 + T2)
    return L * np.sinc(omega * L / (2 * math.pi)) * np.exp(1j * omega * mid)


def _bilinear_integral(ns, cs, ms, ds, T1: float, T2: float) -> complex:
    """int sum_n c_n n^{-it} * conj(sum_m d_m m^{-it}) dt, termwise in closed form."""
    if len(ns) == 0 or len(ms) == 0:
        return 0j
    omega = np.subtract.outer(np.log(np.asarray(ns, float)), np.log(np.asarray(ms, float)))
    same = np.equal.outer(np.asarray(ns), np.asarray(ms))
    E = _interval_integral(-omega, T1, T2)
    E[same] = T2 - T1
    terms = np.outer(cs, np.conj(ds)) * E
    # numpy's pairwise summation keeps the rounding error at O(log n) ulps
    return complex(np.sum(terms))


@dataclass(frozen=True)
class MVHResult:
    integral: complex
    diagonal: complex
    lhs_dev: float
    rhs: float
    holds: bool


def mvh_check(poly_a: DirichletPoly, poly_b: DirichletPoly, T1: float, T2: float) -> MVHResult:
    """Compare int f conj(g) with (T2 - T1) sum a_n conj(b_n) against 3 pi m0 sqrt(..) sqrt(..)."""
    if not T1 < T2:
        raise DomainError("need T1 < T2")
    na, ca = poly_a.arrays()
    nb, cb = poly_b.arrays()
    integral = _bilinear_integral(na, ca, nb, cb, T1, T2)
    common = np.intersect1d(na, nb)
    da = dict(zip(na.tolist(), ca))
    db = dict(zip(nb.tolist(), cb))
    diag_terms = [da[n] * np.conj(db[n]) for n in common.tolist()]
    diagonal = (T2 - T1) * complex(math.fsum(z.real for z in diag_terms), math.fsum(z.imag for z in diag_terms))
    dev = abs(integral - diagonal)
    rhs = 3 * math.pi * _m0_up() * math.sqrt(poly_a.weighted_norm()) * math.sqrt(poly_b.weighted_norm())
    return MVHResult(integral, diagonal, dev, rhs, dev <= rhs)


# -- imaginary-part moments ------------------------------------------------

def _power_terms(primes: Sequence[int], coefs: Sequence[complex], jmax: int):
    """Coefficients of F^j (j = 0..jmax), F(t) = sum a_p p^{-it}, keyed by the integer product."""
    acc: dict[int, complex] = {1: 1 + 0j}
    out = []
    for j in range(jmax + 1):
        ns = np.array(sorted(acc), dtype=np.int64)
        out.append((ns, np.array([acc[n] for n in ns.tolist()], dtype=complex)))
        if j == jmax:
            break
        nxt: dict[int, complex] = {}
        for n, c in acc.items():
            for p, a in zip(primes, coefs):
                nxt[n * p] = nxt.get(n * p, 0j) + c * a
        acc = nxt
    return out


def imag_power_integral(k: int, coeffs: Mapping[int, complex], T1: float, T2: float) -> float:
    """int_{T1}^{T2} (Im F(t))^{2k} dt by expanding ((F - conj F)/2i)^{2k} termwise.

    The terms F^j conj(F)^{2k-j} and F^{2k-j} conj(F)^j are conjugate, so
    only j <= k is integrated.
    """
    primes = list(coeffs)
    cs = [complex(coeffs[p]) for p in primes]
    powers = _power_terms(primes, cs, 2 * k)
    total = 0.0
    for j in range(k + 1):
        nj, cj = powers[j]
        nm, cm = powers[2 * k - j]
        term = math.comb(2 * k, j) * (-1) ** j * _bilinear_integral(nj, cj, nm, cm, T1, T2).real
        total += term if j == k else 2 * term
    # (1/(2i))^{2k} = (-1)^k / 4^k
    return (-1) ** k * total / 4 ** k


def imag_moment_main(k: int, coeffs: Mapping[int, complex]) -> float:
    """sum over ordered k-tuples of |a_p1 ... a_pk|^2 times the number of distinct permutations."""
    items = [(p, abs(complex(a)) ** 2) for p, a in coeffs.items()]
    total = []
    for combo in itertools.combinations_with_replacement(range(len(items)), k):
        mult = Counter(combo)
        perms = math.factorial(k)
        for m in mult.values():
            perms //= math.factorial(m)
        w = 1.0
        for i in combo:
            w *= items[i][1]
        # each multiset corresponds to `perms` ordered tuples, each weighted by perms
        total.append(perms * perms * w)
    return math.fsum(total)


@dataclass(frozen=True)
class ImagMomentResult:
    k: int
    lhs: float
    main: float
    error_bound: float
    deviation: float
    holds: bool


def imag_moment_check(k: int, coeffs: Mapping[int, complex], T1: float, T2: float) -> ImagMomentResult:
    """Exact integral of (Im sum a_p p^{-it})^{2k} against its diagonal main term."""
    if k < 1:
        raise DomainError("k must be positive")
    if k > MAX_K:
        raise KTooLarge(f"k = {k} exceeds {MAX_K}")
    if len(coeffs) > MAX_SUPPORT:
        raise SupportTooLarge(f"support {len(coeffs)} exceeds {MAX_SUPPORT}")
    if not T1 < T2:
        raise DomainError("need T1 < T2")
    lhs = imag_power_integral(k, coeffs, T1, T2)
    main = (T2 - T1) / 4 ** k * math.comb(2 * k, k) * imag_moment_main(k, coeffs)
    wn = math.fsum(p * abs(complex(a)) ** 2 for p, a in coeffs.items())
    bound = _c1_up(k) * wn ** k
    dev = abs(lhs - main)
    return ImagMomentResult(k, lhs, main, bound, dev, dev <= bound)


# -- moments of S(t+h) - S(t) ----------------------------------------------

@dataclass(frozen=True)
class MomentEstimate:
    n: int
    T: float
    h: float
    value: float
    quad_error: float
    main_term: float
    ratio: float

    def to_dict(self) -> dict:
        r = self.ratio if math.isfinite(self.ratio) else None
        return {"op": "moment_J", "params": {"n": self.n, "T": self.T, "h": self.h},
                "value": self.value, "main_term": self.main_term, "ratio": r,
                "quad_error": self.quad_error}


def moment_main_term(n: int, T: float, h: float) -> float:
    """(2k)!/(2^k pi^{2k} k!) T log^k(2 + h log T) for n = 2k; zero for odd n."""
    if n % 2:
        return 0.0
    k = n // 2
    c = math.factorial(2 * k) / (2 ** k * math.pi ** (2 * k) * math.factorial(k))
    return c * T * math.log(2 + h * math.log(T)) ** k


def _shift_diff(t: np.ndarray, counts: np.ndarray, h: float) -> np.ndarray:
    return counts - (theta_exact(t + h) - theta_exact(t)) / math.pi


def _pieces(T: float, h: float, zl: ZeroList):
    """Partition of [T, 2T] on which S(t+h) - S(t) is smooth and of one sign."""
    g = zl.gammas
    pts = np.concatenate(([T, 2 * T], g[(g > T) & (g < 2 * T)], (g - h)[(g - h > T) & (g - h < 2 * T)]))
    pts = np.unique(pts)
    a, b = pts[:-1], pts[1:]
    mid = 0.5 * (a + b)
    counts = (np.searchsorted(g, mid + h, side="right") - np.searchsorted(g, mid, side="right")).astype(float)
    # sign changes of counts - smooth increment (monotone on each piece)
    da = _shift_diff(a, counts, h)
    db = _shift_diff(b, counts, h)
    cross = np.flatnonzero((da > 0) & (db < 0) | (da < 0) & (db > 0))
    if len(cross):
        lo, hi = a[cross].copy(), b[cross].copy()
        flo = da[cross]
        c = counts[cross]
        for _ in range(60):
            m = 0.5 * (lo + hi)
            fm = _shift_diff(m, c, h)
            same = np.sign(fm) == np.sign(flo)
            lo = np.where(same, m, lo)
            hi = np.where(same, hi, m)
        roots = 0.5 * (lo + hi)
        a = np.concatenate((a, roots))
        b = np.concatenate((b, b[cross]))
        b[cross] = roots
        counts = np.concatenate((counts, counts[cross]))
        order = np.argsort(a, kind="stable")
        a, b, counts = a[order], b[order], counts[order]
    keep = b > a
    return a[keep], b[keep], counts[keep]


def _piece_sums(powers: Sequence[int], a, b, counts, h: float, m: int) -> dict[int, np.ndarray]:
    x, w = _gauss(m)
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b))[:, None] + half[:, None] * x[None, :]
    vals = np.abs(_shift_diff(nodes, counts[:, None], h))
    return {n: (vals ** n @ w) * half for n in powers}


def moments_J(powers: Sequence[int], T: float, h: float, zl: ZeroList,
              quad_points: int = QUAD_POINTS) -> dict[int, MomentEstimate]:
    """J_n(T, h) = int_T^{2T} |S(t+h) - S(t)|^n dt for several n on a shared partition.

    S(t+h) - S(t) is the number of ordinates in (t, t+h] minus the smooth
    increment (theta(t+h) - theta(t))/pi.  Breakpoints are the ordinates,
    the ordinates shifted by -h and the zeros of the difference, so every
    piece carries an analytic integrand and a fixed Gauss rule is used.
    Because all powers share the nodes, inequalities such as Hölder's hold
    for the computed values up to rounding.
    """
    powers = [int(n) for n in powers]
    if any(n < 1 for n in powers):
        raise DomainError("powers must be positive integers")
    if T < 10:
        raise DomainError("T must be at least 10")
    if h < 0 or h > 1:
        raise DomainError("need 0 <= h <= 1")
    if not zl.covers(T, 2 * T + h):
        raise OutOfRange("zero list must cover [T, 2T + h]")
    if h == 0:
        return {n: MomentEstimate(n, T, h, 0.0, 0.0, moment_main_term(n, T, h),
                                  _ratio(0.0, moment_main_term(n, T, h))) for n in powers}
    a, b, counts = _pieces(T, h, zl)
    hi = _piece_sums(powers, a, b, counts, h, quad_points)
    lo = _piece_sums(powers, a, b, counts, h, max(2, quad_points // 2))
    out = {}
    for n in powers:
        v = math.fsum(hi[n])
        err = math.fsum(np.abs(hi[n] - lo[n]))
        mt = moment_main_term(n, T, h)
        out[n] = MomentEstimate(n, T, h, v, err, mt, _ratio(v, mt))
    return out


def _ratio(v: float, mt: float) -> float:
    return v / mt if mt > 0 else math.nan


def moment_J(n: int, T: float, h: float, zl: ZeroList, quad_points: int = QUAD_POINTS) -> MomentEstimate:
    return moments_J([n], T, h, zl, quad_points)[n]


def signed_shift_integral(T: float, h: float, zl: ZeroList) -> float:
    """int_T^{2T} (S(t+h) - S(t)) dt, without absolute value."""
    if h == 0:
        return 0.0
    a, b, counts = _pieces(T, h, zl)
    x, w = _gauss(QUAD_POINTS)
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b))[:, None] + half[:, None] * x[None, :]
    return math.fsum((_shift_diff(nodes, counts[:, None], h) @ w) * half)


def holder_chain(j1: float, j2: float, j4: float) -> bool:
    """J1 >= sqrt(J2^3 / J4), in the rearranged form J2^3 <= J1^2 J4 with rounding slack."""
    return j2 ** 3 <= j1 * j1 * j4 * (1 + 1e-12)


# -- prime polynomials P_k, Q_k --------------------------------------------

def _primes_for(T: float, eps: float, k: int, table: PrimeTable) -> np.ndarray:
    X = T ** (eps / k)
    if X > table.limit:
        raise TableTooSmall(f"need primes up to T^(eps/k) = {X:.6g}")
    return table.upto(X).astype(float)


def p_coefficients(h: float, ps: np.ndarray) -> np.ndarray:
    """a_p = p^{-1/2}(p^{-ih} - 1)/pi, so that P(t) = Im sum a_p p^{-it}."""
    return (np.exp(-1j * h * np.log(ps)) - 1) / (math.pi * np.sqrt(ps))


def dirichlet_P(k: int, t, h: float, T: float, eps: float, table: PrimeTable):
    """P_k(t) = (1/pi) sum_{p <= T^{eps/k}} Im{p^{-1/2}(p^{-ih} - 1) p^{-it}}."""
    ps = _primes_for(T, eps, k, table)
    ta = np.asarray(t, dtype=float)
    lp = np.log(ps)
    a = p_coefficients(h, ps)
    # Im{a e^{-i t log p}} = a.imag cos(t log p) - a.real sin(t log p)
    ph = np.multiply.outer(ta, lp)
    out = np.cos(ph) @ a.imag - np.sin(ph) @ a.real
    return float(out) if out.ndim == 0 else out


def prime_sine_part(t, ps: np.ndarray):
    ta = np.asarray(t, dtype=float)
    out = np.sin(np.multiply.outer(ta, np.log(ps))) @ (1 / np.sqrt(ps)) / math.pi
    return float(out) if out.ndim == 0 else out


def _S(t, zl: Optional[ZeroList]):
    ta = np.asarray(t, dtype=float)
    if zl is not None and zl.t_min <= 10 and np.all(ta <= zl.t_max):
        return s_from_ordinates(ta, zl.gammas)
    if ta.ndim == 0:
        return count_N(float(ta)).implied_S
    return np.array([count_N(float(x)).implied_S for x in ta])


def dirichlet_Q(k: int, t, T: float, eps: float, table: PrimeTable, zl: Optional[ZeroList] = None):
    """Q_k(t) = S(t) + (1/pi) sum_{p <= T^{eps/k}} sin(t log p)/sqrt(p)."""
    ps = _primes_for(T, eps, k, table)
    return _S(t, zl) + prime_sine_part(t, ps)


# -- Selberg approximation residual ----------------------------------------

@dataclass(frozen=True)
class SelbergResidual:
    t: float
    x: float
    sigma: float
    residual: float
    bound: float
    log_x0: float
    hypothesis_ok: bool


def selberg_residual(t: float, x: float, table: PrimeTable, zl: ZeroList,
                     log_x0: Optional[float] = None) -> SelbergResidual:
    """|S(t) + (1/pi) sum Lambda_x(n) sin(t log n)/(n^sigma log n)| and the corresponding bound.

    The bound is (sigma - 1/2)(a1 |r(x, t)| + a2(x0) log t).  ``log_x0``
    defaults to log x; ``hypothesis_ok`` reports whether e^16 <= x0 <= x <= t^2.
    """
    lx = math.log(x)
    lx0 = lx if log_x0 is None else float(log_x0)
    sigma = sigma_xt(x, t, zl)
    s = float(_S(t, zl))
    tail = selberg_sine_sum(x, t, sigma, table)
    res = abs(s + tail / math.pi)
    r = abs(r_xt(x, t, sigma, table))
    A1 = float(a1().hi)
    A2 = float(a2(lx0).hi)
    bound = (sigma - 0.5) * (A1 * r + A2 * math.log(abs(t)))
    ok = 16 <= lx0 <= lx and x <= t * t
    return SelbergResidual(t, x, sigma, res, bound, lx0, ok)


# -- band report -----------------------------------------------------------

@dataclass(frozen=True)
class BandReport:
    T: float
    h: float
    alpha: float
    eps: float
    J2: float
    J4: float
    main2: float
    main4: float
    dev2: float
    dev4: float
    ratio2: float
    ratio4: float
    prime_prediction2: float
    ln_C2: Optional[float]
    ln_C3: Optional[float]

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        for key, v in d.items():
            if isinstance(v, float) and not math.isfinite(v):
                d[key] = None
        d["op"] = "moment_band_check"
        return d


def moment_band_check(T: float, h: float, eps: float, alpha: float, zl: ZeroList,
                    table: PrimeTable, with_constants: bool = False) -> BandReport:
    """J2 and J4 against (T/pi^2) log(alpha + h log T) and (3T/pi^4) log^2(alpha + h log T).

    Exploratory: the hypotheses of the explicit moment estimates need
    astronomically large T, so nothing is asserted here.
    """
    js = moments_J([2, 4], T, h, zl)
    L = math.log(alpha + h * math.log(T))
    m2 = T / math.pi ** 2 * L
    m4 = 3 * T / math.pi ** 4 * L * L
    X = max(2.0, T ** eps)
    try:
        pp = T / math.pi ** 2 * prime_cos_sum(X, h, table) if X <= table.limit else math.nan
    except TableTooSmall:  # pragma: no cover
        pp = math.nan
    ln_c2 = ln_c3 = None
    if with_constants:
        mc = eval_moment_error_constants(eps, alpha, h * math.log(T))
        ln_c2 = float(mc.C2.hi.ln_mag) if mc.C2.hi.sign > 0 else None
        ln_c3 = float(mc.C3.hi.ln_mag) if mc.C3.hi.sign > 0 else None
    J2, J4 = js[2].value, js[4].value
    return BandReport(T, h, alpha, eps, J2, J4, m2, m4, abs(J2 - m2), abs(J4 - m4),
                      _ratio(J2, m2), _ratio(J4, m4), pp, ln_c2, ln_c3)
