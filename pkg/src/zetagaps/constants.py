"""Explicit constants of the gap and moment pipeline, as outward-rounded enclosures.

Every quantity is rebuilt from its defining formula with RigorousBound
arithmetic.  Parameters that are astronomically large (x0 = e^20000,
log(2 pi M) = e^30.76, ...) are passed through their logarithms.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from .errors import DomainError
from .numerics import (LogReal, RigorousBound, factorial_bound, find_root, mpf, nstr, rb,
                       rb_e, rb_pi)

WITHIN = "WITHIN_PUBLISHED_BOUND"
EXCEEDS = "EXCEEDS"
NO_PUBLISHED = "NO_PUBLISHED_VALUE"

EPS_MAX = Fraction(1, 88)
LOG_X0_MIN = 16
LOG_X0_DEFAULT = 20000
LOG_2T0 = 1408            # T0 = e^1408 / 2
LOGLOG_2PI_M = "30.76"
LN_M1, LN_M2, LN_M3 = Fraction("4.3"), Fraction("22.49"), Fraction("58.87")
LN_KOROLEV_EXP = "99.8"
LN_OMEGA0 = "12.8471"


def _frac(v) -> Optional[Fraction]:
    """Exact rational view of a plain parameter, for domain checks."""
    if isinstance(v, (RigorousBound, LogReal)):
        return None
    try:
        return Fraction(v)
    except (TypeError, ValueError):
        return None


def _m(v):
    f = _frac(v)
    if f is not None:
        return mpf(f.numerator) / f.denominator
    return None


def _upper(v):
    """Smallest plausible value of v; domain checks reject only values certainly too big."""
    m = _m(v)
    return m if m is not None else RigorousBound.of(v).lo.to_mpf(-1)


def _lower(v):
    """Largest plausible value of v; domain checks reject only values certainly too small."""
    m = _m(v)
    return m if m is not None else RigorousBound.of(v).hi.to_mpf(+1)


def _log_arg(x=None, log_x=None) -> RigorousBound:
    """log x as a bound, given either x (any numeric form) or log x directly."""
    if log_x is not None:
        return rb(log_x)
    if x is None:
        raise TypeError("need x or its logarithm")
    return rb(x).log()


@lru_cache(maxsize=None)
def _basic():
    pi = rb_pi()
    e = rb_e()
    return pi, e, rb(2).log(), rb(13).sqrt()


# -- base constants --------------------------------------------------------

def a0() -> RigorousBound:
    return rb("1.5453")


def a1() -> RigorousBound:
    pi, e, _, _ = _basic()
    return 13 + 26 / (10 * pi) + 13 / (3 * pi * e)


def a2(log_x0) -> RigorousBound:
    pi, e, _, _ = _basic()
    head = rb(13) / 2 + 18 / (10 * pi) + 13 / (6 * pi * e)
    return head + 2 / rb(log_x0) * (52 + 124 / (10 * pi) + 52 / (3 * pi * e))


def a3(log_x0) -> RigorousBound:
    pi, _, _, _ = _basic()
    A1 = a1()
    return 3 * pi * A1 / 2 + rb(139) / 75 + 62 * pi * A1 / (75 * rb(log_x0))


def a4(log_x0, eps, k: int) -> RigorousBound:
    pi, _, ln2, _ = _basic()
    lx = rb(log_x0)
    return 1 + rb(eps) / k * (ln2 / lx + a3(lx) / (pi * a2(lx)))


def m0() -> RigorousBound:
    return (1 + rb(2) / 3 * (rb(6) / 5).sqrt()).sqrt()


def L0() -> RigorousBound:
    return rb("642.86")


def K_korolev() -> RigorousBound:
    pi, _, _, _ = _basic()
    return 8 * pi * pi * RigorousBound.from_ln(LN_KOROLEV_EXP)


def omega0() -> RigorousBound:
    return RigorousBound.from_ln(LN_OMEGA0)


@dataclass(frozen=True)
class BaseConstants:
    a0: RigorousBound
    a1: RigorousBound
    a2: RigorousBound
    a3: RigorousBound
    a4: RigorousBound
    m0: RigorousBound
    L0: RigorousBound
    K: RigorousBound
    omega0: RigorousBound


def base_constants(log_x0=LOG_X0_DEFAULT, eps=EPS_MAX, k: int = 1) -> BaseConstants:
    return BaseConstants(a0(), a1(), a2(log_x0), a3(log_x0), a4(log_x0, eps, k), m0(), L0(),
                         K_korolev(), omega0())


# -- R-tilde, C-hat, C, C' ---------------------------------------------------

def _check_params(eps, k: int, log_x0):
    if k < 1 or int(k) != k:
        raise DomainError("k must be a positive integer")
    if _lower(eps) <= 0 or _upper(eps) > _m(EPS_MAX):
        raise DomainError(f"eps must lie in (0, 1/88], got {eps}")
    if _lower(log_x0) < LOG_X0_MIN:
        raise DomainError("x0 must be at least e^16")


def _resolve_log_x0(x0, log_x0):
    if log_x0 is None and x0 is None:
        return rb(LOG_X0_DEFAULT)
    return _log_arg(x0, log_x0)


def eval_Rtilde(eps, k: int, x0=None, L=None, *, log_x0=None):
    """The four remainder functions R~1..R~4 at (eps, k, x0) with density constant L.

    Pass ``log_x0`` (e.g. 20000) rather than x0 when x0 overflows floats.
    """
    lx = _resolve_log_x0(x0, log_x0)
    _check_params(eps, k, lx)
    L = L0() if L is None else rb(L)
    if _lower(L) < 0:
        raise DomainError("L must be nonnegative")
    pi, e, _, sqrt13 = _basic()
    ep = rb(eps)
    A2, A4 = a2(lx), a4(lx, ep, k)
    A1 = a1()
    pref = 8 * a0() * L / ep
    kk = rb(k)

    def tail(c, m):
        return pref * (8 * ep / c) ** (m * k) * factorial_bound(m * k) / kk ** (m * k - 1)

    den = A2 * A4 * kk.sqrt()
    r1 = tail(1, 2) + (3 * ep / (2 * pi * A2 * A4 * (2 * kk).sqrt())) ** (2 * k) * (
        13 + rb(18) ** (-k))
    r2 = sqrt13 * ((12 * e) ** 2 * A1 * ep / den) ** (2 * k) * (1 + tail(e, 8)).sqrt()
    r3 = sqrt13 * (24 * e * e * ep / (pi * den)) ** (2 * k) * (1 + tail(e * e, 4)).sqrt()
    r4 = sqrt13 * (6 * A1 * ep / den) ** (2 * k) * (1 + tail(1, 4)).sqrt()
    return r1, r2, r3, r4


def leading_C_hat(eps2, k: int, x0=None, *, log_x0=None) -> RigorousBound:
    """(1/6)(12 a2 a4 k / eps2)^(2k), the k -> infinity asymptote of C-hat."""
    lx = _resolve_log_x0(x0, log_x0)
    e2 = rb(eps2)
    return (12 * a2(lx) * a4(lx, e2, k) * k / e2) ** (2 * k) / 6


def eval_C_hat(eps1, eps2, k: int, x0=None, L=None, *, log_x0=None) -> RigorousBound:
    lx = _resolve_log_x0(x0, log_x0)
    if _lower(eps2) <= 0:
        raise DomainError("eps2 must be positive")
    R = eval_Rtilde(eps1, k, L=L, log_x0=lx)
    return (1 + R[0] + R[1] + R[2] + R[3]) * leading_C_hat(eps2, k, log_x0=lx)


def eval_C(eps, k: int, x0=None, L=None, *, log_x0=None) -> RigorousBound:
    return eval_C_hat(eps, eps, k, x0, L, log_x0=log_x0)


def c_prime_correction(eps, k: int, x0=None, *, log_x0=None) -> RigorousBound:
    """x0^(-k/eps), the size of the correction separating C' from C."""
    lx = _resolve_log_x0(x0, log_x0)
    return (-(k * lx / rb(eps))).exp()


def eval_C_prime(eps, k: int, x0=None, L=None, *, log_x0=None) -> RigorousBound:
    lx = _resolve_log_x0(x0, log_x0)
    ep = rb(eps)
    corr = c_prime_correction(ep, k, log_x0=lx)
    eps2 = ep / (1 + ep * corr / (k * lx))
    return (1 + corr) * eval_C_hat(ep, eps2, k, L=L, log_x0=lx)


# -- lemma-level constants -------------------------------------------------

def eval_calC(x=None, T=None, xi=1, nu: int = 1, L=None, *, log_x=None, log_T=None) -> RigorousBound:
    """2^nu xi^(2/log x) + L a0 2^(4 nu + 3) nu! (log x/log T)^nu (log T/log x)."""
    if nu < 1 or int(nu) != nu:
        raise DomainError("nu must be a positive integer")
    lx = _log_arg(x, log_x)
    lT = _log_arg(T, log_T)
    pi, _, ln2, _ = _basic()
    if _lower(lx) < ln2.lo.to_mpf(-1) or _lower(lT) < ln2.lo.to_mpf(-1):
        raise DomainError("x and T must be at least 2")
    if _lower(xi) < 1:
        raise DomainError("xi must be at least 1")
    L = L0() if L is None else rb(L)
    first = rb(2) ** nu * rb(xi).pow(2 / lx)
    second = L * a0() * rb(2) ** (4 * nu + 3) * factorial_bound(nu) * (lx / lT) ** nu * (lT / lx)
    return first + second


@dataclass(frozen=True)
class C1Result:
    k: int
    value: RigorousBound
    cheap_bound: RigorousBound
    holds: bool


def eval_C1(k: int) -> C1Result:
    """C1(k) = (3 pi m0 / 4^k) sum_m binom(2k, m) sqrt(m! (2k-m)!), with the bound 6 pi m0 k^k."""
    if k < 1:
        raise DomainError("k must be positive")
    pi, _, _, _ = _basic()
    from math import comb
    total = rb(0)
    for m in range(2 * k + 1):
        total = total + comb(2 * k, m) * (factorial_bound(m) * factorial_bound(2 * k - m)).sqrt()
    value = 3 * pi * m0() / rb(4) ** k * total
    cheap = 6 * pi * m0() * rb(k) ** k
    return C1Result(k, value, cheap, value.certainly_le(cheap))


def eval_A(a, X=None, *, log_X=None) -> RigorousBound:
    """|log a| + 13.88 + log(1 + a/log 2) + 3/log^2 X."""
    _, _, ln2, _ = _basic()
    if _lower(a) <= 0 or _upper(a) > _m(Fraction(7, 10)):
        raise DomainError("a must lie in (0, 7/10]")
    lX = _log_arg(X, log_X)
    if _lower(lX) < ln2.lo.to_mpf(-1):
        raise DomainError("X must be at least 2")
    ra = rb(a)
    return -ra.log() + rb("13.88") + (1 + ra / ln2).log() + 3 / (lX * lX)


@dataclass(frozen=True)
class MomentErrorConstants:
    D1: RigorousBound
    D2: RigorousBound
    E1: RigorousBound
    E2: RigorousBound
    F1: RigorousBound
    F2: RigorousBound
    C2: RigorousBound
    C3: RigorousBound
    ell: RigorousBound


def default_log_T1(eps, log_x0=LOG_X0_DEFAULT) -> RigorousBound:
    """log of max{x0^(6/eps), 2 T0}."""
    a = 6 * rb(log_x0) / rb(eps)
    b = rb(LOG_2T0)
    return RigorousBound(max(a.lo, b.lo), max(a.hi, b.hi))


def eval_moment_error_constants(eps, alpha, h_log_T=None, *, log_x0=LOG_X0_DEFAULT, log_T1=None,
                                log_T=None, h=None, ell=None) -> MomentErrorConstants:
    """Constants D1, D2, E1, E2, F1, F2, C2, C3 of the J2/J4 comparison.

    The T-dependence enters only through ell = log(alpha + h log T); give
    ``h_log_T`` or ``ell`` (an enclosure, as used by the M2 gate).
    """
    if _lower(eps) <= 0 or _upper(eps) > _m(Fraction(3, 88)):
        raise DomainError("eps must lie in (0, 3/88]")
    if _lower(alpha) < 1 or _upper(alpha) * _upper(eps) > _m(Fraction(7, 10)):
        raise DomainError("alpha must lie in [1, 7/(10 eps)]")
    if h is not None and (_lower(h) <= 0 or _upper(h) > 1):
        raise DomainError("h must lie in (0, 1]")
    if _lower(log_x0) < LOG_X0_MIN:
        raise DomainError("x0 must be at least e^16")
    pi, _, _, _ = _basic()
    ep = rb(eps)
    lT1 = default_log_T1(ep, log_x0) if log_T1 is None else rb(log_T1)
    if lT1.certainly_lt(default_log_T1(ep, log_x0)):
        raise DomainError("T1 must be at least max{x0^(6/eps), 2 T0}")
    if log_T is not None and _lower(log_T) < _upper(lT1):
        raise DomainError("T must be at least T1")
    if ell is None:
        if h_log_T is None:
            raise TypeError("need h_log_T or ell")
        ell = (rb(alpha) + rb(h_log_T)).log()
    ell = rb(ell)
    if not ell.is_positive():
        raise DomainError("log(alpha + h log T) must be positive")
    al = rb(alpha)
    pi2, pi4 = pi * pi, pi ** 4
    decay = (-(1 - ep) * lT1).exp()          # T1^-(1-eps)
    D1 = (-ep.log() + eval_A(al * ep, log_X=ep * lT1) + 4 * eval_C1(1).value * decay) / pi2
    Ah = eval_A(al * ep / 2, log_X=ep / 2 * lT1)
    D2 = 6 / pi4 * (Ah - (ep / 2).log()) + 3 / (pi4 * ell) * (
        Ah * Ah + 3 * pi4 / 160 + 16 * eval_C1(2).value / 3 * decay)
    e3 = ep / 3
    E2 = 2 * (eval_C(e3, 1, log_x0=log_x0) + eval_C_prime(e3, 1, log_x0=log_x0))
    F2 = 8 * (eval_C(e3, 2, log_x0=log_x0) + eval_C_prime(e3, 2, log_x0=log_x0))
    E1 = 1 / pi2 + D1 / ell
    F1 = 3 / pi4 + D2 / ell
    s = ell.sqrt()
    C2 = 2 * (E1 * E2).sqrt() + (E1 + D1) / s
    quart = lambda v: v.sqrt().sqrt()
    C3 = (4 * quart(F1 ** 3 * F2) + (6 * (F1 * F2).sqrt() + D2) / s
          + 4 * quart(F1 * F2 ** 3) / ell + F2 / (ell * s))
    return MomentErrorConstants(D1, D2, E1, E2, F1, F2, C2, C3, ell)


# -- M2 gate and gap-level constants -----------------------------------------

def _gate_ell(loglog_value) -> tuple[RigorousBound, RigorousBound]:
    Lg = RigorousBound.from_ln(loglog_value)      # log(2 pi M)
    ell = RigorousBound(Lg.lo, (Lg + rb("0.7")).hi)
    return Lg, ell


@dataclass(frozen=True)
class GateResult:
    loglog_value: str
    passes: bool
    margin: RigorousBound
    C2: RigorousBound


def audit_M2_gate(loglog_value=LOGLOG_2PI_M) -> GateResult:
    """Positivity of 1 - pi^2 C2 / sqrt(log 2 pi M) with log log(2 pi M) = loglog_value.

    alpha = 1, eps = 3/88 and h log T = 2 pi M lambda with lambda in [1, 2], so
    ell = log(1 + 2 pi M lambda) is only known to lie in [log 2 pi M, log 2 pi M + 0.7].
    """
    if _lower(loglog_value) <= 0:
        raise DomainError("loglog_value must be positive")
    pi, _, _, _ = _basic()
    Lg, ell = _gate_ell(loglog_value)
    mc = eval_moment_error_constants(Fraction(3, 88), 1, ell=ell)
    margin = 1 - pi * pi * mc.C2 / Lg.sqrt()
    return GateResult(str(loglog_value), margin.is_positive(), margin, mc.C2)


def derived_M2(loglog_value=LOGLOG_2PI_M) -> RigorousBound:
    """Lower-bound constant for J2/T implied by the gate: (log 2 pi M / pi^2) * margin."""
    pi, _, _, _ = _basic()
    Lg, _ = _gate_ell(loglog_value)
    g = audit_M2_gate(loglog_value)
    return Lg / (pi * pi) * g.margin


def derived_M3(loglog_value=LOGLOG_2PI_M) -> RigorousBound:
    """Upper-bound constant for J4/T: (3/pi^4) ell^2 + C3 ell^(3/2) at ell = log 2 pi M + 0.7."""
    pi, _, _, _ = _basic()
    Lg, _ = _gate_ell(loglog_value)
    ell = Lg + rb("0.7")
    mc = eval_moment_error_constants(Fraction(3, 88), 1, ell=ell)
    return 3 / pi ** 4 * ell * ell + mc.C3 * ell * ell.sqrt()


@dataclass(frozen=True)
class GapConstantsReport:
    lambda_: float
    mu: float
    M: LogReal
    M1: LogReal
    M2: LogReal
    M3: LogReal
    c0: LogReal
    c1: LogReal
    c2: LogReal
    c1_bound: RigorousBound = field(repr=False, default=None)
    c1_matches_korolev_form: bool = True


def _ln_M() -> object:
    # M = e^(e^30.76) / (2 pi)
    pi, _, _, _ = _basic()
    return RigorousBound.from_ln(LOGLOG_2PI_M).exp() / (2 * pi)


def published_M_constants():
    """M, M1, M2, M3 as stated; ln M1 is computed exactly from the Hoelder identity."""
    ln_m1 = (3 * LN_M2 - LN_M3) / 2
    as_lr = lambda q: LogReal(1, mpf(q.numerator) / q.denominator)
    return _ln_M(), as_lr(ln_m1), as_lr(LN_M2), as_lr(LN_M3)


def c0_bound() -> RigorousBound:
    """c0 = M1/(2M) = pi e^4.3 / e^(e^30.76)."""
    pi, _, _, _ = _basic()
    return pi * RigorousBound.from_ln(rb(LN_M1.numerator) / LN_M1.denominator) / \
        RigorousBound.from_ln(LOGLOG_2PI_M).exp()


def eval_gap_constants(lam=1, mu=Fraction(1, 2), *, lambda_excess=None, slack=0) -> GapConstantsReport:
    """Gap constants at (lambda, mu).

    ``lambda_excess`` (lambda - 1, any numeric or LogReal) overrides ``lam`` so
    that values like 1 + c0 survive without rounding away c0.  ``slack`` is the
    additive epsilon subtracted from c1 and c2 (zero by default).
    """
    if lambda_excess is not None:
        exc = rb(lambda_excess)
    elif _frac(lam) is not None:
        exc = rb(_frac(lam) - 1)       # exact, so lambda = 1 leaves c0 intact
    else:
        exc = rb(lam) - 1
    lam_b = 1 + exc
    if _lower(lam_b) < 1 or _upper(lam_b) > 2:
        raise DomainError("lambda must lie in [1, 2]")
    if _lower(mu) <= 0 or _upper(mu) >= 1:
        raise DomainError("mu must lie in (0, 1)")
    pi, _, _, _ = _basic()
    M, M1, M2, M3 = published_M_constants()
    c0 = c0_bound()
    base = c0 - exc
    c1 = base * base / (16 * RigorousBound.from_ln(LN_KOROLEV_EXP)) - rb(slack)
    K = K_korolev()
    horn = pi * pi / (2 * K) * (rb(M1) / (2 * M) + 1 - lam_b) ** 2 - rb(slack)
    # both forms must enclose the same value
    same = not (c1.certainly_lt(horn) or horn.certainly_lt(c1))
    m = rb(mu)
    c2 = ((1 - 2 * c1) * m + 2 * lam_b * c1 - 1) / (2 * m) - rb(slack)
    mid = lambda b: b.lo if b.lo.sign == b.hi.sign and b.lo.sign != 0 else LogReal.of(b.mid())
    return GapConstantsReport(float(lam_b.mid()), float(m.mid()), M.hi, M1, M2, M3, c0.hi,
                              mid(c1), mid(c2), c1, same)


# -- multiplicity pipeline -------------------------------------------------

@dataclass(frozen=True)
class MultiplicityConstants:
    kappa: RigorousBound
    delta: float
    delta_bound: RigorousBound
    density_coefficient: float
    coefficient_ok: bool
    kappa_ok: bool


def kappa() -> RigorousBound:
    _, e, _, _ = _basic()
    return 2 / (3 * e * omega0())


def eval_multiplicity_constants(tol: float = 1e-12) -> MultiplicityConstants:
    import math
    kap = kappa()
    kf = float(kap.mid())
    target = 2 * math.exp(5) * kf
    d = find_root(lambda x: (x - 1) ** 2 / x - target, 1.001, 1.1, tol)
    # certify the root with interval evaluations just outside the bracket
    lo_d, hi_d = d - 10 * tol, d + 10 * tol
    f = lambda x: (rb(x) - 1) ** 2 / rb(x) - 2 * rb_e() ** 5 * kap
    certified = f(lo_d).is_negative() and f(hi_d).is_positive()
    dbound = rb(lo_d) if not certified else RigorousBound(rb(lo_d).lo, rb(hi_d).hi)
    coef = math.ceil(hi_d * 1e5) / 1e5
    kap_ok = kap.certainly_gt(rb("6.459e-7")) and kap.certainly_lt(rb("6.46e-7"))
    return MultiplicityConstants(kap, d, dbound, coef, coef <= 1.014 and certified, kap_ok)


def ideal_lambda_equation(lam: float, alpha: float = 0.0) -> float:
    """lambda - 1 - M1(lambda)/2 with M1 = sqrt(log(alpha + 2 pi lambda) / (3 pi^2)).

    alpha = 0 keeps only log(h log T) with h log T = 2 pi lambda; alpha = 1 is
    the log(1 + 2 pi lambda) variant.
    """
    import math
    m1 = math.sqrt(math.log(alpha + 2 * math.pi * lam) / (3 * math.pi ** 2))
    return lam - 1 - m1 / 2


def solve_ideal_lambda(alpha: float = 0.0, tol: float = 1e-12) -> float:
    """Fixed point lambda = 1 + M1(lambda)/2 of the error-free moment scenario."""
    return find_root(lambda x: ideal_lambda_equation(x, alpha), 1.0, 2.0, tol)


# -- multiplicity-lemma helpers --------------------------------------------

def h_T_eta(log_T, eta) -> RigorousBound:
    """h(T, eta) = (2 pi / eta) / log(T / 2 pi)."""
    pi, _, _, _ = _basic()
    return 2 * pi / rb(eta) / (rb(log_T) - (2 * pi).log())


def moment_bound_gbJ(k: int) -> RigorousBound:
    """(3 omega0 k)^(2k), the bound for J_2k(T, 2h)/T."""
    return (3 * omega0() * k) ** (2 * k)


def measure_bound(lam) -> RigorousBound:
    """exp(4 - 2 lambda / (3 e omega0)), the bound for m(D(lambda))/T."""
    _, e, _, _ = _basic()
    return (4 - 2 * rb(lam) / (3 * e * omega0())).exp()


# -- reports ---------------------------------------------------------------

@dataclass(frozen=True)
class ConstantReport:
    name: str
    formula_anchor: str
    computed: RigorousBound
    published: Optional[LogReal] = None
    direction: str = "upper"          # "upper": computed <= published; "lower": computed >= published

    @property
    def status(self) -> str:
        if self.published is None:
            return NO_PUBLISHED
        if self.direction == "upper":
            return WITHIN if self.computed.hi <= self.published else EXCEEDS
        return WITHIN if self.computed.lo >= self.published else EXCEEDS

    def ln_ratio(self):
        """ln(computed / published) using the endpoint relevant to the direction."""
        if self.published is None or self.published.sign <= 0:
            return None
        end = self.computed.hi if self.direction == "upper" else self.computed.lo
        if end.sign <= 0:
            return None
        return end.ln_mag - self.published.ln_mag

    def to_dict(self, digits: int = 30) -> dict:
        c = self.computed
        sign = c.sign()
        d = {
            "name": self.name,
            "formula_anchor": self.formula_anchor,
            "computed_lo_ln": nstr(c.lo.ln_mag, digits) if c.lo.sign else "-inf",
            "computed_hi_ln": nstr(c.hi.ln_mag, digits) if c.hi.sign else "-inf",
            "computed_sign": sign,
            "computed_lo_sign": c.lo.sign,
            "computed_hi_sign": c.hi.sign,
            "published": None,
            "status": self.status,
        }
        if self.published is not None:
            p = self.published
            d["published"] = {"sign": p.sign, "ln": nstr(p.ln_mag, digits) if p.sign else "-inf",
                              "direction": self.direction}
            r = self.ln_ratio()
            if r is not None:
                d["ln_ratio"] = nstr(r, 12)
                import math
                d["suspicious"] = bool(self.direction == "upper" and r < -math.log(2))
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def _pub(value) -> LogReal:
    return LogReal.of(value)


def _pub_ln(ln) -> LogReal:
    return LogReal(1, mpf(str(ln)))


def _max_ratio_C_vs_omega(kmax: int = 100, log_x0=LOG_X0_DEFAULT) -> RigorousBound:
    """max over k of C(1/88, k, x0) / (omega0 k)^(2k)."""
    best = None
    for k in range(1, kmax + 1):
        r = eval_C(EPS_MAX, k, log_x0=log_x0) / (omega0() * k) ** (2 * k)
        best = r if best is None else RigorousBound(max(best.lo, r.lo), max(best.hi, r.hi))
    return best


REPORT_NAMES = (
    "a0", "a1", "a2", "a3", "a4", "m0", "L0", "K", "omega0",
    "C_k1", "C_k2", "Cprime_k1", "Cprime_k2", "C_vs_omega0",
    "C1_k1", "C1_k2", "A_0.7_e", "D1", "D2", "E2", "F2", "C2_gate",
    "gate_margin_30.76", "gate_margin_30.75", "M2", "M3", "M1", "M", "c0", "c1",
    "kappa", "delta", "density_coefficient", "ideal_lambda",
)


def build_report(name: str, *, lam=1) -> ConstantReport:
    lx = LOG_X0_DEFAULT
    eps = EPS_MAX
    if name == "a0":
        return ConstantReport(name, "a0 = 1.5453", a0())
    if name == "a1":
        return ConstantReport(name, "a1 = 13 + 26/(10 pi) + 13/(3 pi e)", a1())
    if name == "a2":
        return ConstantReport(name, "a2(x0) at log x0 = 20000", a2(lx))
    if name == "a3":
        return ConstantReport(name, "a3(x0) at log x0 = 20000", a3(lx))
    if name == "a4":
        return ConstantReport(name, "a4(x0, 1/88, 1) at log x0 = 20000", a4(lx, eps, 1))
    if name == "m0":
        return ConstantReport(name, "m0 = sqrt(1 + (2/3) sqrt(6/5))", m0())
    if name == "L0":
        return ConstantReport(name, "zero-density constant L0 = 642.86", L0())
    if name == "K":
        return ConstantReport(name, "K = 8 pi^2 e^99.8", K_korolev())
    if name == "omega0":
        return ConstantReport(name, "omega0 = e^12.8471", omega0())
    if name == "C_k1":
        return ConstantReport(name, "C(1/88, 1, e^20000) = Chat(eps, eps, k, x0)",
                              eval_C(eps, 1, log_x0=lx), _pub("1.44161e11"))
    if name == "C_k2":
        return ConstantReport(name, "C(1/88, 2, e^20000) = Chat(eps, eps, k, x0)",
                              eval_C(eps, 2, log_x0=lx), _pub("2.69927e21"))
    if name == "Cprime_k1":
        return ConstantReport(name, "C'(1/88, 1, e^20000)", eval_C_prime(eps, 1, log_x0=lx),
                              _pub("1.44161e11"))
    if name == "Cprime_k2":
        return ConstantReport(name, "C'(1/88, 2, e^20000)", eval_C_prime(eps, 2, log_x0=lx),
                              _pub("2.69927e21"))
    if name == "C_vs_omega0":
        return ConstantReport(name, "max_{k<=100} C(1/88, k, e^20000) / (omega0 k)^(2k)",
                              _max_ratio_C_vs_omega(), _pub(1))
    if name == "C1_k1":
        return ConstantReport(name, "C1(1) = 3 pi m0 (1 + sqrt 2)/2", eval_C1(1).value)
    if name == "C1_k2":
        return ConstantReport(name, "C1(2) = 9 pi m0 (1 + sqrt 6)/4", eval_C1(2).value)
    if name == "A_0.7_e":
        return ConstantReport(name, "A(a, X) = |log a| + 13.88 + log(1 + a/log 2) + 3/log^2 X",
                              eval_A("0.7", log_X=1))
    gate_mc = lambda: eval_moment_error_constants(Fraction(3, 88), 1, ell=_gate_ell(LOGLOG_2PI_M)[1])
    if name == "D1":
        return ConstantReport(name, "D1 at eps = 3/88, alpha = 1, T1 = x0^(6/eps)", gate_mc().D1)
    if name == "D2":
        return ConstantReport(name, "D2 at eps = 3/88, alpha = 1, ell = log(2 pi M) + [0, 0.7]",
                              gate_mc().D2)
    if name == "E2":
        return ConstantReport(name, "E2 = 2 (C(eps/3, 1, x0) + C'(eps/3, 1, x0))", gate_mc().E2)
    if name == "F2":
        return ConstantReport(name, "F2 = 8 (C(eps/3, 2, x0) + C'(eps/3, 2, x0))", gate_mc().F2)
    if name == "C2_gate":
        return ConstantReport(name, "C2 = 2 sqrt(E1 E2) + (E1 + D1)/sqrt(ell) at the M2 gate",
                              gate_mc().C2)
    if name.startswith("gate_margin_"):
        v = name.rsplit("_", 1)[1]
        g = audit_M2_gate(v)
        return ConstantReport(name, f"1 - pi^2 C2 / sqrt(log 2 pi M), log log 2 pi M = {v}", g.margin)
    if name == "M2":
        return ConstantReport(name, "M2 = (log 2 pi M / pi^2)(1 - pi^2 C2 / sqrt(log 2 pi M))",
                              derived_M2(), _pub_ln(LN_M2), "lower")
    if name == "M3":
        return ConstantReport(name, "M3 = (3/pi^4) ell^2 + C3 ell^(3/2), ell = log 2 pi M + 0.7",
                              derived_M3(), _pub_ln(LN_M3), "upper")
    if name == "M1":
        _, M1, _, _ = published_M_constants()
        return ConstantReport(name, "M1 = sqrt(M2^3 / M3)", RigorousBound.point(M1), _pub_ln(LN_M1),
                              "lower")
    if name == "M":
        return ConstantReport(name, "M = e^(e^30.76) / (2 pi)", _ln_M())
    if name == "c0":
        return ConstantReport(name, "c0 = pi e^4.3 / e^(e^30.76)", c0_bound())
    if name == "c1":
        return ConstantReport(name, f"c1 = (1 + c0 - lambda)^2 / (16 e^99.8), lambda = {lam}",
                              eval_gap_constants(lam).c1_bound)
    if name == "kappa":
        return ConstantReport(name, "kappa = 2 / (3 e omega0)", kappa(), _pub("6.459e-7"), "lower")
    if name == "delta":
        mc = eval_multiplicity_constants()
        return ConstantReport(name, "root of (d - 1)^2 / d = 2 e^5 kappa", mc.delta_bound)
    if name == "density_coefficient":
        mc = eval_multiplicity_constants()
        return ConstantReport(name, "delta rounded up to 5 decimals", rb(str(mc.density_coefficient)),
                              _pub("1.014"))
    if name == "ideal_lambda":
        v = solve_ideal_lambda()
        return ConstantReport(name, "lambda = 1 + sqrt(log(2 pi lambda)/(3 pi^2))/2",
                              RigorousBound.from_mpf(mpf(v) - mpf(1e-12), mpf(v) + mpf(1e-12)),
                              _pub("1.1286"), "lower")
    raise KeyError(f"unknown constant {name!r}")


def all_reports(names: Iterable[str] = REPORT_NAMES, **kw) -> list[ConstantReport]:
    return [build_report(n, **kw) for n in names]
