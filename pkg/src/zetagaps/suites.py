"""Seeded verification suites driven by the command line."""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable

import numpy as np

from . import constants as K
from .moments import (DirichletPoly, holder_chain, imag_moment_check, moments_J, mvh_check)
from .numerics import cin, mpf, nstr, rb
from .primesums import lemma_grid, prime_lemma_check, sieve, weighted_logp_sum
from .zeros import (D_direct, gap_statistics, isolate_zeros, large_gap_sum, zero_free_measure)

SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
SUITES = ("mvh", "imag_moment", "primesum", "constants", "holder", "gaps")


def _rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2 ** 64 - 1), SUITES.index(name)]))


def _cplx(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.normal(size=n) + 1j * rng.normal(size=n)


@lru_cache(maxsize=None)
def cached_zeros(t_min: float, t_max: float, radius: float = 1e-9):
    return isolate_zeros(t_min, t_max, radius)


@lru_cache(maxsize=None)
def cached_table(limit: int):
    return sieve(limit)


def suite_mvh(seed: int, trials: int, **_):
    rng = _rng(seed, "mvh")
    lengths = (1.0, 10.0, 100.0)
    worst = 0.0
    fails = 0
    for i in range(trials):
        X = int(rng.integers(2, 51))
        a = DirichletPoly.from_arrays(range(1, X + 1), _cplx(rng, X), X)
        b = a if i % 2 == 0 else DirichletPoly.from_arrays(range(1, X + 1), _cplx(rng, X), X)
        T1 = float(rng.uniform(-1000.0, 1000.0))
        r = mvh_check(a, b, T1, T1 + lengths[i % 3])
        worst = max(worst, r.lhs_dev / r.rhs)
        fails += not r.holds
    rec = {"suite": "mvh", "trials": trials, "failures": fails, "max_dev_over_rhs": worst}
    return [rec], fails == 0


def suite_imag_moment(seed: int, trials: int, **_):
    rng = _rng(seed, "imag_moment")
    worst = 0.0
    fails = 0
    for i in range(trials):
        k = int(rng.integers(1, 4))
        size = int(rng.integers(1, 13)) if k < 3 else int(rng.integers(1, 9))
        ps = sorted(rng.choice(SMALL_PRIMES, size=size, replace=False).tolist())
        co = dict(zip(ps, _cplx(rng, size)))
        T1 = float(rng.uniform(0.0, 1000.0))
        r = imag_moment_check(k, co, T1, T1 + float(rng.choice((1.0, 10.0, 100.0))))
        worst = max(worst, r.deviation / r.error_bound)
        fails += not r.holds
    rec = {"suite": "imag_moment", "trials": trials, "failures": fails, "max_dev_over_bound": worst}
    return [rec], fails == 0


def suite_primesum(seed: int, trials: int, sieve_limit: int = 10 ** 7, **_):
    table = cached_table(int(sieve_limit))
    Xs = tuple(X for X in (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6, 10 ** 7) if X <= table.limit)
    fails = 0
    worst = {"large_h": 0.0, "small_h": 0.0}
    for X, h in lemma_grid(Xs):
        r = prime_lemma_check(X, h, table)
        fails += not r.holds
        worst[r.branch] = max(worst[r.branch], r.value / r.bound)
    recs = [{"suite": "primesum", "check": "cosine_lemma_grid", "points": len(lemma_grid(Xs)),
             "failures": fails, "max_ratio_large_h": worst["large_h"], "max_ratio_small_h": worst["small_h"]}]
    c = cin(math.log(2))
    ok_cin = c < 0.118
    recs.append({"suite": "primesum", "check": "cin_log2", "value": c, "holds": ok_cin})
    ok_w = True
    for X in Xs:
        try:
            s = weighted_logp_sum(X, table)
            recs.append({"suite": "primesum", "check": "logp_over_p", "X": X, "value": s,
                         "bound": math.log(X), "holds": True})
        except ArithmeticError:
            ok_w = False
            recs.append({"suite": "primesum", "check": "logp_over_p", "X": X, "holds": False})
    return recs, fails == 0 and ok_cin and ok_w


def constant_checks() -> list[dict]:
    """Pass/fail records for the headline constants."""
    out = []
    c1 = K.eval_C(K.EPS_MAX, 1, log_x0=K.LOG_X0_DEFAULT)
    c2 = K.eval_C(K.EPS_MAX, 2, log_x0=K.LOG_X0_DEFAULT)
    ratio = K.build_report("C_vs_omega0")
    out.append({"check": "C_k1_le_1.44161e11", "ln_hi": float(c1.hi.ln_mag),
                "holds": c1.certainly_le(rb("1.44161e11"))})
    out.append({"check": "C_k2_le_2.69927e21", "ln_hi": float(c2.hi.ln_mag),
                "holds": c2.certainly_le(rb("2.69927e21"))})
    out.append({"check": "omega0_dominates_C_k1_to_100", "ln_max_ratio": float(ratio.computed.hi.ln_mag),
                "holds": ratio.status == K.WITHIN})
    g1 = K.audit_M2_gate("30.76")
    g2 = K.audit_M2_gate("30.75")
    out.append({"check": "gate_30.76_passes", "margin_sign": g1.margin.sign(), "holds": g1.passes})
    out.append({"check": "gate_30.75_fails", "margin_sign": g2.margin.sign(),
                "holds": (not g2.passes) and g2.margin.sign() == -1})
    _, M1, _, _ = K.published_M_constants()
    out.append({"check": "ln_M1_is_4.3", "ln": nstr(M1.ln_mag, 20),
                "holds": M1.ln_mag == mpf(43) / 10})
    c0 = K.c0_bound()
    l10 = float(c0.hi.ln_mag / mpf(math.log(10)))
    out.append({"check": "log10_c0", "value": l10, "holds": -9.94e12 < l10 < -9.92e12})
    mc = K.eval_multiplicity_constants()
    out.append({"check": "kappa", "lo": float(mc.kappa.lo), "hi": float(mc.kappa.hi), "holds": mc.kappa_ok})
    out.append({"check": "delta", "value": mc.delta, "holds": abs(mc.delta - 1.013943) <= 5e-6})
    out.append({"check": "density_coefficient", "value": mc.density_coefficient,
                "holds": mc.coefficient_ok})
    lam = K.solve_ideal_lambda()
    out.append({"check": "ideal_lambda", "value": lam, "holds": 1.1285 <= lam <= 1.1287})
    return out


def suite_constants(seed: int, trials: int, **_):
    recs = [dict(suite="constants", **r) for r in constant_checks()]
    ok = all(r["holds"] for r in recs)
    for rep in K.all_reports():
        recs.append({"suite": "constants", "report": rep.name, "status": rep.status})
    return recs, ok


def suite_holder(seed: int, trials: int, **_):
    rng = _rng(seed, "holder")
    zl = cached_zeros(10.0, 10001.0)
    recs = []
    ok = True
    cases = [(T, 2 * math.pi / math.log(T)) for T in (1000.0, 2000.0)]
    for _ in range(max(1, min(trials, 1000) // 250)):
        cases.append((float(rng.uniform(500.0, 4000.0)), float(rng.uniform(0.05, 1.0))))
    for T, h in cases:
        js = moments_J([1, 2, 4], T, h, zl)
        good = holder_chain(js[1].value, js[2].value, js[4].value)
        ok &= good
        recs.append({"suite": "holder", "T": T, "h": h, "J1": js[1].value, "J2": js[2].value,
                     "J4": js[4].value, "holds": good})
    return recs, ok


def suite_gaps(seed: int, trials: int, **_):
    rng = _rng(seed, "gaps")
    zl = cached_zeros(1000.0, 2000.0)
    alphas = np.linspace(0.0, 4.0, 41)
    gs = gap_statistics(zl, alphas)
    d = [gs.d_of_alpha[float(a)] for a in alphas]
    mono = all(x <= y for x, y in zip(d, d[1:]))
    band = 0.95 <= gs.mean_normalized_gap <= 1.05
    probe = [float(a) for a in rng.uniform(0.0, 3.0, size=5)]
    direct = all(gap_statistics(zl, [a]).d_of_alpha[a] == D_direct(zl, a) for a in probe)
    recs = [{"suite": "gaps", "mean_normalized_gap": gs.mean_normalized_gap, "band_ok": band,
             "d_monotone": mono, "direct_count_agrees": direct}]
    full = cached_zeros(10.0, 10001.0)
    g = full.gammas[full.gammas <= 1e4]
    raw_max_first = int(np.argmax(np.diff(g))) == 0
    recs.append({"suite": "gaps", "check": "first_gap_largest_to_1e4", "holds": raw_max_first})
    T = 2000.0
    meas = [zero_free_measure(T, lam, full) for lam in (0.0, 0.5, 1.0, 1.5, 2.0)]
    nonincr = all(x >= y for x, y in zip(meas, meas[1:]))
    bridge = all(zero_free_measure(T, lam, full) <= large_gap_sum(T, lam, full) + 1e-9
                 for lam in (0.5, 1.0, 1.5))
    recs.append({"suite": "gaps", "check": "zero_free_measure", "T": T, "values": meas,
                 "nonincreasing": nonincr, "bounded_by_large_gaps": bridge})
    return recs, band and mono and direct and raw_max_first and nonincr and bridge


SUITE_FUNCS: dict[str, Callable] = {
    "mvh": suite_mvh,
    "imag_moment": suite_imag_moment,
    "primesum": suite_primesum,
    "constants": suite_constants,
    "holder": suite_holder,
    "gaps": suite_gaps,
}


def run_suite(name: str, seed: int, trials: int, **kw):
    names = SUITES if name == "all" else (name,)
    recs = []
    ok = True
    for n in names:
        r, good = SUITE_FUNCS[n](seed, trials, **kw)
        recs.extend(r)
        recs.append({"suite": n, "passed": bool(good)})
        ok &= good
    return recs, ok
