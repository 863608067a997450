"""End-to-end acceptance checks; each prints one PASS/FAIL line with its runtime."""
from __future__ import annotations

import io
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest
from scipy import integrate

from zetagaps import constants as K
from zetagaps.cli import main
from zetagaps.moments import holder_chain, imag_power_integral, moments_J
from zetagaps.numerics import mpf, rb
from zetagaps.suites import run_suite
from zetagaps.zeros import D_direct, gap_statistics, isolate_zeros
from zetagaps.zeta_engine import count_N, hardy_Z, s_from_ordinates

pytestmark = pytest.mark.slow


@contextmanager
def criterion(capsys, number: int, title: str, limit: float):
    state = {"ok": False, "detail": ""}
    t0 = time.perf_counter()
    try:
        yield state
    finally:
        dt = time.perf_counter() - t0
        ok = state["ok"] and dt < limit
        with capsys.disabled():
            print(f"\n[acceptance {number:2d}] {'PASS' if ok else 'FAIL'}  {title}  "
                  f"({dt:.1f} s, limit {limit:g} s) {state['detail']}")
    assert state["ok"], state["detail"]
    assert dt < limit, f"runtime {dt:.1f} s over {limit} s"


def test_01_constant_audit(capsys):
    with criterion(capsys, 1, "constant audit", 10) as st:
        c1 = K.eval_C(K.EPS_MAX, 1, log_x0=20000)
        c2 = K.eval_C(K.EPS_MAX, 2, log_x0=20000)
        om = K.base_constants().omega0
        dominated = all(K.eval_C(K.EPS_MAX, k, log_x0=20000).certainly_le((om * k) ** (2 * k))
                        for k in range(1, 101))
        st["ok"] = c1.certainly_le(rb("1.44161e11")) and c2.certainly_le(rb("2.69927e21")) and dominated
        st["detail"] = f"C1={float(c1.hi):.6e} C2={float(c2.hi):.6e} omega0 dominates k<=100: {dominated}"


def test_02_M2_gate(capsys):
    with criterion(capsys, 2, "M2 gate", 10) as st:
        g1, g2 = K.audit_M2_gate("30.76"), K.audit_M2_gate("30.75")
        s1, s2 = g1.margin.sign(), g2.margin.sign()
        st["ok"] = g1.passes and not g2.passes and s1 == 1 and s2 == -1
        st["detail"] = f"margin signs {s1:+d} / {s2:+d}"


def test_03_gap_constants(capsys):
    with criterion(capsys, 3, "gap-constant pipeline", 5) as st:
        M, M1, M2, M3 = K.published_M_constants()
        derived = (M2.ln_mag * 3 - M3.ln_mag) / 2
        c0 = K.c0_bound()
        l10 = float(c0.hi.ln_mag / mpf(math.log(10)))
        mc = K.eval_multiplicity_constants()
        checks = {
            "ln M1 = 4.3": M1.ln_mag == mpf(43) / 10 and abs(derived - mpf(43) / 10) < mpf(10) ** -20,
            "log10 c0": -9.94e12 < l10 < -9.92e12,
            "kappa": mc.kappa.certainly_gt(rb("6.459e-7")) and mc.kappa.certainly_lt(rb("6.46e-7")),
            "delta": abs(mc.delta - 1.013943) <= 5e-6,
            "coefficient": mc.density_coefficient <= 1.014,
        }
        st["ok"] = all(checks.values())
        st["detail"] = f"log10 c0={l10:.5e} delta={mc.delta:.7f} " + \
            " ".join(k for k, v in checks.items() if not v)


def test_04_limiting_lambda(capsys):
    with criterion(capsys, 4, "limiting lambda", 1) as st:
        lam = K.solve_ideal_lambda()
        st["ok"] = 1.1285 <= lam <= 1.1287
        st["detail"] = f"lambda={lam:.7f}"


def test_05_zeta_engine(capsys):
    with criterion(capsys, 5, "zeta engine count and first ordinates", 60) as st:
        zl = isolate_zeros(10, 1000)
        scan = count_N(1000.0)
        ts = np.arange(10.0, 1001.0)
        s = s_from_ordinates(ts, zl.gammas)
        g1, g2 = zl.gammas[:2]
        brackets = hardy_Z(np.array([14.13, 14.14, 21.02, 21.03]))
        near = abs(g1 - 14.134725141734693) < 1e-6 and abs(g2 - 21.022039638771555) < 1e-6
        st["ok"] = (len(zl) == 649 == scan.count and scan.certified and zl.count_certified
                    and float(np.max(np.abs(s))) < 1.1 and near
                    and brackets[0] * brackets[1] < 0 and brackets[2] * brackets[3] < 0)
        st["detail"] = f"count={len(zl)} scan={scan.count} max|S| at integer t={np.max(np.abs(s)):.3f} " \
            f"gamma1={g1:.9f} gamma2={g2:.9f}"


def test_06_gap_statistics(capsys):
    with criterion(capsys, 6, "gap statistics", 300) as st:
        mid = isolate_zeros(1000, 2000)
        alphas = np.linspace(0, 4, 81)
        gs = gap_statistics(mid, alphas)
        d = [gs.d_of_alpha[float(a)] for a in alphas]
        mono = all(x <= y for x, y in zip(d, d[1:]))
        direct = all(gs.d_of_alpha[float(a)] == D_direct(mid, float(a)) for a in alphas[::10])
        full = isolate_zeros(10, 10000)
        first = int(np.argmax(np.diff(full.gammas))) == 0
        band = 0.95 <= gs.mean_normalized_gap <= 1.05
        st["ok"] = band and mono and direct and first
        st["detail"] = f"mean normalized gap={gs.mean_normalized_gap:.5f} D monotone={mono} " \
            f"first gap largest of {len(full) - 1}={first}"


def test_07_moment_bands(capsys):
    with criterion(capsys, 7, "moment bands and Hölder chain", 600) as st:
        zl = isolate_zeros(10, 20002)
        ok = True
        parts = []
        for T in (2000.0, 5000.0, 10000.0):
            h = 2 * math.pi / math.log(T)
            js = moments_J([1, 2, 4], T, h, zl)
            r2, r4 = js[2].ratio, js[4].ratio
            good = 0.3 <= r2 <= 3 and 0.2 <= r4 <= 5 and holder_chain(js[1].value, js[2].value, js[4].value)
            ok &= good
            parts.append(f"T={T:g}: J2 ratio {r2:.3f} J4 ratio {r4:.3f}")
        st["ok"] = ok
        st["detail"] = "; ".join(parts)


def test_08_mean_value_suites(capsys):
    with criterion(capsys, 8, "mean-value inequality suites", 120) as st:
        recs_a, ok_a = run_suite("mvh", 7, 1000)
        recs_b, ok_b = run_suite("imag_moment", 7, 1000)
        # spot-check the exact termwise integration against adaptive quadrature
        rng = np.random.default_rng(7)
        spot = True
        for k in (1, 2, 3):
            co = dict(zip((2, 3, 5, 7), rng.normal(size=4) + 1j * rng.normal(size=4)))
            f = lambda t: sum((a * p ** (-1j * t)).imag for p, a in co.items()) ** (2 * k)
            q = integrate.quad(f, 0.0, 10.0, limit=500, epsabs=1e-12, epsrel=1e-13)[0]
            spot &= abs(imag_power_integral(k, co, 0.0, 10.0) - q) <= 1e-9 * max(1.0, abs(q))
        st["ok"] = ok_a and ok_b and spot
        st["detail"] = f"mvh max dev/rhs={recs_a[0]['max_dev_over_rhs']:.3f} " \
            f"imag max dev/bound={recs_b[0]['max_dev_over_bound']:.3f} quad spot-check={spot}"


def test_09_prime_sums(capsys):
    with criterion(capsys, 9, "prime-sum suite", 120) as st:
        recs, ok = run_suite("primesum", 7, 1000, sieve_limit=10 ** 7)
        st["ok"] = ok
        grid = recs[0]
        st["detail"] = f"grid points={grid['points']} failures={grid['failures']} " \
            f"Cin(log 2)={recs[1]['value']:.6f}"


def test_10_reproducibility(capsys):
    with criterion(capsys, 10, "byte-identical verify runs", 600) as st:
        outs = []
        codes = []
        for _ in range(2):
            buf = io.StringIO()
            codes.append(main(["--seed", "7", "verify", "--suite", "all"], out=buf))
            outs.append(buf.getvalue().encode("utf-8"))
        st["ok"] = outs[0] == outs[1] and codes == [0, 0]
        st["detail"] = f"{len(outs[0])} bytes, exit codes {codes}"
