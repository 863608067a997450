from __future__ import annotations

import io
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetagaps import zeros as Z
from zetagaps.errors import CountMismatch, DomainError, OutOfRange, TooCloseToZero, TooFewZeros
from zetagaps.numerics import LogReal
from zetagaps.zeros import (D_direct, ZeroList, delta_integral, discrepancy_delta, gap_statistics,
                            isolate_zeros, korolev_sum, large_gap_sum, sigma_xt, zero_free_measure)
from zetagaps.zeta_engine import count_N, hardy_Z


def synthetic(gammas, betas=None, t_min=10.0, t_max=None):
    g = np.asarray(gammas, dtype=float)
    return ZeroList(t_min, t_max if t_max is not None else float(g[-1]) + 1, g,
                    np.full(len(g), 1e-9), False, betas)


# -- isolation -------------------------------------------------------------

def test_first_two_zeros():
    zl = isolate_zeros(10, 25)
    assert len(zl) == 2 and zl.count_certified
    assert abs(zl.gammas[0] - 14.134725141734693) < 1e-9
    assert abs(zl.gammas[1] - 21.022039638771555) < 1e-9
    assert np.all(zl.radii <= 1e-9)


def test_empty_range():
    zl = isolate_zeros(10, 14)
    assert len(zl) == 0 and zl.count_certified


def test_count_1000(zl_1000):
    assert len(zl_1000) == 649 and zl_1000.count_certified
    assert len(zl_1000) == count_N(1000.0).count - count_N(10.0).count


@mpmath.workdps(25)
def test_ordinates_against_mpmath(zl_1000):
    for n in (1, 2, 3, 10, 100, 333, 649):
        assert abs(zl_1000.gammas[n - 1] - float(mpmath.zetazero(n).imag)) < 2e-9


def test_enclosures_bracket_sign_change(zl_1000):
    g, r = zl_1000.gammas, zl_1000.radii
    lo, hi = hardy_Z(g - r - 1e-12), hardy_Z(g + r + 1e-12)
    assert np.all(np.signbit(lo) != np.signbit(hi))
    assert np.all(np.diff(g) > 0)


def test_interior_window_matches_full_list(zl_1e4):
    part = isolate_zeros(5000, 5100)
    ref = zl_1e4.gammas[(zl_1e4.gammas >= 5000) & (zl_1e4.gammas <= 5100)]
    assert part.count_certified
    assert np.allclose(part.gammas, ref, atol=2e-9)


def test_isolate_domain():
    with pytest.raises(DomainError):
        isolate_zeros(5, 20)
    with pytest.raises(DomainError):
        isolate_zeros(20, 20)


def test_count_mismatch_detected(monkeypatch):
    real = Z.count_N

    def off_by_one(t, zl=None):
        r = real(t, zl)
        return type(r)(r.count + 1, r.certified, r.implied_S)

    monkeypatch.setattr(Z, "count_N", off_by_one)
    with pytest.raises(CountMismatch):
        isolate_zeros(10, 100)


def test_zero_list_validation():
    with pytest.raises(ValueError):
        ZeroList(10, 20, np.array([15.0, 14.0]), np.array([1e-9, 1e-9]))
    with pytest.raises(ValueError):
        ZeroList(10, 20, np.array([15.0, 15.5]), np.array([0.3, 0.3]))
    with pytest.raises(ValueError):
        ZeroList(10, 20, np.array([15.0]), np.array([]))


def test_zero_list_helpers(zl_1000):
    assert zl_1000.covers(0, 1000) and not zl_1000.covers(0, 1001)
    sub = zl_1000.restrict(100, 200)
    assert sub.t_min == 100 and np.all((sub.gammas >= 100) & (sub.gammas <= 200))
    assert not sub.covers(50, 150)
    assert zl_1000.nearest_distance(14.134725141734693) < 1e-9
    assert synthetic([15.0]).restrict(0, 1).nearest_distance(3) == math.inf


def test_csv_roundtrip(tmp_path, zl_1000):
    path = tmp_path / "z.csv"
    zl_1000.to_csv(path)
    back = ZeroList.from_csv(path, 10, 1000, True)
    assert np.array_equal(back.gammas, zl_1000.gammas)
    assert np.array_equal(back.radii, zl_1000.radii)
    text = zl_1000.to_csv()
    assert text.splitlines()[0] == "index,gamma,radius"
    assert text.splitlines()[1].startswith("1,14.13472514")
    buf = io.StringIO()
    zl_1000.to_csv(buf)
    assert buf.getvalue() == text
    assert np.array_equal(ZeroList.from_csv(io.StringIO(text)).gammas, zl_1000.gammas)


def test_csv_with_betas():
    zl = synthetic([20.0, 30.0], betas=[0.5, 0.7])
    back = ZeroList.from_csv(zl.to_csv())
    assert back.betas.tolist() == [0.5, 0.7]
    assert ZeroList.from_csv("index,gamma,radius\n").gammas.size == 0


# -- gap statistics --------------------------------------------------------

def test_gap_statistics_small_range(zl_1000):
    gs = gap_statistics(zl_1000, [0.0, 10.0])
    assert gs.max_gap_index == 0
    assert abs(gs.max_gap - (21.022039638771555 - 14.134725141734693)) < 2e-9
    assert abs(gs.max_gap - 6.8873) < 1e-4
    assert gs.d_of_alpha == {0.0: 0.0, 10.0: 1.0}
    assert gs.mean_gap == pytest.approx((zl_1000.gammas[-1] - zl_1000.gammas[0]) / 648)


def test_first_gap_largest_below_1e4(zl_1e4):
    g = zl_1e4.gammas[zl_1e4.gammas <= 1e4]
    assert len(g) == 10142
    assert int(np.argmax(np.diff(g))) == 0


def test_normalized_gaps_definition(zl_1000):
    gs = gap_statistics(zl_1000)
    g = zl_1000.gammas
    want = np.diff(g) * np.log(g[:-1] / (2 * math.pi)) / (2 * math.pi)
    assert np.allclose(gs.normalized_gaps, want, rtol=1e-15)
    assert gs.max_normalized_gap == pytest.approx(want.max())


def test_normalized_mean_near_one():
    gs = gap_statistics(isolate_zeros(1000, 2000))
    assert 0.95 <= gs.mean_normalized_gap <= 1.05


def test_too_few_zeros():
    with pytest.raises(TooFewZeros):
        gap_statistics(isolate_zeros(10, 20))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 5), min_size=2, max_size=10))
def test_D_monotone_and_direct(alphas):
    zl = _ZL
    grid = sorted(alphas)
    d = gap_statistics(zl, grid).d_of_alpha
    vals = [d[a] for a in grid]
    assert all(0 <= v <= 1 for v in vals)
    assert all(x <= y for x, y in zip(vals, vals[1:]))
    for a in grid[:3]:
        assert d[a] == D_direct(zl, a)


_ZL = isolate_zeros(10, 400)


def test_telescoping(zl_1e4):
    g = zl_1e4.gammas
    seg = g[(g >= 2000) & (g <= 4000)]
    assert math.fsum(np.diff(seg)) == pytest.approx(seg[-1] - seg[0], abs=1e-9)
    assert abs((seg[-1] - seg[0]) - 2000) < 2


# -- discrepancy and zero-free measure -------------------------------------

def test_discrepancy_delta_trivial():
    zl = synthetic([20.0, 30.0, 40.0], t_max=100.0)
    T = math.exp(2 * math.pi)          # window 2 pi/log T = 1
    assert discrepancy_delta(21.5, 1, T, zl) == -1
    assert discrepancy_delta(19.5, 1, T, zl) == 0
    assert discrepancy_delta(19.0, 1, T, zl) == 0      # right end closed
    with pytest.raises(TooCloseToZero):
        discrepancy_delta(20.0, 1, T, zl)
    with pytest.raises(OutOfRange):
        discrepancy_delta(99.5, 1, T, zl)


def test_delta_integral_grid_oracle(zl_1e4):
    T = 500.0
    w = 2 * math.pi / math.log(T)
    n = 2_000_000
    t = T + (np.arange(n) + 0.5) * (T / n)
    g = zl_1e4.gammas
    d = np.searchsorted(g, t + w, side="right") - np.searchsorted(g, t, side="right") - 1.0
    grid = float(d.sum()) * (T / n)
    exact = delta_integral(T, 1, zl_1e4)
    assert abs(exact - grid) < 0.01
    assert exact / T == pytest.approx(-0.23302, abs=1e-5)


def test_zero_free_measure_limits(zl_1e4):
    assert zero_free_measure(500, 0, zl_1e4) == pytest.approx(500)
    assert zero_free_measure(500, 100, zl_1e4) == 0.0
    with pytest.raises(OutOfRange):
        zero_free_measure(600, 1, isolate_zeros(10, 1100))


def test_zero_free_measure_brute_scan(zl_1e4):
    T, n = 500.0, 10 ** 6
    w = 2 * math.pi / math.log(T)
    cell = T / n
    t = T + (np.arange(n) + 0.5) * cell
    g = zl_1e4.gammas
    free = np.searchsorted(g, t + w, side="right") == np.searchsorted(g, t, side="right")
    exact = zero_free_measure(T, 1, zl_1e4)
    assert exact == pytest.approx(144.30635, abs=1e-4)
    # each free segment end can be misplaced by at most one cell
    segments = int(np.count_nonzero(np.diff(free.astype(int)) == 1)) + int(free[0])
    assert abs(free.sum() * cell - exact) <= segments * cell
    assert abs(free.sum() * cell - exact) <= 5 * cell


def test_zero_free_measure_bridge(zl_1e4):
    T = 1500.0
    prev = math.inf
    for lam in np.linspace(0, 3, 13):
        m = zero_free_measure(T, float(lam), zl_1e4)
        assert m <= prev + 1e-12
        assert m <= large_gap_sum(T, float(lam), zl_1e4) + 1e-9
        prev = m


# -- Korolev sums ----------------------------------------------------------

def test_korolev_1000(zl_1e4):
    r = korolev_sum(1000.0, zl_1e4)
    g = zl_1e4.gammas
    i = np.flatnonzero((g >= 500) & (g <= 1000))
    want = math.fsum((g[i + 1] - g[i]) ** 2)
    assert r.sum == pytest.approx(want, rel=1e-15)
    assert r.holds and r.count == 649
    assert r.sum >= 0.5 * 500 * 2 * math.pi / math.log(1000)
    assert r.bound.ln_mag > 99


def test_korolev_double_variant(zl_1e4):
    r = korolev_sum(1000.0, zl_1e4, variant="double")
    assert r.window == (1000.0, 2000.0) and r.holds
    assert r.count == int(np.searchsorted(zl_1e4.gammas, 2000.0, side="right"))


def test_korolev_empty_and_errors(zl_1000):
    empty = ZeroList(10.0, 14.0, np.zeros(0), np.zeros(0), True)
    r = korolev_sum(13.0, empty)
    assert r.sum == 0 and r.holds and r.bound == LogReal.zero()
    with pytest.raises(OutOfRange):
        korolev_sum(1000.0, zl_1000)
    with pytest.raises(ValueError):
        korolev_sum(100.0, zl_1000, variant="other")


# -- sigma_{x,t} -----------------------------------------------------------

def test_sigma_critical_line(zl_1000):
    assert sigma_xt(math.exp(4), 500.0, zl_1000) == pytest.approx(1.0)
    assert sigma_xt(10.0, 200.0, zl_1000) == pytest.approx(0.5 + 2 / math.log(10))


def test_sigma_synthetic_off_line():
    t = 500.0
    x = math.exp(4)
    base = [300.0, 450.0, t, 550.0, 700.0]
    zl6 = synthetic(base, betas=[0.5, 0.5, 0.6, 0.5, 0.5], t_max=800)
    zl9 = synthetic(base, betas=[0.5, 0.5, 0.9, 0.5, 0.5], t_max=800)
    assert sigma_xt(x, t, zl6) == pytest.approx(1.0)
    assert sigma_xt(x, t, zl9) == pytest.approx(1.3)
    # an off-line zero outside its own reach does not count
    far = synthetic(base, betas=[0.5, 0.5, 0.5, 0.6, 0.5], t_max=800)
    assert sigma_xt(x, t, far) == pytest.approx(1.0)
    assert sigma_xt(math.exp(5), t, synthetic([t], betas=[0.6], t_max=1000)) == pytest.approx(0.9)


def test_sigma_errors(zl_1000):
    with pytest.raises(OutOfRange):
        sigma_xt(math.exp(4), 950.0, zl_1000)
    with pytest.raises(DomainError):
        sigma_xt(1.5, 100.0, zl_1000)
