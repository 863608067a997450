from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest

from zetagaps.errors import DomainError, OutOfRange, TooCloseToZero
from zetagaps.zeta_engine import (ARG_TRACKING, COUNT_MINUS_MAIN, MainTerm, count_N, hardy_Z,
                                  main_term, rs_theta, s1_between, s1_of_T, s_arg,
                                  s_from_ordinates, s_of_t, scan_sign_changes, theta_exact,
                                  theta_integral, zeta_em)

MP = mpmath.mp
G1 = 14.134725141734693


# -- theta -----------------------------------------------------------------

def test_theta_cancellation_point():
    t = 2 * math.pi * math.e
    assert rs_theta(t) == pytest.approx(-math.pi / 8 + 1 / (48 * t) + 7 / (5760 * t ** 3), abs=1e-9)


@pytest.mark.parametrize("t", [10.0, 100.0, 1234.5, 1e6])
def test_theta_against_loggamma_oracle(t):
    want = float(MP.siegeltheta(t))
    assert abs(rs_theta(t) - want) < 1e-10
    assert abs(theta_exact(t) - want) < 1e-9 * max(1.0, t / 1e5)


def test_theta_increasing():
    t = np.linspace(10, 1e4, 20001)
    assert np.all(np.diff(rs_theta(t)) > 0)


def test_theta_domain():
    with pytest.raises(DomainError):
        rs_theta(9.99)


def test_main_term():
    t = 321.0
    want = t / (2 * math.pi) * math.log(t) - (1 + math.log(2 * math.pi)) / (2 * math.pi) * t + 7 / 8
    assert MainTerm.at(t).value == pytest.approx(want, rel=1e-15)
    assert main_term(t) == MainTerm.at(t).value
    # the smooth term differs from theta/pi + 1 by O(1/t)
    assert abs(main_term(t) - (theta_exact(t) / math.pi + 1)) < 1 / t


# -- Z and zeta ------------------------------------------------------------

def test_first_sign_changes():
    z = hardy_Z(np.array([14.13, 14.14, 21.02, 21.03]))
    assert z[0] * z[1] < 0 and z[2] * z[3] < 0


@mpmath.workdps(25)
def test_abs_Z_matches_mpmath_zeta():
    rng = np.random.default_rng(11)
    for t in rng.uniform(100, 1e4, 20):
        want = abs(MP.zeta(MP.mpc(0.5, float(t))))
        assert abs(abs(hardy_Z(float(t))) - float(want)) < 1e-6


@pytest.mark.parametrize("t", [10.5, 50.0, 99.9, 100.1, 5000.0, 9.9e6])
@mpmath.workdps(25)
def test_Z_matches_siegelz(t):
    assert abs(hardy_Z(t) - float(MP.siegelz(t))) < 1e-6


def test_zeta_em_off_line():
    for s in (2.0 + 0j, 0.5 + 30j, 0.8 + 200j, 1.5 - 7j):
        assert abs(zeta_em(s) - complex(MP.zeta(s))) < 1e-10 * max(1, abs(complex(MP.zeta(s))))


def test_Z_domain():
    with pytest.raises(DomainError):
        hardy_Z(9.0)
    with pytest.raises(DomainError):
        hardy_Z(1.1e7)


def test_Z_constant_sign_between_zeros(zl_1000):
    g = zl_1000.gammas
    t = np.linspace(10.0, 1000.0, 10 * len(scan_sign_changes(10.0, 1000.0)[0]))
    n = np.searchsorted(g, t)
    keep = np.min(np.abs(t[:, None] - g[np.clip(n[:, None] + [-1, 0], 0, len(g) - 1)]), axis=1) > 1e-7
    z = hardy_Z(t[keep])
    sign = np.signbit(z)
    block = n[keep]
    for b in np.unique(block):
        s = sign[block == b]
        assert s.all() or not s.any()


# -- counting --------------------------------------------------------------

def test_count_examples():
    r = count_N(100.0)
    assert r.count == 29 and r.certified
    assert count_N(14.0).count == 0
    assert count_N(14.0).certified


def test_count_monotone_and_agrees_with_list(zl_1000):
    prev = 0
    for t in np.linspace(15, 990, 40):
        c = count_N(float(t))
        assert c.count >= prev
        assert c.count == count_N(float(t), zl_1000).count
        prev = c.count


def test_count_telescopes(zl_1e4):
    T = 1000.0
    pts = np.linspace(T, 2 * T, 101)
    steps = [count_N(float(b), zl_1e4).count - count_N(float(a), zl_1e4).count
             for a, b in zip(pts[:-1], pts[1:])]
    assert sum(steps) == count_N(2 * T, zl_1e4).count - count_N(T, zl_1e4).count


def test_too_close_to_zero():
    with pytest.raises(TooCloseToZero):
        count_N(G1)
    with pytest.raises(TooCloseToZero):
        s_of_t(G1 + 1e-8)


# -- S(t) ------------------------------------------------------------------

def test_s_methods_agree(zl_1e4):
    rng = np.random.default_rng(5)
    for t in rng.uniform(100, 5000, 50):
        a = s_of_t(float(t), COUNT_MINUS_MAIN, zl_1e4)
        b = s_of_t(float(t), ARG_TRACKING)
        assert abs(a.s_value - b.s_value) <= 2 * (a.est_error + b.est_error)
        assert abs(a.s_value) <= 0.5 * math.log(t)
    # the list-free scan gives the same value
    t = 4321.0
    assert s_of_t(t).s_value == s_of_t(t, COUNT_MINUS_MAIN, zl_1e4).s_value


def test_s_against_mpmath_argument():
    # S(t) = (N(t) - 1) - theta/pi with N from mpmath's own zero counter
    for t in (123.4, 777.7):
        want = float(MP.nzeros(t)) - float(MP.siegeltheta(t)) / math.pi - 1
        assert abs(s_of_t(t).s_value - want) < 1e-9


def test_s_jump_at_first_zero():
    d = s_of_t(G1 + 0.01).s_value - s_of_t(G1 - 0.01).s_value
    assert 0.9 < d < 1.1


def test_s_decreasing_between_ordinates(zl_1000):
    rng = np.random.default_rng(8)
    g = zl_1000.gammas
    for _ in range(100):
        i = int(rng.integers(0, len(g) - 1))
        a, b = np.sort(rng.uniform(g[i] + 1e-5, g[i + 1] - 1e-5, 2))
        assert s_from_ordinates(b, g) <= s_from_ordinates(a, g) + 1e-6


def test_s_mean_small(zl_1000):
    t = np.linspace(100, 1000, 200_001)
    assert abs(np.mean(s_from_ordinates(t, zl_1000.gammas))) < 0.05


def test_s_of_t_domain():
    with pytest.raises(DomainError):
        s_of_t(5.0)
    with pytest.raises(ValueError):
        s_of_t(50.0, "BOGUS")


def test_s_arg_direct():
    assert abs(s_arg(50.0) - s_of_t(50.0).s_value) < 1e-8


# -- S1 --------------------------------------------------------------------

def test_theta_integral_oracle():
    want = float(MP.quad(MP.siegeltheta, [100, 150, 200]))
    assert abs(theta_integral(100, 200) - want) < 1e-8


def test_s1_envelope(zl_1000):
    assert abs(s1_of_T(100.0, zl_1000)) < 2 * math.log(100)


def test_s1_before_first_zero(zl_1000):
    v = s1_of_T(14.0, zl_1000)
    # S = -theta/pi - 1 below the first ordinate
    want = -float(MP.quad(lambda t: MP.siegeltheta(t) / MP.pi + 1, [0, 14]))
    assert abs(v - want) < 1e-8
    assert v == pytest.approx(-1.4294815, abs=1e-6)


def test_s1_grid_oracle(zl_1000):
    t = np.linspace(20, 300, 2_000_001)
    s = s_from_ordinates(t, zl_1000.gammas)
    grid = float(np.sum((s[1:] + s[:-1]) / 2) * (t[1] - t[0]))
    assert abs(s1_between(20, 300, zl_1000.gammas) - grid) < 1e-3


def test_s1_additive(zl_1000):
    g = zl_1000.gammas
    assert s1_between(20, 500, g) == pytest.approx(s1_between(20, 311.1, g) + s1_between(311.1, 500, g),
                                                   abs=1e-9)


def test_s1_needs_coverage(zl_1000):
    with pytest.raises(OutOfRange):
        s1_of_T(2000.0, zl_1000)
    with pytest.raises(DomainError):
        s1_of_T(0.0)
