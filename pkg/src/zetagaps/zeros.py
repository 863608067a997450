"""Zero ordinates of zeta on the critical line and statistics built from them."""
from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .constants import K_korolev
from .errors import CountMismatch, DomainError, OutOfRange, TooCloseToZero, TooFewZeros
from .numerics import LogReal, RigorousBound, rb
from .zeta_engine import (EXCLUSION, T_MAX, T_MIN, _Z_unchecked, count_N, grid_step, s_arg,
                          theta_exact)

_BLOCK = 1 << 20
CROSS_CHECK_MAX = 1e5   # endpoint recount from t = 10 is skipped above this height


@dataclass(frozen=True)
class ZeroList:
    """Sorted zero ordinates found on [t_min, t_max] with bracket radii.

    ``betas`` is optional and only used for synthetic off-line lists; when it
    is absent every zero is taken to lie on the critical line.
    """

    t_min: float
    t_max: float
    gammas: np.ndarray
    radii: np.ndarray
    count_certified: bool = False
    betas: Optional[np.ndarray] = None

    def __post_init__(self):
        g = np.asarray(self.gammas, dtype=float)
        r = np.asarray(self.radii, dtype=float)
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "radii", r)
        if self.betas is not None:
            object.__setattr__(self, "betas", np.asarray(self.betas, dtype=float))
        if len(g) != len(r):
            raise ValueError("gammas and radii differ in length")
        if len(g) > 1 and np.any((g[1:] - r[1:]) <= (g[:-1] + r[:-1])):
            raise ValueError("ordinate enclosures must be strictly increasing and disjoint")
        g.setflags(write=False)
        r.setflags(write=False)

    def __len__(self) -> int:
        return len(self.gammas)

    @property
    def ordinates(self):
        return list(zip(self.gammas.tolist(), self.radii.tolist()))

    def covers(self, a: float, b: float) -> bool:
        # no ordinate lies below 14, so a list starting at t <= 10 covers everything below
        return (self.t_min <= a or self.t_min <= T_MIN) and self.t_max >= b

    def restrict(self, a: float, b: float) -> ZeroList:
        m = (self.gammas >= a) & (self.gammas <= b)
        betas = None if self.betas is None else self.betas[m]
        return ZeroList(max(a, self.t_min), min(b, self.t_max), self.gammas[m], self.radii[m],
                        self.count_certified, betas)

    def nearest_distance(self, t: float) -> float:
        if len(self.gammas) == 0:
            return math.inf
        i = np.searchsorted(self.gammas, t)
        d = math.inf
        for j in (i - 1, i):
            if 0 <= j < len(self.gammas):
                d = min(d, abs(self.gammas[j] - t))
        return d

    # -- CSV --------------------------------------------------------------
    def to_csv(self, path_or_buf: Union[str, os.PathLike, io.TextIOBase, None] = None) -> Optional[str]:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        head = ["index", "gamma", "radius"] + (["beta"] if self.betas is not None else [])
        w.writerow(head)
        for i, (g, r) in enumerate(zip(self.gammas, self.radii), start=1):
            row = [i, repr(float(g)), repr(float(r))]
            if self.betas is not None:
                row.append(repr(float(self.betas[i - 1])))
            w.writerow(row)
        text = buf.getvalue()
        if path_or_buf is None:
            return text
        if hasattr(path_or_buf, "write"):
            path_or_buf.write(text)
        else:
            with open(path_or_buf, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        return None

    @classmethod
    def from_csv(cls, source, t_min: Optional[float] = None, t_max: Optional[float] = None,
                 certified: bool = False) -> ZeroList:
        """Read a table with columns index, gamma, radius (and optionally beta)."""
        if hasattr(source, "read"):
            text = source.read()
        elif isinstance(source, str) and "\n" in source:
            text = source
        else:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        rows = list(csv.DictReader(io.StringIO(text)))
        g = np.array([float(r["gamma"]) for r in rows])
        rad = np.array([float(r.get("radius") or 0.0) for r in rows])
        betas = None
        if rows and "beta" in rows[0] and rows[0]["beta"] not in (None, ""):
            betas = np.array([float(r["beta"]) for r in rows])
        order = np.argsort(g, kind="stable")
        g, rad = g[order], rad[order]
        if betas is not None:
            betas = betas[order]
        lo = t_min if t_min is not None else (float(g[0]) if len(g) else 0.0)
        hi = t_max if t_max is not None else (float(g[-1]) if len(g) else 0.0)
        return cls(lo, hi, g, rad, certified, betas)


# -- isolation -------------------------------------------------------------

def _grid(a: float, b: float, refine: int) -> np.ndarray:
    """Grid on [a, b] whose local step is 0.2/log t / 2^refine."""
    pts = [np.array([a])]
    lo = a
    while lo < b:
        hi = min(b, lo + 200.0)
        h = grid_step(hi) / 2 ** refine
        m = max(1, int(math.ceil((hi - lo) / h)))
        pts.append(np.linspace(lo, hi, m + 1)[1:])
        lo = hi
    return np.concatenate(pts)


def _Z_blocks(g: np.ndarray) -> np.ndarray:
    return np.concatenate([_Z_unchecked(g[i:i + _BLOCK]) for i in range(0, len(g), _BLOCK)]) \
        if len(g) else np.zeros(0)


def _changes(z: np.ndarray) -> np.ndarray:
    return np.flatnonzero(np.signbit(z[:-1]) != np.signbit(z[1:]))


def _bisect(lo: np.ndarray, hi: np.ndarray, zlo: np.ndarray, radius: float) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = lo.copy(), hi.copy()
    neg = np.signbit(zlo)
    for _ in range(200):
        active = (hi - lo) > 2 * radius
        if not np.any(active):
            break
        mid = lo + 0.5 * (hi - lo)
        stuck = (mid <= lo) | (mid >= hi)
        active &= ~stuck
        if not np.any(active):
            break
        zm = _Z_unchecked(mid[active])
        same = np.signbit(zm) == neg[active]
        ia = np.flatnonzero(active)
        lo[ia[same]] = mid[ia[same]]
        hi[ia[~same]] = mid[ia[~same]]
    return 0.5 * (lo + hi), 0.5 * (hi - lo)


def _implied_S(t: float, count_below: int) -> float:
    return count_below - theta_exact(t) / math.pi - 1


def isolate_zeros(t_min: float, t_max: float, radius_target: float = 1e-9) -> ZeroList:
    """Bracket every sign change of Z on [t_min, t_max] and bisect to ``radius_target``.

    The scan runs at the base step and at two successive halvings; all three
    counts must agree (a missed close pair shows up as a disagreement).  On a
    mismatch the grid is refined twice more before CountMismatch is raised.
    The count is certified when, in addition, the values of S implied by the
    count at the endpoints are plausible (|S| <= 1.1 or matching the
    argument-tracking value).
    """
    if not (T_MIN <= t_min < t_max <= T_MAX):
        raise DomainError("need 10 <= t_min < t_max <= 1e7")
    for extra in (0, 2):
        g = _grid(t_min, t_max, 2 + extra)
        z = _Z_blocks(g)
        counts = []
        for stride in (4, 2, 1):
            sub = np.append(z[::stride], z[-1]) if (len(z) - 1) % stride else z[::stride]
            counts.append(len(_changes(sub)))
        if counts[0] == counts[1] == counts[2]:
            break
    else:
        raise CountMismatch(f"sign-change counts {counts} do not stabilise on [{t_min}, {t_max}]")
    idx = _changes(z)
    gam, rad = _bisect(g[idx], g[idx + 1], z[idx], radius_target)
    certified = True
    # plausibility of the implied S at t_max given the count below t_min
    if t_min <= T_MIN:
        s_end = _implied_S(t_max, len(gam))
        if abs(s_end) > 1.1:
            try:
                certified = abs(s_end - s_arg(t_max)) < 0.5
            except Exception:  # pragma: no cover - arg tracking failure
                certified = False
    if certified and t_max <= CROSS_CHECK_MAX:
        # independent uniform-grid count at both endpoints
        try:
            hi = count_N(t_max)
            lo = count_N(t_min) if t_min > T_MIN else None
        except TooCloseToZero:
            certified = False
        else:
            n_lo = lo.count if lo is not None else 0
            if hi.count - n_lo != len(gam):
                raise CountMismatch(f"{len(gam)} sign changes on [{t_min}, {t_max}] but "
                                    f"N(t_max) - N(t_min) = {hi.count - n_lo}")
            certified = hi.certified and (lo is None or lo.certified)
    return ZeroList(float(t_min), float(t_max), gam, rad, certified)


# -- statistics ------------------------------------------------------------

@dataclass(frozen=True)
class GapStats:
    mean_gap: float
    max_gap: float
    max_gap_index: int
    normalized_gaps: np.ndarray
    mean_normalized_gap: float
    max_normalized_gap: float
    max_normalized_index: int
    d_of_alpha: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "mean_gap": self.mean_gap,
            "max_gap": self.max_gap,
            "max_gap_index": self.max_gap_index,
            "mean_normalized_gap": self.mean_normalized_gap,
            "max_normalized_gap": self.max_normalized_gap,
            "max_normalized_index": self.max_normalized_index,
            "gap_count": int(len(self.normalized_gaps)),
            "d_of_alpha": {repr(float(k)): v for k, v in self.d_of_alpha.items()},
        }


def gap_statistics(zl: ZeroList, alpha_grid: Iterable[float] = ()) -> GapStats:
    """Gaps, normalized gaps and D(alpha, t_max).

    A normalized gap is (gamma_{n+1} - gamma_n) log(gamma_n/2pi)/2pi, i.e. the
    gap in units of the local mean spacing, so normalized gaps average to 1.

    D(alpha, T) is the fraction of consecutive gaps with
    gamma_{n+1} - gamma_n <= 2 pi alpha / log T, T = t_max.
    """
    g = zl.gammas
    if len(g) < 2:
        raise TooFewZeros("need at least two ordinates")
    gaps = np.diff(g)
    norm = gaps * np.log(g[:-1] / (2 * math.pi)) / (2 * math.pi)
    T = zl.t_max
    scale = 2 * math.pi / math.log(T)
    srt = np.sort(gaps)
    d = {}
    for a in alpha_grid:
        d[float(a)] = float(np.searchsorted(srt, scale * a, side="right")) / len(gaps)
    i = int(np.argmax(gaps))
    j = int(np.argmax(norm))
    return GapStats(float(gaps.mean()), float(gaps[i]), i, norm, float(norm.mean()),
                    float(norm[j]), j, d)


def D_direct(zl: ZeroList, alpha: float) -> float:
    """D(alpha, t_max) by direct counting of the defining set."""
    T = zl.t_max
    g = zl.gammas
    n = sum(1 for k in range(len(g) - 1) if g[k + 1] - g[k] <= 2 * math.pi * alpha / math.log(T))
    return n / (len(g) - 1)


def _window(lam: float, T: float) -> float:
    return 2 * math.pi * lam / math.log(T)


def discrepancy_delta(t: float, lam: float, T: float, zl: ZeroList) -> float:
    """delta(t, lambda) = #(ordinates in (t, t + 2 pi lambda/log T]) - lambda."""
    w = _window(lam, T)
    if not zl.covers(t, t + w):
        raise OutOfRange("zero list does not cover the window")
    if zl.nearest_distance(t) < EXCLUSION:
        raise TooCloseToZero(f"t = {t} is within {EXCLUSION} of an ordinate")
    g = zl.gammas
    n = int(np.searchsorted(g, t + w, side="right") - np.searchsorted(g, t, side="right"))
    return n - lam


def _int_N_rel(a: float, b: float, g: np.ndarray) -> float:
    """int_a^b (N(t) - N(a)) dt."""
    inside = g[(g > a) & (g <= b)]
    return math.fsum(b - inside)


def delta_integral(T: float, lam: float, zl: ZeroList) -> float:
    """Exact int_T^{2T} delta(t, lambda) dt."""
    w = _window(lam, T)
    if not zl.covers(T, 2 * T + w):
        raise OutOfRange("zero list must cover [T, 2T + window]")
    g = zl.gammas
    n_T = np.searchsorted(g, T, side="right")
    n_2T = np.searchsorted(g, 2 * T, side="right")
    total = w * float(n_2T - n_T) + _int_N_rel(2 * T, 2 * T + w, g) - _int_N_rel(T, T + w, g)
    return total - lam * T


def zero_free_measure(T: float, lam: float, zl: ZeroList) -> float:
    """Measure of {t in [T, 2T] : no ordinate in (t, t + 2 pi lambda/log T]}."""
    w = _window(lam, T)
    if not zl.covers(T, 2 * T + w):
        raise OutOfRange("zero list must cover [T, 2T + window]")
    g = zl.gammas
    nxt = g[g > T]
    starts = np.concatenate(([T], nxt))
    nexts = np.concatenate((nxt, [math.inf]))
    lo = np.maximum(starts, T)
    hi = np.minimum(nexts - w, 2 * T)
    keep = starts < 2 * T
    return math.fsum(np.clip(hi[keep] - lo[keep], 0.0, None))


def large_gap_sum(T: float, lam: float, zl: ZeroList) -> float:
    """sum of gamma_{n+1} - gamma_n over T <= gamma_n <= 2T with gap >= 2 pi lambda/log T,
    plus the boundary segment from T to the first ordinate."""
    w = _window(lam, T)
    g = zl.gammas
    i0 = int(np.searchsorted(g, T, side="left"))
    i1 = int(np.searchsorted(g, 2 * T, side="right"))
    gaps = g[i0 + 1:i1 + 1] - g[i0:i1] if i1 < len(g) else np.diff(g[i0:])
    big = gaps[gaps >= w]
    boundary = max(0.0, (g[i0] if i0 < len(g) else 2 * T) - T)
    return math.fsum(big) + boundary


@dataclass(frozen=True)
class KorolevResult:
    sum: float
    bound: LogReal
    holds: bool
    count: int
    window: tuple


def korolev_sum(T: float, zl: ZeroList, variant: str = "half") -> KorolevResult:
    """sum (gamma_{n+1} - gamma_n)^2 over T/2 <= gamma_n <= T against K N(T)/log^2 T.

    ``variant="double"`` uses T <= gamma_n <= 2T against K N(2T)/log^2(2T).
    """
    if variant == "half":
        a, b, top = T / 2, T, T
    elif variant == "double":
        a, b, top = T, 2 * T, 2 * T
    else:
        raise ValueError("variant must be 'half' or 'double'")
    g = zl.gammas
    inside = np.any((g >= a) & (g <= b))
    if not zl.covers(a, b) or (inside and not np.any(g > b)):
        raise OutOfRange("zero list must cover the window plus one gap beyond")
    i0 = int(np.searchsorted(g, a, side="left"))
    i1 = int(np.searchsorted(g, b, side="right"))
    if i1 > i0:
        gaps = g[i0 + 1:i1 + 1] - g[i0:i1]
        s = math.fsum(gaps * gaps)
    else:
        s = 0.0
    if zl.t_min <= T_MIN:
        n_top = int(np.searchsorted(g, top, side="right"))
    else:
        from .zeta_engine import count_N
        n_top = count_N(top).count
    bound = (K_korolev() * n_top / rb(math.log(top)) ** 2).hi if n_top > 0 else LogReal.zero()
    return KorolevResult(s, bound, LogReal.of(s) <= bound, n_top, (a, b))


def sigma_xt(x: float, t: float, zl: ZeroList) -> float:
    """1/2 + 2 max{|beta - 1/2|, 1/log x} over zeros with |t - gamma| <= x^{3|beta-1/2|}/log x."""
    if x < 2:
        raise DomainError("x must be at least 2")
    lx = math.log(x)
    reach = x ** 1.5 / lx
    if not zl.covers(t - reach, t + reach):
        raise OutOfRange("zero list must cover t +- x^{3/2}/log x")
    g = zl.gammas
    beta = zl.betas if zl.betas is not None else np.full(len(g), 0.5)
    dev = np.abs(beta - 0.5)
    near = np.abs(t - g) <= x ** (3 * dev) / lx
    best = max(1.0 / lx, float(dev[near].max()) if np.any(near) else 0.0)
    return 0.5 + 2 * best
