"""Prime tables and the weighted prime sums used by the moment estimates."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import LimitTooLarge, TableTooSmall

MAX_LIMIT = 10 ** 9
_SEGMENT = 1 << 22
_MAGIC = b"ZGPRIMES"
_HEADER = np.dtype([("magic", "S8"), ("limit", "<i8"), ("count", "<i8")])


def _small_primes(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    mark = np.ones(n + 1, dtype=bool)
    mark[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mark[p]:
            mark[p * p::p] = False
    return np.flatnonzero(mark).astype(np.int64)


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray

    def __post_init__(self):
        self.primes.setflags(write=False)

    def __len__(self) -> int:
        return len(self.primes)

    def upto(self, X: float) -> np.ndarray:
        """Primes p <= X; raises TableTooSmall if X exceeds the sieve limit."""
        if X > self.limit:
            raise TableTooSmall(f"table limit {self.limit} < {X}")
        return self.primes[: np.searchsorted(self.primes, math.floor(X), side="right")]

    def is_prime(self, n: int) -> bool:
        if n > self.limit:
            raise TableTooSmall(f"table limit {self.limit} < {n}")
        i = np.searchsorted(self.primes, n)
        return bool(i < len(self.primes) and self.primes[i] == n)

    # -- binary cache ---------------------------------------------------------
    def save(self, path: Union[str, os.PathLike]) -> None:
        header = np.array([(_MAGIC, self.limit, len(self.primes))], dtype=_HEADER)
        with open(path, "wb") as fh:
            fh.write(header.tobytes())
            fh.write(self.primes.astype("<i8").tobytes())

    @classmethod
    def load(cls, path: Union[str, os.PathLike]) -> PrimeTable:
        raw = Path(path).read_bytes()
        if len(raw) < _HEADER.itemsize:
            raise ValueError("truncated prime cache")
        head = np.frombuffer(raw[: _HEADER.itemsize], dtype=_HEADER)[0]
        if head["magic"] != _MAGIC:
            raise ValueError("not a prime cache file")
        primes = np.frombuffer(raw[_HEADER.itemsize:], dtype="<i8").astype(np.int64)
        if len(primes) != int(head["count"]):
            raise ValueError("prime cache length mismatch")
        return cls(int(head["limit"]), primes)


def sieve(limit: int, cache: Optional[Union[str, os.PathLike]] = None) -> PrimeTable:
    """Segmented sieve of Eratosthenes for primes <= limit.

    With ``cache`` set, a table with a sufficient limit is read from that file
    (and trimmed), otherwise the freshly sieved table is written there.
    """
    limit = int(limit)
    if limit > MAX_LIMIT:
        raise LimitTooLarge(f"limit {limit} exceeds {MAX_LIMIT}")
    if limit < 2:
        raise ValueError("limit must be at least 2")
    if cache is not None and Path(cache).exists():
        try:
            t = PrimeTable.load(cache)
            if t.limit >= limit:
                return PrimeTable(limit, t.primes[: np.searchsorted(t.primes, limit, side="right")].copy())
        except ValueError:
            pass
    root = math.isqrt(limit)
    base = _small_primes(root)
    chunks = [base]
    lo = root + 1
    while lo <= limit:
        hi = min(lo + _SEGMENT, limit + 1)
        seg = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, -(-lo // p) * p)
            seg[start - lo::p] = False
        chunks.append(np.flatnonzero(seg).astype(np.int64) + lo)
        lo = hi
    table = PrimeTable(limit, np.concatenate(chunks))
    if cache is not None:
        table.save(cache)
    return table


# -- von Mangoldt weights --------------------------------------------------

def von_mangoldt(n: int) -> float:
    """Lambda(n): log p if n is a power of the prime p, else 0."""
    if n < 2:
        return 0.0
    p = _smallest_factor(n)
    m = n
    while m % p == 0:
        m //= p
    return math.log(p) if m == 1 else 0.0


def _smallest_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return d
    return n


def selberg_factor(n, x):
    """The weight Lambda_x(n)/Lambda(n) as a function of real n (vectorized)."""
    n = np.asarray(n, dtype=float)
    lx = math.log(x)
    ln = np.log(n)
    out = np.zeros_like(n)
    a = ln <= lx
    b = (ln > lx) & (ln <= 2 * lx)
    c = (ln > 2 * lx) & (ln <= 3 * lx)
    out[a] = 1.0
    out[b] = ((3 * lx - ln[b]) ** 2 - 2 * (2 * lx - ln[b]) ** 2) / (2 * lx * lx)
    out[c] = (3 * lx - ln[c]) ** 2 / (2 * lx * lx)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class LambdaXWeight:
    n: int
    x: float
    value: float


def lambda_x(n: int, x: float) -> float:
    """Selberg's truncated von Mangoldt weight Lambda_x(n)."""
    if n < 2 or x < 2:
        raise ValueError("need n >= 2 and x >= 2")
    lam = von_mangoldt(n)
    if lam == 0.0:
        return 0.0
    return lam * selberg_factor(n, x)


def prime_powers(limit: float, table: PrimeTable):
    """All prime powers n = p^r <= limit as (n, log p) float arrays, sorted by n."""
    ps = table.upto(limit)
    ns = [ps.astype(float)]
    logs = [np.log(ps.astype(float))]
    r = 2
    while 2.0 ** r <= limit:
        base = ps[: np.searchsorted(ps, math.floor(limit ** (1.0 / r)) + 1)]
        pw = base.astype(float) ** r
        keep = pw <= limit
        ns.append(pw[keep])
        logs.append(np.log(base[keep].astype(float)))
        r += 1
    n = np.concatenate(ns)
    lp = np.concatenate(logs)
    order = np.argsort(n, kind="stable")
    return n[order], lp[order]


def _fsum_complex(z: np.ndarray) -> complex:
    return complex(math.fsum(z.real), math.fsum(z.imag))


def r_xt(x: float, t: float, sigma: float, table: PrimeTable) -> complex:
    """r(x, t) = sum_{n <= x^3} Lambda_x(n) n^{-sigma - i t}."""
    lim = x ** 3
    if table.limit < math.floor(lim):
        raise TableTooSmall(f"need primes up to x^3 = {lim:.6g}")
    n, lp = prime_powers(lim, table)
    w = lp * selberg_factor(n, x)
    ln = np.log(n)
    terms = w * np.exp(-sigma * ln) * np.exp(-1j * t * ln)
    return _fsum_complex(terms)


def selberg_sine_sum(x: float, t: float, sigma: float, table: PrimeTable) -> float:
    """sum_{n <= x^3} Lambda_x(n) sin(t log n) / (n^sigma log n)."""
    lim = x ** 3
    if table.limit < math.floor(lim):
        raise TableTooSmall(f"need primes up to x^3 = {lim:.6g}")
    n, lp = prime_powers(lim, table)
    ln = np.log(n)
    w = lp * selberg_factor(n, x)
    return math.fsum(w * np.sin(t * ln) * np.exp(-sigma * ln) / ln)


def prime_cos_sum(X: float, h: float, table: PrimeTable) -> float:
    """sum_{p <= X} (1 - cos(h log p)) / p, accumulated with fsum."""
    ps = table.upto(X).astype(float)
    s = np.sin(0.5 * h * np.log(ps))
    return math.fsum(2.0 * s * s / ps)


def weighted_logp_sum(X: float, table: PrimeTable) -> float:
    """sum_{p <= X} log p / p; raises if the bound log X is violated."""
    ps = table.upto(X).astype(float)
    s = math.fsum(np.log(ps) / ps)
    if s > math.log(X):
        raise ArithmeticError(f"sum log p / p = {s} exceeds log X = {math.log(X)}")
    return s


@dataclass(frozen=True)
class PrimeLemmaCheck:
    X: float
    h: float
    value: float
    bound: float
    branch: str
    holds: bool


def prime_lemma_check(X: float, h: float, table: PrimeTable) -> PrimeLemmaCheck:
    """Compare the cosine prime sum against log(h log X) within 13.88 + 3/log^2 X,
    or against 2.02 + 3/log^2 X when h < log 2/log X."""
    lX = math.log(X)
    s = prime_cos_sum(X, h, table)
    tail = 3.0 / lX ** 2
    if h >= math.log(2) / lX:
        dev = abs(math.log(h * lX) - s)
        return PrimeLemmaCheck(X, h, dev, 13.88 + tail, "large_h", dev <= 13.88 + tail)
    return PrimeLemmaCheck(X, h, s, 2.02 + tail, "small_h", s <= 2.02 + tail)


def lemma_grid(Xs=(10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6, 10 ** 7)):
    """(X, h) pairs h = log 2/log X + j/20 (j = 0..19, h <= 1) plus small-h probes."""
    out = []
    for X in Xs:
        h0 = math.log(2) / math.log(X)
        for j in range(20):
            h = h0 + j / 20
            if h <= 1:
                out.append((X, h))
        for f in (0.0, 0.25, 0.5, 0.999):
            out.append((X, f * h0))
    return out
