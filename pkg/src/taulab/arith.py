"""Von Mangoldt table, Chebyshev psi, prime counting and the PNT signal b(t)."""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .errors import CapacityError, RangeError

CACHE_MAGIC = b"TAULAB01"
# lambda, psi prefix sums, prime-count prefix (8 + 8 + 4) plus sieve scratch
BYTES_PER_ENTRY = 24
DEFAULT_MEMORY_BUDGET = 3 * 2**30


@dataclass(frozen=True)
class MangoldtTable:
    """Sieved Lambda(n) for 1 <= n <= limit, with prefix sums for psi and pi.

    ``lam[0]`` is a padding zero so that ``lam[n]`` is Lambda(n).
    """

    limit: int
    lam: np.ndarray
    primes: np.ndarray
    psi_prefix: np.ndarray = field(repr=False)
    pi_prefix: np.ndarray = field(repr=False)

    @classmethod
    def from_lambda(cls, lam: np.ndarray, primes: np.ndarray | None = None) -> "MangoldtTable":
        lam = np.ascontiguousarray(lam, dtype=np.float64)
        limit = lam.shape[0] - 1
        if primes is None:
            support = np.flatnonzero(lam > 0)
            # a prime is a support point whose log equals Lambda
            primes = support[np.rint(np.exp(lam[support])).astype(np.int64) == support]
        is_prime = np.zeros(limit + 1, dtype=np.int32)
        is_prime[primes] = 1
        for arr in (lam, primes):
            arr.setflags(write=False)
        psi = kernels.prefix_sum(lam)
        pi = np.cumsum(is_prime, dtype=np.int64)
        psi.setflags(write=False)
        pi.setflags(write=False)
        return cls(limit, lam, np.asarray(primes, dtype=np.int64), psi, pi)

    def _check(self, v: float) -> int:
        if v > self.limit:
            raise RangeError(f"v={v} exceeds table limit {self.limit}")
        return int(math.floor(v)) if v >= 0 else 0

    def psi_at(self, n: int) -> float:
        return float(self.psi_prefix[n])

    def excess(self) -> np.ndarray:
        """psi(n) - n for n = 0..limit (the jump-free part of b)."""
        return self.psi_prefix - np.arange(self.limit + 1, dtype=np.float64)


def sieve_mangoldt(N: int, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> MangoldtTable:
    if N < 1:
        raise ValueError("N must be >= 1")
    if N * BYTES_PER_ENTRY > memory_budget:
        raise CapacityError(f"N={N} needs ~{N * BYTES_PER_ENTRY} bytes, budget is {memory_budget}")
    lam, primes = kernels.mangoldt(int(N))
    return MangoldtTable.from_lambda(lam, primes)


def chebyshev_psi(v: float, table: MangoldtTable) -> float:
    if v < 1:
        raise RangeError("psi is tabulated for v >= 1")
    return table.psi_at(table._check(v))


def prime_count(v: float, table: MangoldtTable) -> int:
    if v < 2:
        if v > table.limit:
            raise RangeError(f"v={v} exceeds table limit {table.limit}")
        return 0
    return int(table.pi_prefix[table._check(v)])


def _guard(t, v):
    # rounding t to a double moves e^t by up to |t| half-ulps of e^t
    return (0.5 + np.abs(t)) * np.spacing(v)


def floor_exp(t: float) -> int:
    """floor(e^t); values within the rounding guard of an integer snap to it."""
    v = math.exp(t)
    r = round(v)
    if abs(v - r) <= _guard(t, v):
        return int(r)
    return math.floor(v)


def pnt_signal_b(t: float, table: MangoldtTable) -> float:
    """b(t) = e^-t (psi(e^t) - floor(e^t)); zero for t < 0."""
    if t < 0:
        return 0.0
    n = floor_exp(t)
    if n > table.limit:
        raise RangeError(f"e^t={math.exp(t):.6g} exceeds table limit {table.limit}")
    return (table.psi_at(n) - n) * math.exp(-t)


def pnt_signal_b_array(t: np.ndarray, table: MangoldtTable) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros(t.shape, dtype=np.float64)
    pos = t >= 0
    if not pos.any():
        return out
    v = np.exp(t[pos])
    r = np.rint(v)
    n = np.where(np.abs(v - r) <= _guard(t[pos], v), r, np.floor(v)).astype(np.int64)
    if n.max() > table.limit:
        raise RangeError(f"e^t exceeds table limit {table.limit}")
    out[pos] = (table.psi_prefix[n] - n) / v
    return out


def save_table(table: MangoldtTable, path: str | Path) -> None:
    """Write Lambda(1..N) as little-endian doubles after a 16-byte header."""
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<Q", table.limit))
        fh.write(table.lam[1:].astype("<f8").tobytes())


def load_table(path: str | Path) -> MangoldtTable:
    path = Path(path)
    with path.open("rb") as fh:
        header = fh.read(16)
        if len(header) != 16 or header[:8] != CACHE_MAGIC:
            raise ValueError(f"{path} is not a taulab sieve cache")
        (limit,) = struct.unpack("<Q", header[8:])
        body = np.frombuffer(fh.read(), dtype="<f8")
    if body.shape[0] != limit:
        raise ValueError(f"{path}: header says {limit} entries, found {body.shape[0]}")
    lam = np.concatenate(([0.0], body.astype(np.float64)))
    return MangoldtTable.from_lambda(lam)


def load_or_sieve(N: int, cache_path: str | Path | None = None) -> MangoldtTable:
    """Reuse a cached table covering ``N`` if present, else sieve (and cache)."""
    if cache_path is not None:
        path = Path(cache_path)
        if path.exists():
            table = load_table(path)
            if table.limit >= N:
                return table
        table = sieve_mangoldt(N)
        save_table(table, path)
        return table
    return sieve_mangoldt(N)
