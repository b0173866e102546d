"""End-to-end experiments: the Tauberian bound sweep, the PNT pipeline,
Fatou's theorem for power series and an empirical Wiener-Ikehara check."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .arith import MangoldtTable, chebyshev_psi, prime_count
from .contour import bound_report
from .errors import RangeError, WindowError
from .signals import BoundedSignal, full_transform, partial_integral
from .zeta import ZetaEvaluator, default_evaluator

TAIL_SLACK = 0.05


# -- Tauberian bound sweep ----------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    T: float
    partial: complex
    deviation: float
    bound: float
    rhs_full: float


@dataclass(frozen=True)
class SweepResult:
    signal: str
    B: float
    R: float
    applicable: bool
    f0: complex
    rows: list = field(repr=False)
    tail_max_deviation: float
    bound: float
    holds: bool
    converged: bool

    def summary(self) -> dict:
        return {
            "signal": self.signal,
            "applicable": self.applicable,
            "bound_2M_over_B": self.bound,
            "tail_max_deviation": self.tail_max_deviation,
            "holds": self.holds,
            "converged": self.converged,
        }


def tauber_sweep(s: BoundedSignal, B: float, T_grid, R: float) -> SweepResult:
    """|int_0^T a - f(0)| on a T grid against the limsup bound 2M/B.

    The limsup is read as the maximum over the upper half of the (sorted)
    grid. Signals with no analytic window (pole on the axis) are still swept
    but flagged inapplicable, and no bound is claimed for them.
    """
    if not 0 < R < B:
        raise ValueError("need 0 < R < B")
    applicable = s.window_B is not None
    if applicable and B > s.window_B:
        raise WindowError(f"B={B} exceeds the analytic window {s.window_B} of {s.name}")
    T_grid = sorted(float(T) for T in T_grid)
    if not T_grid or T_grid[0] <= 0:
        raise ValueError("T grid must be non-empty and positive")
    f0 = full_transform(s, 0.0)
    bound = 2 * s.sup_bound / B
    rows, ok = [], f0.converged
    for T in T_grid:
        part = partial_integral(s, T)
        rhs = math.nan
        if applicable:
            rep = bound_report(s, R, T)
            rhs = rep.rhs
            ok = ok and rep.converged
        ok = ok and part.converged
        rows.append(SweepRow(T, part.value, abs(part.value - f0.value), bound, rhs))
    tail = rows[len(rows) // 2 :]
    worst = max(r.deviation for r in tail)
    holds = applicable and worst <= bound + TAIL_SLACK
    return SweepResult(s.name, B, R, applicable, f0.value, rows, worst, bound, holds, ok)


def partial_trace(s: BoundedSignal, T_lo: float, T_hi: float, count: int = 401) -> tuple[np.ndarray, np.ndarray]:
    """int_0^T a on an even grid of T."""
    Ts = np.linspace(T_lo, T_hi, count)
    return Ts, np.array([partial_integral(s, T).value for T in Ts])


def min_window_amplitude(Ts: np.ndarray, values: np.ndarray, window: float = 2 * math.pi) -> float:
    """Smallest (max - min) of Re(values) over all grid windows [T, T + window] inside the range."""
    v = np.real(values)
    worst = math.inf
    for i, T in enumerate(Ts):
        j = np.searchsorted(Ts, T + window, side="right")
        if T + window > Ts[-1] + 1e-12:
            break
        seg = v[i:j]
        worst = min(worst, float(seg.max() - seg.min()))
    return worst


# -- PNT pipeline ---------------------------------------------------------------


@dataclass(frozen=True)
class PntReport:
    vmax: int
    grid: np.ndarray = field(repr=False)
    psi_ratio: np.ndarray = field(repr=False)
    pi_ratio: np.ndarray = field(repr=False)
    S1: float
    S2: float
    reference: float  # g(0), which equals -2 gamma

    @property
    def psi_deviation(self) -> float:
        return abs(self.psi_ratio[-1] - 1.0)

    @property
    def integral_deviation(self) -> float:
        return abs(self.S2 - self.reference)

    def corridor_holds(self, v_min: float = 1e4, lo: float = 0.9, hi: float = 1.1) -> bool:
        sel = self.grid >= v_min
        traces = np.concatenate((self.psi_ratio[sel], self.pi_ratio[sel]))
        return bool(np.all((traces >= lo) & (traces <= hi)))


def log_grid(vmax: float, per_decade: int = 4, start: float = 10.0) -> np.ndarray:
    k = np.arange(0, int(math.floor(per_decade * math.log10(vmax / start) + 1e-9)) + 1)
    grid = np.unique(np.floor(start * 10.0 ** (k / per_decade)).astype(np.int64))
    if grid[-1] != int(vmax):
        grid = np.append(grid, int(vmax))
    return grid


def pnt_sums(vmax: int, table: MangoldtTable) -> tuple[float, float]:
    """S1 = sum_{n<=V} (Lambda(n) - 1)/n and S2 = int_1^V (psi(v) - [v])/v^2 dv.

    S2 is exact for the step function: on [n, n+1) the integrand is
    (psi(n) - n)/v^2.
    """
    V = int(vmax)
    n = np.arange(1, V + 1, dtype=np.float64)
    S1 = math.fsum((table.lam[1 : V + 1] - 1.0) / n)
    ex = table.excess()[1:V]  # psi(n) - n for n = 1..V-1
    m = n[:-1]
    S2 = math.fsum(ex / (m * (m + 1.0)))
    if vmax > V:
        S2 += (table.psi_at(V) - V) * (1.0 / V - 1.0 / vmax)
    return S1, S2


def pnt_report(vmax: float, table: MangoldtTable, zeta: Optional[ZetaEvaluator] = None, per_decade: int = 4) -> PntReport:
    if vmax > table.limit:
        raise RangeError(f"vmax={vmax} exceeds the sieve limit {table.limit}")
    if vmax < 10:
        raise RangeError("vmax must be at least 10")
    ev = zeta or default_evaluator()
    grid = log_grid(vmax, per_decade)
    psi = np.array([chebyshev_psi(v, table) for v in grid])
    pi = np.array([prime_count(v, table) for v in grid], dtype=np.float64)
    S1, S2 = pnt_sums(int(vmax), table)
    ref = ev.g_transform(0.0).real
    return PntReport(int(vmax), grid, psi / grid, pi * np.log(grid) / grid, S1, S2, ref)


# -- Fatou --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FatouSeries:
    name: str
    coeff: Callable[[np.ndarray], np.ndarray]
    limit_value: Optional[complex]
    coeff_decay: bool
    n0: int = 1  # |a_n| < 1e-6 for n >= n0 when coeff_decay


def geometric_log() -> FatouSeries:
    """a_n = 2^-n / n; sum = -log(1 - 1/2) = log 2."""
    return FatouSeries("geometric_log", lambda n: 0.5**n / n, math.log(2.0), True, 16)


def alternating_harmonic() -> FatouSeries:
    return FatouSeries("alternating_harmonic", lambda n: np.where(n % 2 == 1, 1.0, -1.0) / n, math.log(2.0), True,
                       1_000_001)


def harmonic() -> FatouSeries:
    """a_n = 1/n: g(z) = -log(1 - z) is singular at z = 1."""
    return FatouSeries("harmonic", lambda n: 1.0 / n, None, True, 1_000_001)


SERIES = {"geometric_log": geometric_log, "alternating_harmonic": alternating_harmonic, "harmonic": harmonic}


@dataclass(frozen=True)
class FatouRow:
    series: str
    N: int
    partial: float
    deviation: Optional[float]
    tail_coeff_max: float
    divergent: bool


def fatou_sum(series: FatouSeries, N: int) -> FatouRow:
    """s_N with a divergence flag.

    The flag is raised when |s_N - s_{N/2}| exceeds ten times the largest
    |a_n| on (N/2, N]: a convergent tail cannot drift that far over a window
    whose individual terms are so small.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    n = np.arange(1, N + 1, dtype=np.float64)
    a = np.asarray(series.coeff(n), dtype=np.float64)
    half = N // 2
    s_N = math.fsum(a)
    drift = abs(math.fsum(a[half:]))
    tail_max = float(np.abs(a[half:]).max())
    divergent = N >= 4 and drift > 10 * tail_max
    dev = None if series.limit_value is None else abs(s_N - series.limit_value)
    return FatouRow(series.name, N, s_N, dev, tail_max, divergent)


# -- Wiener-Ikehara -------------------------------------------------------------------


@dataclass(frozen=True)
class IkeharaProbe:
    x: float
    max_abs_g: float  # over the y grid, pole-cancelled with the given A
    abs_raw: float  # |-zeta'/zeta(x)| at y = 0


@dataclass(frozen=True)
class IkeharaReport:
    A: float
    t: np.ndarray = field(repr=False)
    ratio: np.ndarray = field(repr=False)  # e^{-t} psi(e^t)
    probes: list
    bounded: bool
    label: str = "empirical"

    @property
    def final_ratio(self) -> float:
        return float(self.ratio[-1])


def ikehara_check(vmax: float, table: MangoldtTable, zeta: Optional[ZetaEvaluator] = None, A: float = 1.0,
                  xs=(1.1, 1.01, 1.001), y_max: float = 2.0, ny: int = 41, bound: float = 10.0) -> IkeharaReport:
    """S(t) = psi(e^t): trace e^{-t} S(t), and probe g(w) = -zeta'/zeta(w) - A/(w - 1) as x -> 1.

    This is an empirical check only; nothing here proves the theorem.
    """
    if vmax > table.limit:
        raise RangeError(f"vmax={vmax} exceeds the sieve limit {table.limit}")
    ev = zeta or default_evaluator()
    grid = log_grid(vmax)
    t = np.log(grid.astype(np.float64))
    ratio = np.array([chebyshev_psi(v, table) for v in grid]) / grid
    ys = np.linspace(-y_max, y_max, ny)
    probes = []
    for x in xs:
        w = x + 1j * ys
        g = ev.neg_log_deriv_regular(w) + (1.0 - A) / (w - 1.0)
        raw = abs(ev.neg_log_deriv_regular(x) + 1.0 / (x - 1.0))
        probes.append(IkeharaProbe(float(x), float(np.abs(g).max()), raw))
    bounded = all(p.max_abs_g < bound for p in probes)
    return IkeharaReport(A, t, ratio, probes, bounded)
