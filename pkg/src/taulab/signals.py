"""Bounded signals a(t), their Laplace transforms and the boundary quotient."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import kernels
from .arith import MangoldtTable, pnt_signal_b_array
from .errors import DomainError, RangeError
from .quadrature import QuadResult, integrate
from .zeta import ZetaEvaluator, default_evaluator

DELTA_Q = 1e-3
_CIRCLE_POINTS = 32


@dataclass(frozen=True, eq=False)
class BoundedSignal:
    """A bounded a(t) on [0, inf), zero for t < 0.

    ``eval`` and ``transform`` are vectorized. ``transform_ok`` says where the
    closed-form transform may be used. The optional exact hooks let signals
    with piecewise structure bypass quadrature:

    * ``truncated(z, T)``     -> f_T(z)
    * ``scaled_head(z, T)``   -> e^{Tz} f_T(z)
    * ``scaled_tail(z, T)``   -> e^{Tz} (f_T(z) - f(z))
    """

    name: str
    eval: Callable[[np.ndarray], np.ndarray]
    sup_bound: float
    transform: Optional[Callable] = None
    transform_ok: Optional[Callable[[np.ndarray], np.ndarray]] = None
    window_B: Optional[float] = None
    derivative: Optional[Callable] = None
    breakpoints: tuple = ()
    axis_poles: tuple = ()
    taylor_radius: float = 0.1
    horizon: float = math.inf
    truncated: Optional[Callable] = None
    scaled_head: Optional[Callable] = None
    scaled_tail: Optional[Callable] = None

    def __call__(self, t):
        return self.eval(np.asarray(t, dtype=np.float64))

    def has_transform_at(self, z) -> bool:
        if self.transform is None:
            return False
        if self.transform_ok is None:
            return True
        return bool(np.all(self.transform_ok(np.asarray(z, dtype=np.complex128))))


def _max_panel(z) -> float | None:
    im = float(np.max(np.abs(np.imag(z))))
    return math.pi / im if im > 0 else None


def truncated_transform(s: BoundedSignal, z: complex, T: float) -> QuadResult:
    """f_T(z) = int_0^T a(t) e^{-zt} dt."""
    if T < 0:
        raise ValueError("T must be >= 0")
    if T == 0:
        return QuadResult(0j, 0.0, True)
    if T > s.horizon:
        raise RangeError(f"T={T} beyond the horizon {s.horizon} of {s.name}")
    if s.truncated is not None:
        return QuadResult(complex(s.truncated(z, T)), 0.0, True)
    z = complex(z)
    bps = [b for b in s.breakpoints if 0 < b < T]
    res = integrate(
        lambda t: s.eval(t) * np.exp(-z * t), 0.0, T, max_panel=_max_panel(z), breakpoints=bps, reltol=1e-12, abstol=1e-15
    )
    ok = res.converged and res.error <= max(1e-10 * abs(res.value), 1e-13)
    return QuadResult(res.value, res.error, ok)


def full_transform(s: BoundedSignal, z: complex, tol: float = 1e-8) -> QuadResult:
    """f(z): closed form where available, else truncated quadrature plus tail bound."""
    z = complex(z)
    if s.has_transform_at(z):
        return QuadResult(complex(s.transform(z)), 0.0, True)
    x = z.real
    if x <= 0:
        raise DomainError(f"{s.name}: no transform or continuation available at z={z}")
    M = s.sup_bound
    cut = math.log(max(M / (x * tol), 2.0)) / x
    cut = min(cut, s.horizon)
    head = truncated_transform(s, z, cut)
    tail = M * math.exp(-x * cut) / x
    err = head.error + tail
    return QuadResult(head.value, err, head.converged and tail <= tol)


def transform_values(s: BoundedSignal, zs) -> np.ndarray:
    """Vectorized f(z) used by the contour and boundary integrals."""
    zs = np.asarray(zs, dtype=np.complex128)
    if s.transform is not None and (s.transform_ok is None or np.all(s.transform_ok(zs))):
        return np.asarray(s.transform(zs), dtype=np.complex128)
    flat = zs.ravel()
    return np.array([full_transform(s, z).value for z in flat]).reshape(zs.shape)


def partial_integral(s: BoundedSignal, T: float) -> QuadResult:
    """int_0^T a(t) dt; ``T = inf`` returns f(0) when f is analytic on the whole axis."""
    if math.isinf(T):
        if s.window_B is None or not math.isinf(s.window_B) or s.transform is None:
            raise DomainError(f"{s.name}: the improper integral is only available when f extends to the whole axis")
        return full_transform(s, 0.0)
    return truncated_transform(s, 0.0, T)


def taylor_coefficients(s: BoundedSignal, x: float, order: int = 16) -> np.ndarray:
    """c_k = f^(k)(x) / k! for k = 0..order via the trapezoid rule on a circle about x."""
    r = s.taylor_radius
    theta = 2 * np.pi * np.arange(_CIRCLE_POINTS) / _CIRCLE_POINTS
    if not s.has_transform_at(x + r * np.exp(1j * theta)):
        if x <= 0:
            raise DomainError(f"{s.name}: no transform near z={x}")
        r = min(r, 0.5 * x)
    vals = transform_values(s, x + r * np.exp(1j * theta))
    coeffs = np.fft.fft(vals) / _CIRCLE_POINTS
    return coeffs[: order + 1] / r ** np.arange(order + 1)


def quotient_array(s: BoundedSignal, x: float, ys, delta_q: float = DELTA_Q) -> np.ndarray:
    """q(x+iy) = (f(x+iy) - f(x)) / (iy) for an array of y."""
    ys = np.asarray(ys, dtype=np.float64)
    out = np.empty(ys.shape, np.complex128)
    small = np.abs(ys) < delta_q
    if (~small).any():
        fx = transform_values(s, np.array([x + 0j]))[0]
        iy = 1j * ys[~small]
        out[~small] = (transform_values(s, x + iy) - fx) / iy
    if small.any():
        c = taylor_coefficients(s, x)
        iy = 1j * ys[small]
        acc = np.zeros(iy.shape, np.complex128)
        for ck in c[:0:-1]:
            acc = acc * iy + ck
        out[small] = acc
    return out


def quotient_q(s: BoundedSignal, x: float, y: float, delta_q: float = DELTA_Q) -> complex:
    if x < 0 or (x == 0 and not s.has_transform_at(1j * y)):
        raise DomainError(f"{s.name}: quotient needs x > 0 or an extension to the axis")
    return complex(quotient_array(s, x, np.array([y]), delta_q)[0])


# -- signal library --------------------------------------------------------------


def exp_decay(alpha: float = 1.0) -> BoundedSignal:
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return BoundedSignal(
        name=f"exp_decay({alpha:g})",
        eval=lambda t: np.where(t >= 0, np.exp(-alpha * np.maximum(t, 0.0)), 0.0).astype(np.complex128),
        sup_bound=1.0,
        transform=lambda z: 1.0 / (np.asarray(z) + alpha),
        transform_ok=lambda z: np.asarray(z) != -alpha,
        window_B=math.inf,
        derivative=lambda z: -1.0 / (np.asarray(z) + alpha) ** 2,
        taylor_radius=min(0.1, 0.5 * alpha),
    )


def _sinc_eval(t):
    t = np.asarray(t, dtype=np.float64)
    return np.where(t >= 0, np.sinc(t / np.pi), 0.0).astype(np.complex128)


def _sinc_ok(z):
    z = np.asarray(z)
    # arctan's cuts lie on the imaginary axis beyond +-i
    return ~((z.real == 0) & (np.abs(z.imag) >= 1.0))


def sinc() -> BoundedSignal:
    return BoundedSignal(
        name="sinc",
        eval=_sinc_eval,
        sup_bound=1.0,
        transform=lambda z: np.pi / 2 - np.arctan(np.asarray(z, dtype=np.complex128)),
        transform_ok=_sinc_ok,
        window_B=1.0,
        derivative=lambda z: -1.0 / (1.0 + np.asarray(z) ** 2),
        taylor_radius=0.1,
    )


def sine(omega: float = 1.0) -> BoundedSignal:
    if omega <= 0:
        raise ValueError("omega must be positive")
    return BoundedSignal(
        name=f"sine({omega:g})",
        eval=lambda t: np.where(t >= 0, np.sin(omega * np.maximum(t, 0.0)), 0.0).astype(np.complex128),
        sup_bound=1.0,
        transform=lambda z: omega / (np.asarray(z) ** 2 + omega**2),
        transform_ok=lambda z: np.asarray(z) ** 2 != -(omega**2),
        window_B=None,
        derivative=lambda z: -2 * omega * np.asarray(z) / (np.asarray(z) ** 2 + omega**2) ** 2,
        axis_poles=(-omega, omega),
        taylor_radius=min(0.1, 0.5 * omega),
    )


def pnt_b(table: MangoldtTable, evaluator: ZetaEvaluator | None = None) -> BoundedSignal:
    """b(t) = e^-t (psi(e^t) - floor(e^t)) with transform g(z)."""
    ev = evaluator or default_evaluator()
    excess = table.excess()
    n = np.arange(1, table.limit + 1)
    M = max(1.0, float(np.max(np.abs(excess[1:]) / n)))
    horizon = math.log(table.limit)

    def truncated(z, T):
        zs = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        vals = kernels.pnt_step_transform(excess, math.exp(T), zs.ravel()).reshape(zs.shape)
        return complex(vals[0]) if np.ndim(z) == 0 else vals

    def ok(z):
        z = np.asarray(z)
        w = z + 1.0
        return (w.real > -1.0) & (np.abs(w.imag) <= ev.max_imag) & (z != -1.0)

    return BoundedSignal(
        name="pnt_b",
        eval=lambda t: pnt_signal_b_array(t, table).astype(np.complex128),
        sup_bound=M,
        transform=ev.g_transform,
        transform_ok=ok,
        window_B=math.inf,
        taylor_radius=0.1,
        horizon=horizon,
        truncated=truncated,
    )


# -- piecewise-constant signals with exact transforms -----------------------------


def _segment_exp(z, a, b):
    """int_a^b e^{-z t} dt for array z (broadcast against a, b)."""
    z = np.asarray(z, dtype=np.complex128)
    with np.errstate(invalid="ignore", divide="ignore"):
        val = (np.exp(-z * a) - np.exp(-z * b)) / z
    return np.where(z == 0, b - a, val)


@dataclass(frozen=True, eq=False)
class StepData:
    edges: np.ndarray  # 0 = t_0 < ... < t_K
    values: np.ndarray  # value on [t_j, t_{j+1}); zero after t_K


def step_signal(edges, values, name: str = "step") -> BoundedSignal:
    edges = np.asarray(edges, dtype=np.float64)
    values = np.asarray(values, dtype=np.complex128)
    if edges[0] != 0 or np.any(np.diff(edges) <= 0) or len(values) != len(edges) - 1:
        raise ValueError("edges must start at 0 and increase; one value per piece")
    M = float(np.max(np.abs(values)))
    lo, hi = edges[:-1], edges[1:]

    def ev(t):
        t = np.asarray(t, dtype=np.float64)
        idx = np.searchsorted(edges, t, side="right") - 1
        inside = (t >= 0) & (t < edges[-1])
        return np.where(inside, values[np.clip(idx, 0, len(values) - 1)], 0.0)

    def transform(z):
        zz = np.asarray(z, dtype=np.complex128)
        out = (values * _segment_exp(zz[..., None], lo, hi)).sum(axis=-1)
        return complex(out) if np.ndim(z) == 0 else out

    def truncated(z, T):
        zz = np.asarray(z, dtype=np.complex128)
        a, b = np.minimum(lo, T), np.minimum(hi, T)
        out = (values * _segment_exp(zz[..., None], a, b)).sum(axis=-1)
        return complex(out) if np.ndim(z) == 0 else out

    def scaled_head(z, T):
        # e^{Tz} int_a^b e^{-zt} dt = int_{T-b}^{T-a} e^{zs} ds
        zz = np.asarray(z, dtype=np.complex128)
        a, b = np.minimum(lo, T), np.minimum(hi, T)
        out = (values * _segment_exp(-zz[..., None], T - b, T - a)).sum(axis=-1)
        return complex(out) if np.ndim(z) == 0 else out

    def scaled_tail(z, T):
        zz = np.asarray(z, dtype=np.complex128)
        a, b = np.maximum(lo, T), np.maximum(hi, T)
        out = -(values * _segment_exp(zz[..., None], a - T, b - T)).sum(axis=-1)
        return complex(out) if np.ndim(z) == 0 else out

    return BoundedSignal(
        name=name,
        eval=ev,
        sup_bound=M,
        transform=transform,
        window_B=math.inf,
        breakpoints=tuple(edges[1:]),
        truncated=truncated,
        scaled_head=scaled_head,
        scaled_tail=scaled_tail,
    )


def random_step_signals(count: int, seed: int = 0, M: float = 1.0, span: float = 20.0, max_pieces: int = 40):
    """Seeded +-M step signals on uniform random partitions of [0, span]."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        k = int(rng.integers(1, max_pieces + 1))
        cuts = np.sort(rng.uniform(0.0, span, size=k - 1))
        edges = np.concatenate(([0.0], cuts, [span]))
        edges = edges[np.concatenate(([True], np.diff(edges) > 0))]
        values = M * rng.choice([-1.0, 1.0], size=len(edges) - 1)
        out.append(step_signal(edges, values, name=f"step[{seed}:{i}]"))
    return out


LIBRARY = ("exp_decay", "sinc", "sine", "pnt_b", "step")


def make_signal(name: str, *, alpha: float = 1.0, omega: float = 1.0, table: MangoldtTable | None = None,
                seed: int = 0) -> BoundedSignal:
    if name == "exp_decay":
        return exp_decay(alpha)
    if name == "sinc":
        return sinc()
    if name == "sine":
        return sine(omega)
    if name == "pnt_b":
        if table is None:
            raise ValueError("pnt_b needs a MangoldtTable")
        return pnt_b(table)
    if name == "step":
        return random_step_signals(1, seed)[0]
    raise ValueError(f"unknown signal {name!r}; choose from {', '.join(LIBRARY)}")
