"""Newman's contour: the paths, the kernel, the three-leg decomposition and its bounds.

For a bounded a(t) with transform f analytic near [-iR, iR],

    f_T(0) - f(0) = I1 + I2 + I3

with I1 over the right semicircle (uses f_T - f), I2 over the left one
(uses f_T and f(0) only) and I3 along the imaginary axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PoleError, WindowError
from .quadrature import NODES, WEIGHTS, QuadResult, integrate
from .signals import (
    BoundedSignal,
    full_transform,
    partial_integral,
    quotient_array,
    transform_values,
    truncated_transform,
)

# e^{xT} amplification allowed before (f_T - f) switches from subtraction to a tail integral
_SUBTRACT_MAX_XT = 8.0
IDENTITY_TOL = 1e-8
IDENTITY_TOL_PNT = 1e-4


def kernel(z, T: float, R: float):
    """e^{Tz} (1/z + z/R^2)."""
    z = np.asarray(z, dtype=np.complex128)
    if np.any(z == 0):
        raise PoleError("kernel has a pole at z = 0")
    out = np.exp(T * z) * (1.0 / z + z / R**2)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ContourPath:
    """One of the three oriented pieces of Newman's contour.

    ``right`` runs over theta in (-pi/2, pi/2) on |z| = R, ``left`` over
    (pi/2, 3pi/2), both counter-clockwise; ``axis`` runs from +iR to -iR.
    """

    kind: str
    radius: float

    def __post_init__(self):
        if self.kind not in ("right", "left", "axis"):
            raise ValueError(f"unknown path kind {self.kind!r}")
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def interval(self) -> tuple[float, float]:
        if self.kind == "right":
            return -math.pi / 2, math.pi / 2
        if self.kind == "left":
            return math.pi / 2, 3 * math.pi / 2
        return 0.0, 1.0

    def point(self, s):
        s = np.asarray(s, dtype=np.float64)
        if self.kind == "axis":
            return 1j * self.radius * (1.0 - 2.0 * s)
        return self.radius * np.exp(1j * s)

    def velocity(self, s):
        s = np.asarray(s, dtype=np.float64)
        if self.kind == "axis":
            return np.full(s.shape, -2j * self.radius)
        return 1j * self.radius * np.exp(1j * s)

    def rule(self, panels: int, breakpoints=()):
        """Points z_j and complex weights w_j with sum w_j F(z_j) ~ int_path F dz."""
        a, b = self.interval
        edges = np.unique(np.concatenate((np.linspace(a, b, panels + 1), [p for p in breakpoints if a < p < b])))
        lo, hi = edges[:-1], edges[1:]
        half = 0.5 * (hi - lo)
        s = (0.5 * (hi + lo))[:, None] + half[:, None] * NODES[None, :]
        w = half[:, None] * WEIGHTS[None, :]
        s, w = s.ravel(), w.ravel()
        return self.point(s), w * self.velocity(s)

    def arc_length(self, panels: int = 8) -> float:
        _, w = self.rule(panels)
        return float(np.abs(w).sum())


# -- scaled transforms: e^{Tz} folded into the integrand ------------------------------


def _laplace_batch(s: BoundedSignal, zs: np.ndarray, t0: float, t1: float, shift: float, tol: float = 1e-13):
    """int_{t0}^{t1} a(t) e^{-z (t - shift)} dt for every z, on a shared panel grid refined until stable."""
    zs = np.asarray(zs, dtype=np.complex128)
    if t1 <= t0:
        return np.zeros(zs.shape, np.complex128), 0.0, True
    zmax = float(np.max(np.abs(zs))) if zs.size else 0.0
    h = 1.5 / max(zmax, 1e-3)
    cuts = sorted({t0, t1, *(b for b in s.breakpoints if t0 < b < t1)})

    def run(h):
        edges = []
        for a, b in zip(cuts[:-1], cuts[1:]):
            n = max(1, math.ceil((b - a) / h))
            edges.append(np.linspace(a, b, n + 1)[:-1])
        edges = np.concatenate(edges + [[cuts[-1]]])
        lo, hi = edges[:-1], edges[1:]
        half = 0.5 * (hi - lo)
        t = ((0.5 * (hi + lo))[:, None] + half[:, None] * NODES[None, :]).ravel()
        w = (half[:, None] * WEIGHTS[None, :]).ravel() * s.eval(t)
        out = np.empty(zs.shape, np.complex128)
        flat = zs.ravel()
        res = out.reshape(-1)
        for start in range(0, flat.size, 256):
            zc = flat[start : start + 256, None]
            res[start : start + 256] = (np.exp(-zc * (t[None, :] - shift)) * w[None, :]).sum(axis=1)
        return out

    prev = run(h)
    for _ in range(8):
        h /= 2
        cur = run(h)
        err = float(np.max(np.abs(cur - prev))) if zs.size else 0.0
        if err <= tol * max(1.0, float(np.max(np.abs(cur)))):
            return cur, err, True
        prev = cur
    return cur, err, False


def scaled_head(s: BoundedSignal, zs, T: float):
    """e^{Tz} f_T(z), computed without forming e^{Tz} separately."""
    zs = np.asarray(zs, dtype=np.complex128)
    if s.scaled_head is not None:
        return np.asarray(s.scaled_head(zs, T)), 0.0, True
    if s.truncated is not None:
        return np.exp(T * zs) * np.asarray(s.truncated(zs, T)), 0.0, True
    return _laplace_batch(s, zs, 0.0, T, shift=T)


def scaled_tail(s: BoundedSignal, zs, T: float, R: float, tol: float = 1e-12):
    """e^{Tz} (f_T(z) - f(z)) for Re z > 0."""
    zs = np.asarray(zs, dtype=np.complex128)
    if s.scaled_tail is not None:
        return np.asarray(s.scaled_tail(zs, T)), 0.0, True
    out = np.empty(zs.shape, np.complex128)
    x = zs.real
    direct = x * T <= _SUBTRACT_MAX_XT
    err, ok = 0.0, True
    if direct.any():
        zd = zs[direct]
        if s.truncated is not None:
            head = np.asarray(s.truncated(zd, T))
        else:
            head, e1, ok1 = _laplace_batch(s, zd, 0.0, T, shift=0.0, tol=1e-15)
            err, ok = err + e1 * math.exp(_SUBTRACT_MAX_XT), ok and ok1
        out[direct] = np.exp(T * zd) * (head - transform_values(s, zd))
    if (~direct).any():
        zt = zs[~direct]
        xmin = float(zt.real.min())
        # |a| <= M so the dropped piece is below M e^{-x S} / x; the kernel then multiplies by 2x/R^2
        span = math.log(max(2 * s.sup_bound / (R**2 * tol), 2.0)) / xmin
        end = min(T + span, s.horizon)
        tail, e2, ok2 = _laplace_batch(s, zt, T, end, shift=T)
        out[~direct] = -tail
        dropped = 2 * s.sup_bound * math.exp(-xmin * (end - T)) / R**2
        err, ok = err + e2 + dropped, ok and ok2 and dropped <= 1e-9
    return out, err, ok


# -- the decomposition ---------------------------------------------------------------


@dataclass(frozen=True)
class ContourDecomposition:
    R: float
    T: float
    I1: complex
    I2: complex
    I3: complex
    lhs: complex
    residual: float
    bound_I1: float
    bound_I2: float
    rhs_total: float
    quad_error: float
    converged: bool

    def within_bounds(self, slack: float = 1e-9) -> bool:
        return abs(self.I1) <= self.bound_I1 + slack and abs(self.I2) <= self.bound_I2 + slack


def _check_window(s: BoundedSignal, R: float) -> None:
    if s.window_B is None:
        raise WindowError(f"{s.name} has no analytic extension to the imaginary axis (pole on the axis)")
    if R >= s.window_B:
        raise WindowError(f"R={R} must be below the window B={s.window_B} of {s.name}")


def _arc_leg(s: BoundedSignal, R: float, T: float, kind: str, panels: int):
    path = ContourPath(kind, R)
    z, w = path.rule(panels)
    if kind == "right":
        vals, err, ok = scaled_tail(s, z, T, R)
    else:
        head, err, ok = scaled_head(s, z, T)
        f0 = full_transform(s, 0.0).value
        vals = head - f0 * np.exp(T * z)
    integrand = vals * (1.0 / z + z / R**2)
    return complex(np.dot(integrand, w)) / (2j * math.pi), err, ok


def _axis_leg(s: BoundedSignal, R: float, T: float, panels: int):
    path = ContourPath("axis", R)
    z, w = path.rule(panels, breakpoints=(0.5,))
    f0 = full_transform(s, 0.0).value
    integrand = (transform_values(s, z) - f0) * kernel(z, T, R)
    return -complex(np.dot(integrand, w)) / (2j * math.pi)


def _legs(s, R, T, panels):
    i1, e1, ok1 = _arc_leg(s, R, T, "right", panels)
    i2, e2, ok2 = _arc_leg(s, R, T, "left", panels)
    i3 = _axis_leg(s, R, T, panels)
    return np.array([i1, i2, i3]), e1 + e2, ok1 and ok2


def newman_decomposition(s: BoundedSignal, R: float, T: float, tol: float | None = None) -> ContourDecomposition:
    _check_window(s, R)
    if T <= 0:
        raise ValueError("T must be positive")
    if tol is None:
        tol = IDENTITY_TOL_PNT if s.name == "pnt_b" else IDENTITY_TOL
    panels = max(8, math.ceil(2 * T * R / math.pi) + 4)
    coarse, err_c, ok_c = _legs(s, R, T, panels)
    fine, err_f, ok_f = _legs(s, R, T, 2 * panels)
    quad_err = float(np.max(np.abs(fine - coarse))) + err_f
    I1, I2, I3 = (complex(v) for v in fine)
    head = truncated_transform(s, 0.0, T)
    f0 = full_transform(s, 0.0)
    lhs = head.value - f0.value
    M = s.sup_bound
    b1 = M / R
    b2 = M / R + abs(f0.value) / (math.e * R * T)
    residual = abs(lhs - (I1 + I2 + I3))
    converged = ok_f and head.converged and f0.converged and quad_err <= tol
    return ContourDecomposition(
        R=R,
        T=T,
        I1=I1,
        I2=I2,
        I3=I3,
        lhs=lhs,
        residual=residual,
        bound_I1=b1,
        bound_I2=b2,
        rhs_total=2 * M / R + abs(f0.value) / (math.e * R * T) + abs(I3),
        quad_error=quad_err,
        converged=converged,
    )


def axis_integrand(s: BoundedSignal, x: float, R: float, T: float, ys) -> np.ndarray:
    """q(x+iy) (1 - y^2/R^2) e^{iTy} = {f(x+iy) - f(x)} (1/(iy) + iy/R^2) e^{iTy}."""
    ys = np.asarray(ys, dtype=np.float64)
    return quotient_array(s, x, ys) * (1.0 - ys**2 / R**2) * np.exp(1j * T * ys)


def axis_integral_I3(s: BoundedSignal, R: float, T: float, tol: float = 1e-10) -> QuadResult:
    """(1/2pi) int_{-R}^{R} {f(iy) - f(0)} (1/(iy) + iy/R^2) e^{iTy} dy."""
    _check_window(s, R)
    panel = R / 8 if T == 0 else min(R / 8, math.pi / (2 * T))
    res = integrate(lambda y: axis_integrand(s, 0.0, R, T, y), -R, R, max_panel=panel, breakpoints=(0.0,),
                    abstol=1e-15, reltol=1e-12)
    scale = 1 / (2 * math.pi)
    err = res.error * scale
    return QuadResult(res.value * scale, err, res.converged and err <= max(tol, tol * abs(res.value)))


@dataclass(frozen=True)
class BoundReport:
    R: float
    T: float
    lhs: float
    term_sup: float  # 2M/R
    term_f0: float  # |f(0)|/(eRT)
    term_axis: float  # |I3|
    rhs: float
    holds: bool
    converged: bool


def bound_report(s: BoundedSignal, R: float, T: float, slack: float = 1e-9) -> BoundReport:
    """Both sides of |int_0^T a - f(0)| <= 2M/R + |f(0)|/(eRT) + |I3|."""
    _check_window(s, R)
    if T <= 0:
        raise ValueError("T must be positive")
    part = partial_integral(s, T)
    f0 = full_transform(s, 0.0)
    i3 = axis_integral_I3(s, R, T)
    lhs = abs(part.value - f0.value)
    t1 = 2 * s.sup_bound / R
    t2 = abs(f0.value) / (math.e * R * T)
    t3 = abs(i3.value)
    rhs = t1 + t2 + t3
    return BoundReport(R, T, lhs, t1, t2, t3, rhs, lhs <= rhs + slack, part.converged and f0.converged and i3.converged)
