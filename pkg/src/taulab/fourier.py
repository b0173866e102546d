"""Pseudomeasures and pseudofunctions modelled by their time-side pre-image b(t).

Conventions: phi_hat(t) = int phi(y) e^{-ity} dy and F(y) = int b(t) e^{-iyt} dt,
so <F, phi> = int b(t) phi_hat(t) dt and <F, phi e^{iTy}> = int b(t) phi_hat(t - T) dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from scipy.special import expit

from . import kernels
from .contour import axis_integrand
from .errors import DomainError, WindowError
from .quadrature import NODES, WEIGHTS, QuadResult, fixed_panels, integrate
from .signals import BoundedSignal

DEFAULT_CUTOFF = 1000.0
ENVELOPE_ORDER = 10
BOUNDED = "bounded"
VANISHING = "vanishing_at_infinity"


def glue_jet(u, order: int) -> np.ndarray:
    """Derivatives rho^(k)(u), k = 0..order, of rho(u) = 1 / (1 + exp(1/u - 1/(1-u))).

    Taylor-mode recursion for the logistic y = expit(g): y' = y (1 - y) g'.
    Returns an array of shape (order + 1, len(u)).
    """
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    k = np.arange(order + 1)[:, None]
    # Taylor coefficients of g(u + h) = -1/(u+h) + 1/(1-u-h)
    g = -((-1.0) ** k) / u ** (k + 1) + 1.0 / (1.0 - u) ** (k + 1)
    y = np.zeros((order + 1, u.size))
    y[0] = expit(g[0])
    for n in range(1, order + 1):
        yy = y[0:n] - np.array([np.sum(y[: m + 1] * y[m::-1], axis=0) for m in range(n)])
        y[n] = sum(j * g[j] * yy[n - j] for j in range(1, n + 1)) / n
    fact = np.array([math.factorial(i) for i in range(order + 1)], dtype=float)[:, None]
    return y * fact


@dataclass(frozen=True)
class TestFunction:
    """C-infinity trapezoid: 1 on [-plateau, plateau], 0 beyond plateau + shoulder."""

    __test__ = False  # not a pytest class

    plateau: float
    shoulder: float

    def __post_init__(self):
        if self.plateau < 0 or self.shoulder <= 0:
            raise ValueError("plateau must be >= 0 and shoulder > 0")

    @property
    def support(self) -> float:
        return self.plateau + self.shoulder

    def eval(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64)
        u = (np.abs(y) - self.plateau) / self.shoulder
        inner = np.clip(u, 1e-300, 1 - 1e-16)
        val = expit(1.0 / inner - 1.0 / (1.0 - inner))
        return np.where(u <= 0, 1.0, np.where(u >= 1, 0.0, val))

    __call__ = eval

    def hat(self, t) -> np.ndarray:
        """phi_hat(t); real and even."""
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        return kernels.trapezoid_hat(t.ravel(), self.plateau, self.shoulder, NODES, WEIGHTS).reshape(t.shape)

    def derivative_l1(self, k: int) -> float:
        """int |phi^(k)(y)| dy."""
        return self._l1_norms[k]

    @cached_property
    def _l1_norms(self) -> dict:
        x, w = fixed_panels(0.0, 1.0, 1.0 / 256)
        jet = glue_jet(x, ENVELOPE_ORDER)
        norms = {0: 2 * self.plateau + self.shoulder}
        for k in range(1, ENVELOPE_ORDER + 1):
            norms[k] = 2 * float(np.dot(np.abs(jet[k]), w)) / self.shoulder ** (k - 1)
        return norms

    @property
    def hat_bound(self) -> float:
        """C with |phi_hat(t)| <= C / (1 + t^2): the L1 norm of phi - phi''."""
        return self.derivative_l1(0) + self.derivative_l1(2)

    def hat_envelope(self, t) -> np.ndarray:
        """Pointwise bound |phi_hat(t)| <= min_k |phi^(k)|_1 / |t|^k over even k."""
        t = np.abs(np.asarray(t, dtype=np.float64))
        env = np.full(t.shape, self.derivative_l1(0))
        with np.errstate(divide="ignore"):
            for k in range(2, ENVELOPE_ORDER + 1, 2):
                env = np.minimum(env, self.derivative_l1(k) / t**k)
        return env

    def hat_tail(self, L: float) -> float:
        """Bound on int_{|t| > L} |phi_hat(t)| dt."""
        if L <= 0:
            return math.inf
        return 2 * min(self.derivative_l1(k) / ((k - 1) * L ** (k - 1)) for k in range(2, ENVELOPE_ORDER + 1, 2))

    def cutoff_for(self, budget: float, ceiling: float = DEFAULT_CUTOFF) -> float:
        """Smallest L (on a coarse ladder, at most ``ceiling``) with hat_tail(L) <= budget."""
        return _cutoff_ladder(self.hat_tail, budget, ceiling)


@dataclass(frozen=True)
class WindowFunction:
    half_width: float

    def eval(self, y) -> np.ndarray:
        return (np.abs(np.asarray(y, dtype=np.float64)) <= self.half_width).astype(np.float64)

    __call__ = eval


@dataclass(frozen=True, eq=False)
class MultiplierFunction:
    """Phi with a Fourier transform bounded by bound_C / (1 + t^2)."""

    eval: Callable
    fourier_transform: Callable
    bound_C: float
    bandwidth: float
    hat_tail: Callable[[float], float]

    @classmethod
    def from_test_function(cls, phi: TestFunction) -> "MultiplierFunction":
        return cls(phi.eval, phi.hat, phi.hat_bound, phi.support, phi.hat_tail)


@dataclass(frozen=True, eq=False)
class PseudoModel:
    """F(y) = lim_{x->0} int e^{-x|t|} b(t) e^{-iyt} dt with bounded (or vanishing) b."""

    name: str
    b: Callable[[np.ndarray], np.ndarray]
    decay_class: str
    sup_bound: float
    tail_sup: Optional[Callable[[float], float]] = None
    breakpoints: tuple = ()
    spectrum: Optional[Callable] = None

    def __post_init__(self):
        if self.decay_class not in (BOUNDED, VANISHING):
            raise ValueError(f"decay_class must be {BOUNDED!r} or {VANISHING!r}")

    def sup_beyond(self, L: float) -> float:
        """Upper bound for |b(t)| on |t| >= L."""
        if self.tail_sup is None:
            return self.sup_bound
        return min(self.sup_bound, self.tail_sup(max(L, 0.0)))

    def tail_maxima(self, starts, span: float = 10.0, samples: int = 2001) -> list[float]:
        """max |b| sampled on T0 <= |t| <= T0 + span for each T0."""
        out = []
        for t0 in starts:
            t = np.linspace(t0, t0 + span, samples)
            out.append(float(max(np.abs(self.b(t)).max(), np.abs(self.b(-t)).max())))
        return out


def _as_complex(fn):
    return lambda t: np.asarray(fn(np.asarray(t, dtype=np.float64)), dtype=np.complex128)


def exp_abs() -> PseudoModel:
    return PseudoModel("exp_abs", _as_complex(lambda t: np.exp(-np.abs(t))), VANISHING, 1.0,
                       tail_sup=lambda L: math.exp(-L), breakpoints=(0.0,), spectrum=lambda y: 2.0 / (1.0 + y**2))


def lorentzian() -> PseudoModel:
    return PseudoModel("lorentzian", _as_complex(lambda t: 1.0 / (1.0 + t**2)), VANISHING, 1.0,
                       tail_sup=lambda L: 1.0 / (1.0 + L * L), spectrum=lambda y: np.pi * np.exp(-np.abs(y)))


def gaussian() -> PseudoModel:
    return PseudoModel("gaussian", _as_complex(lambda t: np.exp(-(t**2))), VANISHING, 1.0,
                       tail_sup=lambda L: math.exp(-L * L), spectrum=lambda y: np.sqrt(np.pi) * np.exp(-(y**2) / 4))


def heaviside() -> PseudoModel:
    """b = i 1_+(t): its transform is the pseudomeasure 1/(y - i0)."""
    return PseudoModel("heaviside", lambda t: np.where(np.asarray(t) >= 0, 1j, 0j), BOUNDED, 1.0,
                       tail_sup=lambda L: 1.0, breakpoints=(0.0,))


def zero_model() -> PseudoModel:
    return PseudoModel("zero", lambda t: np.zeros(np.shape(t), np.complex128), VANISHING, 0.0,
                       tail_sup=lambda L: 0.0, spectrum=lambda y: np.zeros(np.shape(y)))


MODELS = {"exp_abs": exp_abs, "lorentzian": lorentzian, "gaussian": gaussian, "heaviside": heaviside, "zero": zero_model}

STANDARD_TRAPEZOID = TestFunction(plateau=1.0, shoulder=1.0)


def test_fourier_transform(phi: TestFunction, t) -> complex:
    """phi_hat(t) = int phi(y) e^{-ity} dy; real because phi is even."""
    return complex(phi.hat(np.array([float(t)]))[0])


test_fourier_transform.__test__ = False


def modulated_pair(F: PseudoModel, phi: TestFunction, T: float, cutoff: float = DEFAULT_CUTOFF,
                   tol: float = 1e-6) -> QuadResult:
    """<F(y), phi(y) e^{iTy}> = int b(t) phi_hat(t - T) dt.

    The window |t - T| <= L is the smallest one (L <= cutoff) whose certified
    tail sup|b| * int_{|u|>L} |phi_hat| fits in a tenth of ``tol``; the tail
    bound is included in the returned error.
    """
    sup = max(F.sup_bound, 1e-300)
    L = phi.cutoff_for(0.1 * tol / sup, cutoff)
    lo, hi = T - L, T + L
    panel = math.pi / (2 * phi.support)
    res = integrate(lambda t: F.b(t) * phi.hat(t - T), lo, hi, max_panel=panel,
                    breakpoints=[p for p in F.breakpoints if lo < p < hi], abstol=1e-14, reltol=1e-12)
    tail = F.sup_bound * phi.hat_tail(L)
    err = res.error + tail
    return QuadResult(res.value, err, res.converged and err <= tol)


def pair(F: PseudoModel, phi: TestFunction, cutoff: float = DEFAULT_CUTOFF, tol: float = 1e-6) -> QuadResult:
    """<F, phi> = int b(t) phi_hat(t) dt."""
    return modulated_pair(F, phi, 0.0, cutoff, tol)


def pair_frequency_side(F: PseudoModel, phi: TestFunction, eps: float = 1e-6, cutoff: float = DEFAULT_CUTOFF,
                        t_panel: float = 0.25) -> complex:
    """int F_eps(y) phi(y) dy with F_eps(y) = int_{|t|<=cutoff} e^{-eps|t|} b(t) e^{-iyt} dt by quadrature."""
    edges = sorted({-cutoff, cutoff, *(p for p in F.breakpoints if -cutoff < p < cutoff)})
    ts, wt = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        x, w = fixed_panels(a, b, t_panel)
        ts.append(x)
        wt.append(w)
    t = np.concatenate(ts)
    wt = np.concatenate(wt) * F.b(t) * np.exp(-eps * np.abs(t))
    S, lam = phi.support, phi.plateau
    ycuts = sorted({-S, -lam, lam, S})
    ys, wy = [], []
    for a, b in zip(ycuts[:-1], ycuts[1:]):
        if b > a:
            x, w = fixed_panels(a, b, (b - a) / 8)
            ys.append(x)
            wy.append(w)
    y = np.concatenate(ys)
    wy = np.concatenate(wy) * phi.eval(y)
    Fy = np.array([np.dot(np.exp(-1j * yy * t), wt) for yy in y])
    return complex(np.dot(Fy, wy))


def pair_spectrum(F: PseudoModel, phi: TestFunction) -> complex:
    """int F(y) phi(y) dy from a closed-form spectrum."""
    if F.spectrum is None:
        raise DomainError(f"{F.name} has no closed-form spectrum")
    S, lam = phi.support, phi.plateau
    total = 0j
    for a, b in ((-S, -lam), (-lam, lam), (lam, S)):
        if b > a:
            total += integrate(lambda y: F.spectrum(y) * phi.eval(y), a, b, abstol=1e-15, reltol=1e-13).value
    return total


def _cutoff_ladder(hat_tail: Callable[[float], float], budget: float, ceiling: float) -> float:
    L = 8.0
    while L < ceiling and hat_tail(L) > budget:
        L *= 1.25
    return min(L, ceiling)


def pseudo_product(F: PseudoModel, Phi: MultiplierFunction, cutoff: float = DEFAULT_CUTOFF,
                   tol: float = 1e-6) -> PseudoModel:
    """The model of F * Phi: b*(v) = int b(v - u) Phi_hat(u) / (2 pi) du, truncated at |u| <= L."""
    sup = max(F.sup_bound, 1e-300)
    L = _cutoff_ladder(Phi.hat_tail, 0.1 * tol * 2 * math.pi / sup, cutoff)
    trunc = F.sup_bound * Phi.hat_tail(L) / (2 * math.pi)
    if trunc > tol:
        raise DomainError(f"truncation bound {trunc:.2e} exceeds tolerance {tol:.0e}; raise cutoff")
    u, w = fixed_panels(-L, L, min(0.5, math.pi / (2 * Phi.bandwidth)))
    kern = np.asarray(Phi.fourier_transform(u), dtype=np.complex128) * w / (2 * math.pi)
    l1 = float(np.abs(kern).sum())

    def bstar(v):
        v = np.asarray(v, dtype=np.float64)
        flat = np.atleast_1d(v).ravel()
        res = np.empty(flat.shape, np.complex128)
        for start in range(0, flat.size, 16):
            vv = flat[start : start + 16, None]
            res[start : start + 16] = (F.b(vv - u[None, :]) * kern[None, :]).sum(axis=1)
        return res.reshape(v.shape)

    if F.tail_sup is None:
        tail_sup = None
    else:
        # |b*(v)| <= sup_{|t| >= |v| - L} |b| * |Phi_hat|_1 / 2pi + truncation
        tail_sup = lambda V: F.sup_beyond(max(0.0, V - L)) * l1 + trunc
    return PseudoModel(
        name=f"{F.name}*Phi",
        b=bstar,
        decay_class=F.decay_class,
        sup_bound=F.sup_bound * l1 + trunc,
        tail_sup=tail_sup,
    )


def boundary_pairing(s: BoundedSignal, R: float, T: float, eps: float, tol: float = 1e-9) -> QuadResult:
    """I(T, eps) = int_{-R}^{R} {f(eps+iy) - f(eps)} (1/(iy) + iy/R^2) e^{iTy} dy."""
    if eps <= 0:
        raise DomainError("boundary pairing is evaluated at eps > 0 only")
    if s.window_B is not None and R >= s.window_B:
        raise WindowError(f"R={R} must be below the window B={s.window_B} of {s.name}")
    panel = R / 8 if T == 0 else min(R / 8, math.pi / (2 * T))
    bps = [0.0, *(p for p in s.axis_poles if -R < p < R)]
    res = integrate(lambda y: axis_integrand(s, eps, R, T, y), -R, R, max_panel=panel, breakpoints=bps,
                    abstol=1e-14, reltol=1e-11)
    return QuadResult(res.value, res.error, res.converged and res.error <= max(tol, tol * abs(res.value)))


@dataclass(frozen=True)
class PairingSweep:
    eps: tuple
    T: tuple
    values: np.ndarray = field(repr=False)  # shape (len(eps), len(T))
    converged: bool


def boundary_sweep(s: BoundedSignal, R: float, T_grid, eps_list) -> PairingSweep:
    vals = np.empty((len(eps_list), len(T_grid)), np.complex128)
    ok = True
    for i, eps in enumerate(eps_list):
        for j, T in enumerate(T_grid):
            r = boundary_pairing(s, R, T, eps)
            vals[i, j] = r.value
            ok = ok and r.converged
    return PairingSweep(tuple(eps_list), tuple(T_grid), vals, ok)
