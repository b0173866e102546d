"""Riemann zeta, its logarithmic derivative and the PNT transform g(z).

zeta and zeta' come from one Euler-Maclaurin formula, differentiated term by
term. Near w = 1 the transform

    g(z) = (-zeta'(z+1)/zeta(z+1) - zeta(z+1)) / (z + 1)

is evaluated from its Taylor series, whose coefficients are derived from the
Stieltjes constants by power-series division.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from . import kernels
from .errors import ConfigurationError, DomainError, PoleError, SingularityError

EULER_GAMMA = 0.57721566490153286061


@lru_cache(maxsize=None)
def bernoulli_numbers(m: int) -> tuple[Fraction, ...]:
    """B_0..B_m (B_1 = -1/2) from the standard recurrence."""
    B = [Fraction(1)]
    for n in range(1, m + 1):
        acc = sum(math.comb(n + 1, k) * B[k] for k in range(n))
        B.append(-acc / (n + 1))
    return tuple(B)


def _log_power_derivative(k: int, r: int) -> list[int]:
    """Coefficients c_i with d^r/dx^r [(log x)^k / x] = x^(-1-r) sum_i c_i (log x)^i."""
    c = [0] * (k + 1)
    c[k] = 1
    for j in range(r):
        nxt = [0] * (k + 1)
        for i, ci in enumerate(c):
            if ci:
                nxt[i] -= (1 + j) * ci
                if i:
                    nxt[i - 1] += i * ci
        c = nxt
    return c


@lru_cache(maxsize=None)
def stieltjes_constants(order: int, cutoff: int = 200, corrections: int = 20, dps: int = 50) -> tuple[float, ...]:
    """gamma_0..gamma_{order-1} from their limit definition.

    gamma_k = lim_m sum_{n<=m} (log n)^k / n - (log m)^(k+1) / (k+1); the tail
    beyond ``cutoff`` is replaced by its Euler-Maclaurin expansion.
    """
    B = bernoulli_numbers(2 * corrections)
    out = []
    with mpmath.workdps(dps):
        m = mpmath.mpf(cutoff)
        logm = mpmath.log(m)
        logs = [mpmath.log(n) for n in range(1, cutoff)]
        for k in range(order):
            head = mpmath.fsum(lg**k / n for n, lg in enumerate(logs, start=1))
            val = head + logm**k / m / 2 - logm ** (k + 1) / (k + 1)
            for j in range(1, corrections + 1):
                coeffs = _log_power_derivative(k, 2 * j - 1)
                deriv = mpmath.fsum(ci * logm**i for i, ci in enumerate(coeffs) if ci) / m ** (2 * j)
                bj = B[2 * j]
                val -= mpmath.mpf(bj.numerator) / bj.denominator / mpmath.factorial(2 * j) * deriv
            out.append(float(val))
    return tuple(out)


def _series_divide(num: list[float], den: list[float], n: int) -> list[float]:
    q = []
    for i in range(n):
        s = num[i] - sum(q[j] * den[i - j] for j in range(i))
        q.append(s / den[0])
    return q


def laurent_data(stieltjes: tuple[float, ...]) -> tuple[np.ndarray, np.ndarray]:
    """Taylor coefficients about u = 0 (w = 1 + u) of

    -zeta'/zeta(w) - zeta(w)      (pole-free PNT numerator), and
    -zeta'/zeta(w) - 1/(w - 1)    (regular part of -zeta'/zeta).

    With h(u) = u zeta(1+u) = 1 + sum_k (-1)^k gamma_k/k! u^(k+1) one has
    zeta'/zeta = h'/h - 1/u.
    """
    K = len(stieltjes)
    c = [(-1) ** k * g / math.factorial(k) for k, g in enumerate(stieltjes)]
    h = [1.0] + c
    hp = [(i + 1) * h[i + 1] for i in range(K)]
    q = _series_divide(hp, h, K)
    regular = np.array([-qi for qi in q])
    numer = np.array([-qi - ci for qi, ci in zip(q, c)])
    return numer, regular


def _horner(coeffs: np.ndarray, z):
    acc = np.zeros_like(z, dtype=np.complex128) if isinstance(z, np.ndarray) else 0j
    for a in coeffs[::-1]:
        acc = acc * z + a
    return acc


@dataclass(frozen=True, eq=False)
class ZetaEvaluator:
    em_terms: int = 64
    bernoulli_order: int = 12
    laurent_radius: float = 0.25
    stieltjes_order: int = 20
    laurent_tol: float = 1e-12
    max_imag: float = 100.0
    stieltjes: tuple = field(init=False, repr=False)
    numer_coeffs: np.ndarray = field(init=False, repr=False)
    regular_coeffs: np.ndarray = field(init=False, repr=False)
    _corr: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        gammas = stieltjes_constants(self.stieltjes_order)
        numer, regular = laurent_data(gammas)
        # last retained term at the seam radius stands in for the truncation error
        k = len(numer) - 1
        tail = max(abs(numer[k]), abs(regular[k])) * (1.1 * self.laurent_radius) ** k
        if tail > self.laurent_tol:
            raise ConfigurationError(
                f"{self.stieltjes_order} Stieltjes constants leave ~{tail:.1e} truncation error "
                f"at radius {self.laurent_radius}; need <= {self.laurent_tol:.0e}"
            )
        B = bernoulli_numbers(2 * self.bernoulli_order)
        corr = np.array([float(B[2 * k] / math.factorial(2 * k)) for k in range(1, self.bernoulli_order + 1)])
        object.__setattr__(self, "stieltjes", gammas)
        object.__setattr__(self, "numer_coeffs", numer)
        object.__setattr__(self, "regular_coeffs", regular)
        object.__setattr__(self, "_corr", corr)

    # -- raw Euler-Maclaurin ---------------------------------------------------

    def _check_strip(self, w: np.ndarray) -> None:
        if np.any(w.real <= -1.0) or np.any(np.abs(w.imag) > self.max_imag):
            raise DomainError("w outside the continuation strip Re w > -1, |Im w| <= %g" % self.max_imag)
        if np.any(w == 1.0):
            raise PoleError("zeta has a pole at w = 1")

    def zeta_and_derivative(self, w):
        """(zeta(w), zeta'(w)); scalars in, scalars out."""
        arr = np.atleast_1d(np.asarray(w, dtype=np.complex128))
        self._check_strip(arr)
        z, dz = kernels.em_zeta(arr.ravel(), self.em_terms, self._corr)
        if np.ndim(w) == 0:
            return complex(z[0]), complex(dz[0])
        return z.reshape(arr.shape), dz.reshape(arr.shape)

    def zeta(self, w):
        return self.zeta_and_derivative(w)[0]

    def zeta_log_deriv(self, w):
        """zeta'(w)/zeta(w); refuses |w - 1| < laurent_radius."""
        arr = np.asarray(w, dtype=np.complex128)
        if np.any(np.abs(arr - 1.0) < self.laurent_radius):
            raise SingularityError("within laurent_radius of w = 1; use g_transform or neg_log_deriv_regular")
        z, dz = self.zeta_and_derivative(w)
        if np.any(np.abs(z) < 1e-12):
            raise DomainError("w is (numerically) a zero of zeta")
        return dz / z

    # -- pole-free combinations ---------------------------------------------------

    def neg_log_deriv_regular(self, w):
        """-zeta'/zeta(w) - 1/(w - 1), analytic through w = 1."""
        arr = np.atleast_1d(np.asarray(w, dtype=np.complex128))
        u = arr - 1.0
        out = np.empty(arr.shape, np.complex128)
        near = np.abs(u) < self.laurent_radius
        if near.any():
            out[near] = _horner(self.regular_coeffs, u[near])
        if (~near).any():
            z, dz = self.zeta_and_derivative(arr[~near])
            if np.any(np.abs(z) < 1e-12):
                raise DomainError("w is (numerically) a zero of zeta")
            out[~near] = -dz / z - 1.0 / u[~near]
        return complex(out[0]) if np.ndim(w) == 0 else out

    def g_laurent(self, z):
        """Series branch of g, valid for |z| well inside 3."""
        zz = np.asarray(z, dtype=np.complex128)
        out = _horner(self.numer_coeffs, zz) / (zz + 1.0)
        return complex(out) if np.ndim(z) == 0 else out

    def g_composed(self, z):
        """Direct formula (-zeta'/zeta - zeta)(z+1) / (z+1); loses accuracy as z -> 0."""
        zz = np.asarray(z, dtype=np.complex128)
        if np.any(zz == -1.0):
            raise PoleError("g has a pole at z = -1")
        zeta_v, dzeta = self.zeta_and_derivative(zz + 1.0)
        if np.any(np.abs(zeta_v) < 1e-10):
            raise DomainError("z + 1 is (numerically) a zero of zeta")
        out = (-dzeta / zeta_v - zeta_v) / (zz + 1.0)
        return complex(out) if np.ndim(z) == 0 else out

    def g_transform(self, z):
        """Laplace transform of the PNT signal b(t), continued to the imaginary axis."""
        arr = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        out = np.empty(arr.shape, np.complex128)
        near = np.abs(arr) < self.laurent_radius
        if near.any():
            out[near] = self.g_laurent(arr[near])
        if (~near).any():
            out[~near] = self.g_composed(arr[~near])
        return complex(out[0]) if np.ndim(z) == 0 else out


@lru_cache(maxsize=None)
def default_evaluator() -> ZetaEvaluator:
    return ZetaEvaluator()


def zeta(w):
    return default_evaluator().zeta(w)


def zeta_log_deriv(w):
    return default_evaluator().zeta_log_deriv(w)


def g_transform(z):
    return default_evaluator().g_transform(z)
