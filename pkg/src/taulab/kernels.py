"""Hot numeric kernels, each in a numba loop form and a vectorized numpy form.

The public names at the bottom dispatch on ``taulab._jit.BACKEND``. Both
variants stay importable so tests can check them against each other.
"""

import math

import numpy as np

from ._jit import BACKEND, njit

# -- von Mangoldt sieve -------------------------------------------------------


@njit
def mangoldt_numba(n):
    """Linear sieve on smallest prime factors; Lambda via prime-power detection."""
    spf = np.zeros(n + 1, np.int32)
    lam = np.zeros(n + 1, np.float64)
    cap = 16
    if n >= 17:
        cap = int(1.3 * n / math.log(n)) + 16
    primes = np.empty(cap, np.int64)
    count = 0
    for i in range(2, n + 1):
        if spf[i] == 0:
            spf[i] = i
            primes[count] = i
            count += 1
            lam[i] = math.log(i)
        else:
            p = spf[i]
            m = i // p
            if spf[m] == p and lam[m] > 0.0:
                lam[i] = lam[m]
        si = spf[i]
        for j in range(count):
            p = primes[j]
            if p > si or p * i > n:
                break
            spf[p * i] = p
    return lam, primes[:count].copy()


def mangoldt_numpy(n):
    """Eratosthenes on a byte mask, then Lambda on every prime power."""
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    primes = np.flatnonzero(is_prime).astype(np.int64)
    lam = np.zeros(n + 1, dtype=np.float64)
    lam[primes] = np.log(primes.astype(np.float64))
    for p in primes[primes * primes <= n]:
        logp = lam[p]
        pk = int(p) * int(p)
        while pk <= n:
            lam[pk] = logp
            pk *= int(p)
    return lam, primes


# -- compensated prefix sums ---------------------------------------------------


@njit
def prefix_sum_numba(x):
    out = np.empty(x.shape[0], np.float64)
    s = 0.0
    c = 0.0
    for i in range(x.shape[0]):
        v = x[i]
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[i] = s + c
    return out


def prefix_sum_numpy(x):
    return np.cumsum(np.asarray(x, dtype=np.longdouble)).astype(np.float64)


# -- Euler-Maclaurin zeta and derivative --------------------------------------


@njit
def em_zeta_numba(ws, n_terms, corr):
    """zeta(w) and zeta'(w) for each w; ``corr[k-1] = B_2k / (2k)!``."""
    out = np.empty(ws.shape[0], np.complex128)
    dout = np.empty(ws.shape[0], np.complex128)
    big = float(n_terms)
    log_n = math.log(big)
    for idx in range(ws.shape[0]):
        w = ws[idx]
        s = 0.0 + 0.0j
        ds = 0.0 + 0.0j
        for n in range(1, n_terms):
            ln = math.log(n)
            t = np.exp(-w * ln)
            s += t
            ds -= ln * t
        nw = np.exp(-w * log_n)
        n1w = big * nw
        inv = 1.0 / (w - 1.0)
        s += n1w * inv + 0.5 * nw
        ds += -log_n * n1w * inv - n1w * inv * inv - 0.5 * log_n * nw
        p = w
        dp = 1.0 + 0.0j
        pw = nw / big
        for k in range(1, corr.shape[0] + 1):
            ck = corr[k - 1]
            s += ck * p * pw
            ds += ck * (dp - log_n * p) * pw
            a = (w + 2 * k - 1) * (w + 2 * k)
            da = 2.0 * w + 4 * k - 1
            dp = dp * a + p * da
            p = p * a
            pw = pw / (big * big)
        out[idx] = s
        dout[idx] = ds
    return out, dout


def em_zeta_numpy(ws, n_terms, corr):
    ws = np.asarray(ws, dtype=np.complex128)
    n = np.arange(1, n_terms, dtype=np.float64)
    ln = np.log(n)[:, None]
    terms = np.exp(-ws[None, :] * ln)
    s = terms.sum(axis=0)
    ds = -(ln * terms).sum(axis=0)
    big = float(n_terms)
    log_n = math.log(big)
    nw = np.exp(-ws * log_n)
    n1w = big * nw
    inv = 1.0 / (ws - 1.0)
    s = s + n1w * inv + 0.5 * nw
    ds = ds - log_n * n1w * inv - n1w * inv * inv - 0.5 * log_n * nw
    p = ws.copy()
    dp = np.ones_like(ws)
    pw = nw / big
    for k in range(1, len(corr) + 1):
        s = s + corr[k - 1] * p * pw
        ds = ds + corr[k - 1] * (dp - log_n * p) * pw
        a = (ws + 2 * k - 1) * (ws + 2 * k)
        dp = dp * a + p * (2.0 * ws + 4 * k - 1)
        p = p * a
        pw = pw / (big * big)
    return s, ds


# -- exact Laplace transform of the PNT step signal ---------------------------


@njit
def pnt_step_transform_numba(excess, vmax, zs):
    """int_1^vmax excess(v) v^(-z-2) dv with excess constant on [n, n+1).

    ``excess[n] = psi(n) - n``.
    """
    top = int(math.floor(vmax))
    out = np.empty(zs.shape[0], np.complex128)
    for idx in range(zs.shape[0]):
        w = zs[idx] + 1.0
        small = abs(w) < 1e-8
        s = 0.0 + 0.0j
        c = 0.0 + 0.0j
        prev = 1.0 + 0.0j  # n^{-w} at n = 1
        for n in range(1, top + 1):
            hi = float(n + 1) if n < top else vmax
            if hi <= n:
                break
            if small:
                a = math.log(n)
                b = math.log(hi)
                piece = (b - a) * (1.0 - 0.5 * w * (a + b))
            else:
                nxt = np.exp(-w * math.log(hi))
                piece = (prev - nxt) / w
                prev = nxt
            v = excess[n] * piece
            t = s + v
            c += (s - t) + v if abs(s) >= abs(v) else (v - t) + s
            s = t
        out[idx] = s + c
    return out


def pnt_step_transform_numpy(excess, vmax, zs):
    zs = np.asarray(zs, dtype=np.complex128)
    top = int(math.floor(vmax))
    if top < 1:
        return np.zeros(zs.shape, np.complex128)
    n = np.arange(1, top + 1, dtype=np.float64)
    hi = n + 1.0
    hi[-1] = vmax
    a = np.log(n)
    b = np.log(hi)
    ex = excess[1 : top + 1].astype(np.float64)
    out = np.empty(zs.shape, np.complex128)
    for idx, z in enumerate(zs):
        w = z + 1.0
        if abs(w) < 1e-8:
            piece = (b - a) * (1.0 - 0.5 * w * (a + b))
        else:
            piece = (np.exp(-w * a) - np.exp(-w * b)) / w
        terms = ex * piece
        out[idx] = math.fsum(terms.real) + 1j * math.fsum(terms.imag)
    return out


# -- Fourier transform of the smooth trapezoid --------------------------------


@njit
def _glue_slope(x):
    # derivative of rho(x) = 1 / (1 + exp(1/x - 1/(1-x))) on (0, 1)
    e = 1.0 / x - 1.0 / (1.0 - x)
    q = math.exp(-abs(e))
    return q / ((1.0 + q) * (1.0 + q)) * (1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x)))


@njit
def trapezoid_hat_numba(us, plateau, shoulder, nodes, weights):
    """phi_hat(u) = 2 int_0^1 rho'(x) (L + s x) sinc(u (L + s x)) dx."""
    out = np.empty(us.shape[0], np.float64)
    k = nodes.shape[0]
    for idx in range(us.shape[0]):
        u = us[idx]
        panels = int(math.ceil(abs(u) * shoulder / (2.0 * math.pi))) + 16
        h = 1.0 / panels
        acc = 0.0
        for p in range(panels):
            left = p * h
            for j in range(k):
                x = left + 0.5 * h * (nodes[j] + 1.0)
                y = plateau + shoulder * x
                arg = u * y
                sc = 1.0 if arg == 0.0 else math.sin(arg) / arg
                acc += weights[j] * 0.5 * h * _glue_slope(x) * y * sc
        out[idx] = 2.0 * acc
    return out


def _glue_slope_np(x):
    e = 1.0 / x - 1.0 / (1.0 - x)
    q = np.exp(-np.abs(e))
    return q / (1.0 + q) ** 2 * (1.0 / x**2 + 1.0 / (1.0 - x) ** 2)


def trapezoid_hat_numpy(us, plateau, shoulder, nodes, weights, chunk=512):
    us = np.asarray(us, dtype=np.float64)
    out = np.empty(us.shape, np.float64)
    if us.size == 0:
        return out
    panels = int(math.ceil(np.abs(us).max() * shoulder / (2.0 * math.pi))) + 16
    h = 1.0 / panels
    left = np.arange(panels) * h
    x = (left[:, None] + 0.5 * h * (nodes[None, :] + 1.0)).ravel()
    w = np.tile(0.5 * h * weights, panels) * _glue_slope_np(x)
    y = plateau + shoulder * x
    for start in range(0, us.size, chunk):
        u = us[start : start + chunk, None]
        out[start : start + chunk] = 2.0 * (np.sinc(u * y / np.pi) * (w * y)).sum(axis=1)
    return out


if BACKEND == "numba":
    mangoldt = mangoldt_numba
    prefix_sum = prefix_sum_numba
    em_zeta = em_zeta_numba
    pnt_step_transform = pnt_step_transform_numba
    trapezoid_hat = trapezoid_hat_numba
else:
    mangoldt = mangoldt_numpy
    prefix_sum = prefix_sum_numpy
    em_zeta = em_zeta_numpy
    pnt_step_transform = pnt_step_transform_numpy
    trapezoid_hat = trapezoid_hat_numpy
