import math
import os
import subprocess
import sys

import numpy as np
import pytest

from taulab import _jit, kernels
from taulab.quadrature import NODES, WEIGHTS
from taulab.zeta import bernoulli_numbers


def _corr(order=12):
    B = bernoulli_numbers(2 * order)
    return np.array([float(B[2 * k] / math.factorial(2 * k)) for k in range(1, order + 1)])


def test_mangoldt_parity():
    a, pa = kernels.mangoldt_numba(200_000)
    b, pb = kernels.mangoldt_numpy(200_000)
    assert np.array_equal(pa, pb)
    assert np.array_equal(a > 0, b > 0)
    assert np.allclose(a, b, rtol=0, atol=4e-15)


def test_prefix_sum_parity():
    x = np.random.default_rng(0).uniform(0, 14, 100_000)
    a, b = kernels.prefix_sum_numba(x), kernels.prefix_sum_numpy(x)
    assert np.allclose(a, b, rtol=1e-15, atol=0)
    assert a[-1] == pytest.approx(math.fsum(x), rel=1e-15)


def test_em_zeta_parity():
    ws = np.array([2.0, 0.5 + 14j, -0.5 + 3j, 3 - 40j], dtype=np.complex128)
    za, da = kernels.em_zeta_numba(ws, 64, _corr())
    zb, db = kernels.em_zeta_numpy(ws, 64, _corr())
    assert np.allclose(za, zb, rtol=1e-13, atol=1e-14)
    assert np.allclose(da, db, rtol=1e-13, atol=1e-14)


def test_step_transform_parity():
    lam, _ = kernels.mangoldt_numpy(5000)
    excess = np.cumsum(lam) - np.arange(lam.size)
    zs = np.array([0.3 + 2j, 1.0, 0.01 - 7j])
    a = kernels.pnt_step_transform_numba(excess, 5000.0, zs)
    b = kernels.pnt_step_transform_numpy(excess, 5000.0, zs)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-14)


def test_trapezoid_hat_parity():
    us = np.linspace(-300, 300, 601)
    a = kernels.trapezoid_hat_numba(us, 1.0, 1.0, NODES, WEIGHTS)
    b = kernels.trapezoid_hat_numpy(us, 1.0, 1.0, NODES, WEIGHTS)
    assert np.allclose(a, b, rtol=0, atol=1e-14)


def test_backend_env_flag():
    env = dict(os.environ, TAULAB_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", "from taulab import _jit, kernels; "
                          "print(_jit.BACKEND, kernels.mangoldt is kernels.mangoldt_numpy)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "True"]


def test_default_backend():
    if _jit.HAS_NUMBA and os.environ.get("TAULAB_BACKEND", "").lower() != "numpy":
        assert kernels.mangoldt is kernels.mangoldt_numba
