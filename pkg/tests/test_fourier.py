import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from taulab import fourier as F, signals as S
from taulab.errors import DomainError, WindowError

PHI = F.STANDARD_TRAPEZOID
SUITE = ["exp_abs", "lorentzian", "gaussian"]


def test_test_function_shape():
    phi = F.TestFunction(1.5, 0.7)
    y = np.linspace(-3, 3, 6001)
    v = phi(y)
    assert np.all(v[np.abs(y) <= 1.5] == 1) and np.all(v[np.abs(y) >= 2.2] == 0)
    assert np.all((v >= 0) & (v <= 1))
    assert np.array_equal(v, phi(-y))
    # glue matches sigma(x) / (sigma(x) + sigma(1 - x)) with sigma(x) = exp(-1/x)
    x = 0.37
    sig = lambda u: math.exp(-1 / u)
    assert phi(1.5 + 0.7 * (1 - x)) == pytest.approx(sig(x) / (sig(x) + sig(1 - x)), rel=1e-14)


def test_glue_jet_against_mpmath():
    f = lambda x: 1 / (1 + mpmath.exp(1 / x - 1 / (1 - x)))
    jet = F.glue_jet(np.array([0.21, 0.5, 0.83]), 10)
    with mpmath.workdps(40):
        for j, x in enumerate(("0.21", "0.5", "0.83")):
            for k in range(11):
                ref = float(mpmath.diff(f, mpmath.mpf(x), k))
                assert jet[k, j] == pytest.approx(ref, rel=1e-9, abs=1e-9)


def test_fourier_transform_examples():
    phi = F.TestFunction(0.8, 0.5)
    assert F.test_fourier_transform(phi, 0.0) == pytest.approx(2 * 0.8 + 0.5, abs=1e-13)
    for t in (0.7, 13.0):
        a = F.test_fourier_transform(phi, t)
        assert a.imag == 0 and a == F.test_fourier_transform(phi, -t)
    assert abs(F.test_fourier_transform(phi, 100)) < abs(F.test_fourier_transform(phi, 10)) / 100
    # direct quadrature oracle
    y = np.linspace(-1.3, 1.3, 260001)
    for t in (1.0, 7.3, 40.0):
        ref = np.trapezoid(phi(y) * np.cos(t * y), y)
        assert F.test_fourier_transform(phi, t).real == pytest.approx(ref, abs=1e-8)


def test_hat_envelope_and_decay():
    t = np.linspace(10, 1000, 3000)
    h = np.abs(PHI.hat(t))
    assert np.all(h <= PHI.hat_envelope(t))
    assert np.all(h * (1 + t**2) <= PHI.hat_bound)
    assert PHI.derivative_l1(2) == pytest.approx(8.0, rel=1e-10)  # 2 * 2 * max rho'
    # tail bound dominates the sampled tail integral
    tt = np.linspace(100, 400, 30001)
    sampled = 2 * np.trapezoid(np.abs(PHI.hat(tt)), tt)
    assert sampled <= PHI.hat_tail(100)


def test_window_function():
    w = F.WindowFunction(2.0)
    y = np.array([-2.5, -2.0, 0.0, 2.0, 2.0001])
    assert list(w(y)) == [0, 1, 1, 1, 0]


@pytest.mark.parametrize("name", SUITE + ["heaviside"])
def test_model_invariants(name):
    m = F.MODELS[name]()
    t = np.linspace(-2000, 2000, 400001)
    assert np.max(np.abs(m.b(t))) <= m.sup_bound
    if m.decay_class == F.VANISHING:
        tails = m.tail_maxima([10, 100, 1000])
        assert tails[0] > tails[1] > tails[2] or tails[2] == 0


def test_pair_examples():
    assert F.pair(F.zero_model(), PHI).value == 0
    narrow = F.TestFunction(0.2, 0.3)
    r = F.pair(F.exp_abs(), narrow)
    assert r.converged
    assert abs(r.value - F.pair_spectrum(F.exp_abs(), narrow)) < 1e-6
    # linearity in phi: phi1 + phi2 is not a trapezoid, so sum the time-side integrands explicitly
    phi2 = F.TestFunction(0.5, 1.0)
    lhs = F.pair(F.lorentzian(), narrow).value + F.pair(F.lorentzian(), phi2).value
    both = F.integrate(lambda t: F.lorentzian().b(t) * (narrow.hat(t) + phi2.hat(t)), -300, 300,
                       max_panel=0.5, abstol=1e-14, reltol=1e-13).value
    assert abs(lhs - both) < 1e-10


@pytest.mark.parametrize("name", SUITE)
def test_pair_closed_form(name):
    m = F.MODELS[name]()
    assert abs(F.pair(m, PHI).value - F.pair_spectrum(m, PHI)) < 1e-9


@pytest.mark.parametrize("name", SUITE)
def test_convention_lock(name):
    m = F.MODELS[name]()
    assert abs(F.pair(m, PHI).value - F.pair_frequency_side(m, PHI, eps=1e-6)) < 1e-5


def test_modulated_pair_examples():
    e = F.exp_abs()
    v5, v50 = abs(F.modulated_pair(e, PHI, 5).value), abs(F.modulated_pair(e, PHI, 50).value)
    assert v50 < v5 / 10
    assert F.modulated_pair(e, PHI, 0.0).value == F.pair(e, PHI).value
    h = F.modulated_pair(F.heaviside(), PHI, 500.0)
    assert abs(h.value - 2j * math.pi * PHI(0.0)) < 1e-2


@pytest.mark.parametrize("name", SUITE)
def test_riemann_lebesgue_decrease(name):
    m = F.MODELS[name]()
    res = [F.modulated_pair(m, PHI, T) for T in (5.0, 50.0, 500.0)]
    for a, b in zip(res, res[1:]):
        assert abs(a.value) - a.error > abs(b.value) + b.error


def test_pseudo_product():
    wide = F.MultiplierFunction.from_test_function(F.TestFunction(1000.0, 50.0))
    prod = F.pseudo_product(F.exp_abs(), wide)
    v = np.linspace(-10, 10, 41)
    assert np.max(np.abs(prod.b(v) - np.exp(-np.abs(v)))) < 1e-3
    assert prod.decay_class == F.VANISHING
    Phi = F.MultiplierFunction.from_test_function(PHI)
    p2 = F.pseudo_product(F.lorentzian(), Phi)
    tails = p2.tail_maxima([10, 100])
    assert tails[0] > tails[1]
    t = np.linspace(-50, 50, 2001)
    assert np.max(np.abs(p2.b(t))) <= p2.sup_bound
    assert np.all(F.pseudo_product(F.zero_model(), Phi).b(t) == 0)
    with pytest.raises(DomainError):
        F.pseudo_product(F.exp_abs(), Phi, cutoff=8.0, tol=1e-12)


def test_multiplier_bound():
    Phi = F.MultiplierFunction.from_test_function(F.TestFunction(0.5, 0.8))
    t = np.linspace(-500, 500, 5001)
    assert np.all(np.abs(Phi.fourier_transform(t)) * (1 + t**2) <= Phi.bound_C)


def test_boundary_pairing_examples():
    e = S.exp_decay(1.0)
    assert abs(F.boundary_pairing(e, 1.0, 1000.0, 0.01).value) * 10 <= abs(F.boundary_pairing(e, 1.0, 10.0, 0.01).value)
    vals = [F.boundary_pairing(e, 1.0, 50.0, eps).value for eps in (1e-2, 1e-3, 1e-4)]
    assert max(abs(vals[0] - vals[1]), abs(vals[1] - vals[2]), abs(vals[0] - vals[2])) < 1e-3
    sn = S.sine(1.0)
    for T in (10.0, 100.0, 1000.0):
        assert abs(F.boundary_pairing(sn, 2.0, T, 1e-3).value) > 0.1
    with pytest.raises(DomainError):
        F.boundary_pairing(e, 1.0, 10.0, 0.0)
    with pytest.raises(WindowError):
        F.boundary_pairing(S.sinc(), 1.5, 10.0, 0.01)


def test_boundary_pairing_limit_is_2pi_I3():
    from taulab.contour import axis_integral_I3

    e = S.exp_decay(1.0)
    i3 = axis_integral_I3(e, 1.0, 20.0).value
    assert abs(F.boundary_pairing(e, 1.0, 20.0, 1e-6).value / (2 * math.pi) - i3) < 1e-5


def test_sweep():
    sw = F.boundary_sweep(S.exp_decay(1.0), 1.0, [10.0, 100.0], [1e-2, 1e-3])
    assert sw.values.shape == (2, 2) and sw.converged


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 3.0), st.floats(0.2, 3.0), st.floats(0.0, 200.0))
def test_hat_even_real_bounded(lam, s, t):
    phi = F.TestFunction(lam, s)
    a, b = phi.hat(np.array([t, -t]))
    assert a == b
    assert abs(a) <= phi.derivative_l1(0) + 1e-12
