import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from taulab import signals as S
from taulab.errors import DomainError
from taulab.zeta import EULER_GAMMA, default_evaluator

from oracles import sine_integral


def closed_form_signals():
    return [S.exp_decay(1.0), S.exp_decay(0.3), S.sinc(), S.sine(1.0), S.sine(2.5)]


@pytest.mark.parametrize("s", closed_form_signals(), ids=lambda s: s.name)
def test_bounded_and_causal(s):
    t = np.linspace(-5, 200, 20001)
    a = s(t)
    assert np.all(np.abs(a) <= s.sup_bound + 1e-15)
    assert np.all(a[t < 0] == 0)


@pytest.mark.parametrize("s", closed_form_signals(), ids=lambda s: s.name)
@pytest.mark.parametrize("z", [0.1, 0.5 + 2j, 1.0 - 0.7j])
def test_transform_matches_quadrature(s, z):
    T = 60 / z.real if isinstance(z, complex) else 60 / z
    q = S.truncated_transform(s, z, T)
    tail = s.sup_bound * math.exp(-np.real(z) * T) / np.real(z)
    assert abs(q.value - S.transform_values(s, [z])[0]) < 1e-6 + tail


def test_truncated_examples():
    e = S.exp_decay(1.0)
    for T in (0.5, 3.0, 12.0):
        assert abs(S.truncated_transform(e, 0.0, T).value - (1 - math.exp(-T))) < 1e-12
    assert S.truncated_transform(S.sinc(), 0.3 + 1j, 0.0).value == 0
    si = S.truncated_transform(S.sinc(), 0.0, 1000.0)
    assert si.converged
    assert abs(si.value - sine_integral(1000.0)) < 1e-9
    assert abs(si.value - math.pi / 2) < 0.01


def test_full_transform_examples(table_1e6):
    assert S.full_transform(S.exp_decay(1.0), 0.0).value == pytest.approx(1.0)
    assert S.full_transform(S.sine(1.0), 0.5).value == pytest.approx(0.8)
    pb = S.pnt_b(table_1e6)
    g1 = default_evaluator().g_transform(1.0)
    assert S.full_transform(pb, 1.0).value == pytest.approx(g1, abs=1e-14)
    # exact step-sum f_T(1) at T = log N, plus its tail bound, against g(1)
    T = math.log(1e6)
    assert abs(pb.truncated(1.0, T) - g1) < 1e-4


def test_full_transform_quadrature_fallback():
    s = S.BoundedSignal("no_closed_form", lambda t: np.where(t >= 0, np.cos(t) ** 2, 0.0).astype(complex), 1.0)
    r = S.full_transform(s, 0.5)
    exact = 0.5 / 0.5 + 0.5 * 0.5 / (0.25 + 4)
    assert r.converged and abs(r.value - exact) < 1e-8
    with pytest.raises(DomainError):
        S.full_transform(s, -0.1)


def test_partial_integrals(table_1e6):
    sn = S.sine(1.0)
    for T in (1.0, 7.5, 100.0):
        assert abs(S.partial_integral(sn, T).value - (1 - math.cos(T))) < 1e-10
    assert S.partial_integral(S.exp_decay(1.0), math.inf).value == pytest.approx(1.0)
    pb = S.pnt_b(table_1e6)
    v = S.partial_integral(pb, math.log(1e6)).value
    # step sum of int_1^N (psi(v) - [v]) / v^2 dv
    ex = table_1e6.excess()[1 : 10**6]
    m = np.arange(1, 10**6, dtype=np.float64)
    assert abs(v - math.fsum(ex / (m * (m + 1)))) < 1e-10
    assert abs(v + 2 * EULER_GAMMA) < 0.05


def test_pnt_partial_integral_first_jumps(table_1e6):
    pb = S.pnt_b(table_1e6)
    lam = table_1e6.lam
    # partial integrals up to log(n + 1) telescope into (psi(k) - k)(1/k - 1/(k+1)) summed over k <= n
    acc = 0.0
    for n in range(1, 101):
        acc += (table_1e6.psi_at(n) - n) * (1 / n - 1 / (n + 1))
        assert abs(S.partial_integral(pb, math.log(n + 1)).value - acc) < 1e-12
    # and the Stieltjes route: sum (Lambda(n) - 1)/n - (psi(N) - N)/(N + 1) ... summation by parts
    N = 100
    s1 = math.fsum((lam[1 : N + 1] - 1) / np.arange(1, N + 1))
    assert abs(acc - (s1 - (table_1e6.psi_at(N) - N) / (N + 1))) < 1e-12


def test_quotient_examples():
    e = S.exp_decay(1.0)
    assert S.quotient_q(e, 1.0, 1.0) == pytest.approx((1 / (2 + 1j) - 0.5) / 1j, abs=1e-15)
    for s in closed_form_signals():
        x = 0.5
        assert abs(S.quotient_q(s, x, 1e-7) - s.derivative(x)) < 1e-6
        assert abs(S.quotient_q(s, x, 0.0) - s.derivative(x)) < 1e-9
    vals = [S.quotient_q(S.sinc(), x, 0.5) for x in (0.1, 0.01, 0.001)]
    assert all(np.isfinite(v) for v in vals)
    assert abs(vals[1] - vals[2]) < abs(vals[0] - vals[1]) and abs(vals[1] - vals[2]) < 1e-2


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["exp_decay", "sinc", "sine"]), st.floats(0.05, 2.0), st.floats(-5.0, 5.0),
       st.floats(0.5, 30.0))
def test_truncation_bound_right_half_plane(name, x, y, T):
    s = S.make_signal(name)
    z = complex(x, y)
    q = S.truncated_transform(s, z, T)
    f = S.transform_values(s, [z])[0]
    assert abs(q.value - f) <= s.sup_bound * math.exp(-x * T) / x + q.error + 1e-12


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["exp_decay", "sine"]), st.floats(-2.0, -0.05), st.floats(-5.0, 5.0), st.floats(0.5, 20.0))
def test_truncation_bound_left_half_plane(name, x, y, T):
    s = S.make_signal(name)
    q = S.truncated_transform(s, complex(x, y), T)
    assert abs(q.value) <= s.sup_bound / abs(x) * math.exp(-x * T) * (1 + 1e-10) + q.error


def test_library_flags():
    assert S.sine(1.0).window_B is None
    assert S.sinc().window_B == 1.0
    with pytest.raises(ValueError):
        S.make_signal("nope")


def test_step_signal_exact_hooks():
    s = S.random_step_signals(1, seed=3)[0]
    z = 0.2 - 1.3j
    for T in (2.0, 11.0, 25.0):
        q = S.truncated_transform(S.BoundedSignal("plain", s.eval, s.sup_bound, breakpoints=s.breakpoints), z, T)
        assert abs(s.truncated(z, T) - q.value) < 1e-10
    assert S.random_step_signals(5, seed=7)[4].breakpoints == S.random_step_signals(5, seed=7)[4].breakpoints
