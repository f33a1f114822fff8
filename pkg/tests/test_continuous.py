import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from barrierwalk import continuous as cw
from barrierwalk.analysis import first_peak
from barrierwalk.errors import IntegrationAccuracyError, OracleSizeError


def dense_h(N, gamma_n, eps, marked=0, shift=True):
    gamma = gamma_n / N
    adj = np.ones((N, N)) - np.eye(N)
    a_prime = (1 - eps) * adj + ((N - 1) * eps * np.eye(N) if shift else 0)
    h = -gamma * a_prime
    h[marked, marked] -= 1
    return h


@pytest.mark.parametrize("kwargs", [dict(N=1), dict(N=4, gamma_n=0), dict(N=4, epsilon=1.0),
                                    dict(N=4, dt=0), dict(N=4, t_max=-1), dict(N=4, marked=4)])
def test_params_rejected(kwargs):
    with pytest.raises(ValueError):
        cw.ContinuousParams(**kwargs)


def test_default_t_max():
    assert cw.ContinuousParams(1024).t_max == pytest.approx(3 * math.pi * 32 / 2)


def test_reduced_hamiltonian_n4():
    h = cw.reduced_hamiltonian(cw.ContinuousParams(4, 1.0, 0.0))
    assert np.allclose(h, -0.25 * np.array([[4, math.sqrt(3)], [math.sqrt(3), 2]]), atol=1e-15)
    assert np.array_equal(h, h.conj().T)


def test_epsilon_halves_hopping():
    h0 = cw.reduced_hamiltonian(cw.ContinuousParams(50, 1.0, 0.0))
    h5 = cw.reduced_hamiltonian(cw.ContinuousParams(50, 1.0, 0.5))
    assert h5[0, 1] == pytest.approx(h0[0, 1] / 2)
    assert h5[0, 0] == h0[0, 0] == -1


def test_reduced_hamiltonian_restricts_dense():
    # H restricted to {|a>, |b>} with the (N-1) eps identity shift removed
    n, g, eps = 9, 1.3, 0.2
    basis = np.zeros((n, 2))
    basis[0, 0] = 1
    basis[1:, 1] = 1 / math.sqrt(n - 1)
    restricted = basis.T @ dense_h(n, g, eps, shift=False) @ basis
    assert np.allclose(cw.reduced_hamiltonian(cw.ContinuousParams(n, g, eps)), restricted, atol=1e-14)


@pytest.mark.parametrize("N", [4, 1024, 10 ** 6])
def test_critical_gap(N):
    assert cw.spectrum_c(cw.ContinuousParams(N, 1.0)).gap == pytest.approx(2 / math.sqrt(N), abs=1e-12)


def test_gap_1024():
    assert abs(cw.spectrum_c(cw.ContinuousParams(1024, 1.0)).gap - 0.0625) <= 1e-12


def test_gap_off_critical():
    # sqrt((c^2 + 4) / N) needs a deviation of c / sqrt(N); c / N leaves the gap at 2 / sqrt(N)
    n, c = 10 ** 6, 1.0
    gap = cw.spectrum_c(cw.ContinuousParams(n, 1 + c / math.sqrt(n))).gap
    assert gap == pytest.approx(math.sqrt((c ** 2 + 4) / n), rel=1e-3)
    gap = cw.spectrum_c(cw.ContinuousParams(n, 1 + c / n)).gap
    assert gap == pytest.approx(2 / math.sqrt(n), rel=1e-3)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 10 ** 6), st.floats(0.01, 10), st.floats(0, 0.99))
def test_gap_closed_form(N, gamma_n, eps):
    p = cw.ContinuousParams(N, gamma_n, eps)
    s = cw.spectrum_c(p)
    g = p.gamma_eff
    assert s.gap >= 0
    assert abs(s.gap - math.sqrt((1 - g * N) ** 2 + 4 * g)) <= 1e-12


def test_eigenstates_at_criticality():
    n = 10 ** 4
    s = cw.spectrum_c(cw.ContinuousParams(n, 1.0))
    # |s_v> +- |a> up to O(1/sqrt(N)) corrections
    sv = np.array([1 / math.sqrt(n), math.sqrt((n - 1) / n)])
    a = np.array([1, 0])
    for state, sign in ((s.ground, 1), (s.excited, -1)):
        target = (sv + sign * a) / np.linalg.norm(sv + sign * a)
        assert abs(abs(np.vdot(target, state.as_array())) - 1) < 1e-2


@pytest.mark.parametrize("eps, want", [(0.0, 1.0), (0.5, 2.0), (0.01, 1 / 0.99)])
def test_critical_gamma_n(eps, want):
    assert cw.critical_gamma_n(cw.ContinuousParams(100, 1.0, eps)) == pytest.approx(want)


def test_critical_gamma_n_small_eps():
    assert cw.critical_gamma_n(cw.ContinuousParams(100, 1.0, 0.01)) == pytest.approx(1.01, abs=2e-4)


def test_evolve_start():
    p = cw.ContinuousParams(64, 1.0)
    assert cw.evolve_reduced_c(p, 0.0).success_probability == pytest.approx(1 / 64)


def test_evolve_full_transfer():
    p = cw.ContinuousParams(1024, 1.0)
    assert cw.evolve_reduced_c(p, math.pi * 32 / 2).success_probability >= 0.999


@pytest.mark.parametrize("sign", [1, -1])
def test_large_deviation_fails_to_evolve(sign):
    n = 10 ** 6
    p = cw.ContinuousParams(n, 1 + sign * n ** -0.25, t_max=3 * math.pi * 1000, dt=0.5)
    assert cw.success_series_c(p).p.max() < 0.01


@pytest.mark.parametrize("N, gamma_n, eps", [(6, 1.0, 0.0), (10, 1.7, 0.3), (33, 0.5, 0.9)])
def test_evolve_matches_dense_expm(N, gamma_n, eps):
    p = cw.ContinuousParams(N, gamma_n, eps)
    h = dense_h(N, gamma_n, eps)
    psi0 = np.full(N, 1 / math.sqrt(N))
    for t in (0.3, 5.0, 40.0):
        exact = scipy.linalg.expm(-1j * h * t) @ psi0
        assert abs(cw.evolve_reduced_c(p, t).success_probability - abs(exact[0]) ** 2) < 1e-12


def test_evolve_preserves_norm():
    p = cw.ContinuousParams(500, 1.3, 0.2)
    for t in (1.0, 100.0, 1e4):
        assert abs(np.linalg.norm(cw.evolve_reduced_c(p, t).as_array()) - 1) < 1e-12


def test_series_sampling():
    p = cw.ContinuousParams(1024, 1.0, dt=0.01, t_max=100)
    s = cw.success_series_c(p)
    assert len(s) == 10001
    assert s.p[0] == pytest.approx(1 / 1024)
    i = int(np.argmax(s.p))
    assert s.p[i] > 0.999 and s.x[i] == pytest.approx(16 * math.pi, abs=0.05)
    peak = first_peak(s)
    assert peak.x == pytest.approx(math.pi / cw.spectrum_c(p).gap, rel=0.01)


def test_barrier_suppresses_peak():
    p0 = cw.success_series_c(cw.ContinuousParams(1024, 1.0, 0.0, dt=0.1)).p.max()
    p2 = cw.success_series_c(cw.ContinuousParams(1024, 1.0, 0.02, dt=0.1)).p.max()
    p4 = cw.success_series_c(cw.ContinuousParams(1024, 1.0, 0.04, dt=0.1)).p.max()
    assert p0 > p2 > p4


@pytest.mark.parametrize("eps", [0.1, 0.5, 0.9])
def test_compensation(eps):
    base = cw.success_series_c(cw.ContinuousParams(256, 1.0, 0.0)).p
    comp = cw.success_series_c(cw.ContinuousParams(256, 1 / (1 - eps), eps)).p
    assert np.max(np.abs(base - comp)) <= 1e-12


# --- full vertex space -------------------------------------------------------

def test_full_apply_adjacency():
    p = cw.ContinuousParams(7, 7.0, 0.0)  # gamma = 1
    x = np.arange(7) + 1j
    got = cw.full_hamiltonian_apply(p, x, oracle=False)
    assert np.allclose(got, -(x.sum() - x))


def test_full_apply_uniform_eigenvector():
    p = cw.ContinuousParams(20, 1.0)
    x = np.full(20, 1 / math.sqrt(20))
    assert np.allclose(cw.full_hamiltonian_apply(p, x, oracle=False), -p.gamma * 19 * x)


@pytest.mark.parametrize("shift", [True, False])
def test_full_apply_matches_dense(shift):
    p = cw.ContinuousParams(11, 1.4, 0.35, marked=4)
    rng = np.random.default_rng(1)
    x = rng.normal(size=11) + 1j * rng.normal(size=11)
    want = dense_h(11, 1.4, 0.35, marked=4, shift=shift) @ x
    assert np.allclose(cw.full_hamiltonian_apply(p, x, identity_shift=shift), want, atol=1e-14)


def test_rk4_matches_exact_n32():
    n = 32
    p = cw.ContinuousParams(n, 1.0, 0.0, t_max=2 * math.pi * math.sqrt(n), dt=0.05)
    res = cw.integrate_full_c(p)
    exact = cw.success_series_c(p).p
    assert res.series.p[0] == pytest.approx(1 / n)
    assert np.max(np.abs(res.series.p - exact)) <= 1e-8
    assert res.norm_drift < 1e-9
    i = int(np.argmax(res.series.p[: int(12 / 0.05)]))
    assert res.series.p[i] >= 0.99
    assert res.series.x[i] == pytest.approx(math.pi * math.sqrt(n) / 2, abs=0.3)


def test_rk4_barrier_lowers_peak():
    n = 32
    mk = lambda eps: cw.ContinuousParams(n, 1.0, eps, t_max=2 * math.pi * math.sqrt(n))
    clean = cw.integrate_full_c(mk(0.0)).series.p.max()
    barred = cw.integrate_full_c(mk(0.2))
    assert barred.series.p.max() < clean
    assert np.max(np.abs(barred.series.p - cw.success_series_c(mk(0.2)).p)) <= 1e-8


def test_identity_shift_is_global_phase():
    p = cw.ContinuousParams(24, 1.0, 0.3, t_max=20)
    a = cw.integrate_full_c(p, identity_shift=True).series.p
    b = cw.integrate_full_c(p, identity_shift=False).series.p
    assert np.max(np.abs(a - b)) <= 1e-9


def test_rk4_accuracy_error():
    p = cw.ContinuousParams(8, 1.0, 0.0, t_max=50, dt=1.0)
    with pytest.raises(IntegrationAccuracyError):
        cw.integrate_full_c(p, dt_int=0.9)


def test_rk4_cap():
    with pytest.raises(OracleSizeError):
        cw.integrate_full_c(cw.ContinuousParams(300, t_max=1))
    with pytest.raises(OracleSizeError):
        cw.full_hamiltonian_apply(cw.ContinuousParams(300), np.zeros(300))


@pytest.mark.parametrize("k", [0.5, 1.0])
def test_threshold_echo_bounded(k):
    from barrierwalk.analysis import ScalingFamily, sweep_continuous

    peaks = [r.peak_p for r in sweep_continuous(ScalingFamily(k, -0.5), [256, 1024, 4096])]
    assert min(peaks) > 0.75


def test_threshold_echo_decay():
    from barrierwalk.analysis import ScalingFamily, sweep_continuous

    rows = sweep_continuous(ScalingFamily(1.0, -0.25), [256, 1024, 4096, 16384])
    peaks = [r.peak_p for r in rows]
    assert all(b < a for a, b in zip(peaks, peaks[1:]))
    assert peaks[-1] < 0.03
