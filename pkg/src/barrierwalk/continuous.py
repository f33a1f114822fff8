"""
Continuous-time quantum walk search on the complete graph with barriers.

The walker evolves under H = -gamma A' - |a><a| where the barrier-weakened
adjacency matrix is A' = (N-1) eps I + (1-eps) A.  The identity part only
contributes a global phase, so the reduced model works with the effective
rate gamma' = gamma (1 - eps) on the plain adjacency matrix.  The full
N-dimensional oracle keeps the identity shift and integrates the
Schrodinger equation with RK4.

The jumping rate is always passed as the product ``gamma_n = gamma * N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import AnalyticMismatchError, IntegrationAccuracyError, OracleSizeError
from .numerics import hermitian_eigensystem_2
from .series import ProbabilitySeries

__all__ = [
    "DEFAULT_ORACLE_CAP",
    "ContinuousParams",
    "ReducedState2",
    "SpectrumC",
    "reduced_hamiltonian",
    "spectrum_c",
    "critical_gamma_n",
    "initial_reduced_c",
    "evolve_reduced_c",
    "success_series_c",
    "sample_times",
    "full_hamiltonian_apply",
    "integrate_full_c",
    "IntegrationResult",
]

DEFAULT_ORACLE_CAP = 256
GAP_TOL = 1e-12
DRIFT_LIMIT = 1e-6


@dataclass(frozen=True)
class ContinuousParams:
    """
    Parameters of a continuous-time search run.

    ``t_max`` defaults to 3 pi sqrt(N) / 2, three barrier-free runtimes.
    """

    N: int
    gamma_n: float = 1.0
    epsilon: float = 0.0
    marked: int = 0
    t_max: Optional[float] = None
    dt: float = 0.1

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"N must be an integer >= 2, got {self.N}")
        if not self.gamma_n > 0:
            raise ValueError(f"gamma_n must be positive, got {self.gamma_n}")
        if not (0.0 <= self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie in [0, 1), got {self.epsilon}")
        if not (0 <= self.marked < self.N):
            raise ValueError(f"marked vertex {self.marked} outside [0, {self.N})")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_max is None:
            object.__setattr__(self, "t_max", 1.5 * math.pi * math.sqrt(self.N))
        if self.t_max < 0:
            raise ValueError(f"t_max must be non-negative, got {self.t_max}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def gamma(self) -> float:
        return self.gamma_n / self.N

    @property
    def gamma_eff(self) -> float:
        """gamma (1 - eps): the rate left once the identity shift is dropped."""
        return self.gamma_n / self.N * (1.0 - self.epsilon)


@dataclass(frozen=True)
class ReducedState2:
    """Amplitudes on |a> and |b> = sum_{x != a} |x> / sqrt(N-1)."""

    amp_a: complex
    amp_b: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.amp_a, self.amp_b], dtype=complex)

    @property
    def success_probability(self) -> float:
        return abs(self.amp_a) ** 2


@dataclass(frozen=True)
class SpectrumC:
    E0: float
    E1: float
    gap: float
    ground: ReducedState2
    excited: ReducedState2


def reduced_hamiltonian(p: ContinuousParams) -> np.ndarray:
    """H in the {|a>, |b>} basis with gamma replaced by gamma (1 - eps)."""
    g = p.gamma_eff
    off = -g * math.sqrt(p.N - 1)
    return np.array([[-1.0, off], [off, -g * (p.N - 2)]], dtype=complex)


def _closed_form_gap(p: ContinuousParams) -> float:
    g = p.gamma_eff
    return math.sqrt((1.0 - g * p.N) ** 2 + 4.0 * g)


def spectrum_c(p: ContinuousParams) -> SpectrumC:
    """Exact eigensystem of the reduced Hamiltonian, gap cross-checked."""
    low, high = hermitian_eigensystem_2(reduced_hamiltonian(p))
    gap = high.value.real - low.value.real
    expected = _closed_form_gap(p)
    if abs(gap - expected) > GAP_TOL:
        raise AnalyticMismatchError(f"gap {gap!r} differs from closed form {expected!r}")
    return SpectrumC(
        E0=low.value.real,
        E1=high.value.real,
        gap=gap,
        ground=ReducedState2(*low.vector),
        excited=ReducedState2(*high.vector),
    )


def critical_gamma_n(p: ContinuousParams) -> float:
    """gamma N solving gamma N (1 - eps) = 1."""
    return 1.0 / (1.0 - p.epsilon)


def initial_reduced_c(p: ContinuousParams) -> ReducedState2:
    return ReducedState2(1 / math.sqrt(p.N), math.sqrt((p.N - 1) / p.N))


def _amplitude_a(p: ContinuousParams, times: np.ndarray) -> np.ndarray:
    spec = spectrum_c(p)
    s0 = initial_reduced_c(p).as_array()
    amp = np.zeros(times.shape, dtype=complex)
    for energy, vec in ((spec.E0, spec.ground), (spec.E1, spec.excited)):
        v = vec.as_array()
        amp += np.exp(-1j * energy * times) * v[0] * np.vdot(v, s0)
    return amp


def evolve_reduced_c(p: ContinuousParams, t: float) -> ReducedState2:
    """exp(-i H t) |s_v> via the 2x2 eigendecomposition."""
    if t < 0:
        raise ValueError("t must be non-negative")
    spec = spectrum_c(p)
    s0 = initial_reduced_c(p).as_array()
    out = np.zeros(2, dtype=complex)
    for energy, vec in ((spec.E0, spec.ground), (spec.E1, spec.excited)):
        v = vec.as_array()
        out += np.exp(-1j * energy * t) * np.vdot(v, s0) * v
    return ReducedState2(*out)


def sample_times(t_max: float, dt: float) -> np.ndarray:
    """0, dt, 2 dt, ... up to t_max (inclusive up to rounding)."""
    n = int(math.floor(t_max / dt + 1e-9))
    return dt * np.arange(n + 1)


def success_series_c(p: ContinuousParams) -> ProbabilitySeries:
    """|<a|psi(t)>|^2 on the grid 0, dt, ..., t_max from the exact 2D evolution."""
    times = sample_times(p.t_max, p.dt)
    probs = np.abs(_amplitude_a(p, times)) ** 2
    # exact evolution can overshoot 1 by a rounding error
    return ProbabilitySeries("time", times, np.minimum(probs, 1.0), p)


# --- full vertex space -------------------------------------------------------

def _check_cap(p: ContinuousParams, cap: int) -> None:
    if p.N > cap:
        raise OracleSizeError(f"N={p.N} exceeds the full-space oracle cap {cap}")


def full_hamiltonian_apply(
    p: ContinuousParams,
    state,
    *,
    identity_shift: bool = True,
    oracle: bool = True,
    cap: int = DEFAULT_ORACLE_CAP,
) -> np.ndarray:
    """
    H x with H = -gamma A' - |a><a|, matrix-free.

    ``identity_shift`` keeps the (N-1) eps diagonal of A'; ``oracle`` keeps
    the -|a><a| term.
    """
    _check_cap(p, cap)
    x = np.asarray(state, dtype=complex)
    if x.shape != (p.N,):
        raise ValueError(f"state must have shape ({p.N},), got {x.shape}")
    adj = x.sum() - x
    out = -p.gamma * (1.0 - p.epsilon) * adj
    if identity_shift:
        out = out - p.gamma * (p.N - 1) * p.epsilon * x
    if oracle:
        out[p.marked] -= x[p.marked]
    return out


@dataclass(frozen=True)
class IntegrationResult:
    series: ProbabilitySeries
    norm_drift: float
    substeps: int


def integrate_full_c(
    p: ContinuousParams,
    *,
    identity_shift: bool = True,
    dt_int: Optional[float] = None,
    cap: int = DEFAULT_ORACLE_CAP,
) -> IntegrationResult:
    """
    Fixed-step RK4 on i d|psi>/dt = H |psi> over the full vertex space.

    The state is never renormalized; the maximum norm deviation is reported
    as ``norm_drift`` and serves as the accuracy monitor.

    Raises
    ------
    IntegrationAccuracyError
        If the norm drifts by more than 1e-6.
    """
    _check_cap(p, cap)
    row_sum = p.gamma * (p.N - 1) + 1.0
    if dt_int is None:
        dt_int = min(0.005, 0.05 / row_sum)
    substeps = max(1, math.ceil(p.dt / dt_int - 1e-12))
    h = p.dt / substeps

    def rhs(x):
        return -1j * full_hamiltonian_apply(p, x, identity_shift=identity_shift, cap=cap)

    times = sample_times(p.t_max, p.dt)
    psi = np.full(p.N, 1 / math.sqrt(p.N), dtype=complex)
    probs = np.empty(times.size)
    drift = 0.0
    for i in range(times.size):
        probs[i] = abs(psi[p.marked]) ** 2
        drift = max(drift, abs(float(np.vdot(psi, psi).real) - 1.0))
        if i == times.size - 1:
            break
        for _ in range(substeps):
            k1 = rhs(psi)
            k2 = rhs(psi + 0.5 * h * k1)
            k3 = rhs(psi + 0.5 * h * k2)
            k4 = rhs(psi + h * k3)
            psi = psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    if drift > DRIFT_LIMIT:
        raise IntegrationAccuracyError(f"norm drift {drift:.3e} exceeds {DRIFT_LIMIT}")
    series = ProbabilitySeries("time", times, np.minimum(probs, 1.0 + 1e-9), p)
    return IntegrationResult(series, drift, substeps)
