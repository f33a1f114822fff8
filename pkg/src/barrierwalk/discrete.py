"""
Discrete-time coined quantum walk search on the complete graph.

The hop is the faulty flip-flop shift ``cos(phi) S + i sin(phi) I``: with
amplitude ``cos(phi)`` the walker tunnels to the neighbouring vertex and
turns around, with amplitude ``i sin(phi)`` it stays put.  Each search step
is

    U = (cos(phi) S + i sin(phi) I) (I_N x C0) (R_a x I_d)

with the Grover diffusion coin ``C0`` and the phase-flip oracle ``R_a``.

Starting from the uniform state the dynamics close on the three-dimensional
span of |ab>, |ba>, |bb>, which is what :func:`simulate_reduced` evolves.
:func:`simulate_full` evolves the whole N(N-1)-dimensional coined space
without any symmetry reduction and serves as an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AnalyticMismatchError, OracleSizeError
from .numerics import EigenPair, unitary_eigensystem_3
from .series import ProbabilitySeries

__all__ = [
    "DEFAULT_ORACLE_CAP",
    "DiscreteParams",
    "ReducedState3",
    "FullCoinedState",
    "SpectrumD",
    "shift_reduced",
    "faulty_shift_reduced",
    "coin_reduced",
    "oracle_reduced",
    "reduced_operator",
    "initial_reduced",
    "spectrum",
    "sum_diff_vectors",
    "predicted_runtime",
    "predicted_peak_probability",
    "simulate_reduced",
    "uniform_full_state",
    "full_operator_apply",
    "project_reduced",
    "simulate_full",
]

DEFAULT_ORACLE_CAP = 64
SPECTRUM_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class DiscreteParams:
    """Problem size ``N``, barrier angle ``phi`` and marked vertex index."""

    N: int
    phi: float = 0.0
    marked: int = 0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 3:
            raise ValueError(f"N must be an integer >= 3, got {self.N}")
        if not (0.0 <= self.phi < math.pi / 2):
            raise ValueError(f"phi must lie in [0, pi/2), got {self.phi}")
        if not (0 <= self.marked < self.N):
            raise ValueError(f"marked vertex {self.marked} outside [0, {self.N})")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "phi", float(self.phi))

    @classmethod
    def from_c(cls, N: int, c: float, marked: int = 0) -> "DiscreteParams":
        """Barrier angle given through its scaled coefficient, phi = c / sqrt(N)."""
        return cls(N, c / math.sqrt(N), marked)

    @property
    def d(self) -> int:
        return self.N - 1

    @property
    def alpha(self) -> float:
        return math.cos(self.phi)

    @property
    def beta(self) -> complex:
        return 1j * math.sin(self.phi)

    @property
    def c(self) -> float:
        return self.phi * math.sqrt(self.N)

    @property
    def cos_theta(self) -> float:
        return (self.N - 3) / (self.N - 1)

    @property
    def sin_theta(self) -> float:
        return 2.0 * math.sqrt(self.N - 2) / (self.N - 1)

    @property
    def theta(self) -> float:
        return math.atan2(self.sin_theta, self.cos_theta)


@dataclass(frozen=True)
class ReducedState3:
    """Amplitudes on |ab>, |ba>, |bb>."""

    amp_ab: complex
    amp_ba: complex
    amp_bb: complex

    @classmethod
    def from_array(cls, v) -> "ReducedState3":
        v = np.asarray(v, dtype=complex)
        return cls(complex(v[0]), complex(v[1]), complex(v[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.amp_ab, self.amp_ba, self.amp_bb], dtype=complex)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    @property
    def success_probability(self) -> float:
        return abs(self.amp_ab) ** 2


@dataclass(frozen=True)
class FullCoinedState:
    """
    State in C^N x C^(N-1).

    ``amplitudes`` is ordered by (v, w), w != v, lexicographically, where w
    is the vertex the coin at v points to.
    """

    N: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.N * (self.N - 1),):
            raise ValueError(f"expected {self.N * (self.N - 1)} amplitudes, got {amps.shape}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_grid(cls, grid: np.ndarray) -> "FullCoinedState":
        """Build from an N x N array whose (v, w) entry holds amp(v -> w); diagonal ignored."""
        n = grid.shape[0]
        return cls(n, grid[~np.eye(n, dtype=bool)])

    def to_grid(self) -> np.ndarray:
        grid = np.zeros((self.N, self.N), dtype=complex)
        grid[~np.eye(self.N, dtype=bool)] = self.amplitudes
        return grid

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def vertex_probability(self, v: int) -> float:
        """Position-marginal probability of vertex ``v``."""
        row = self.amplitudes[v * (self.N - 1):(v + 1) * (self.N - 1)]
        return float(np.vdot(row, row).real)


@dataclass(frozen=True)
class SpectrumD:
    """
    Analytic eigensystem of the reduced search operator.

    ``psi_*`` are unit-norm; ``psi_*_raw`` keep the unnormalized closed forms
    (third component 1).  ``values`` and ``pairs`` are ordered
    (psi_phi, psi_plus, psi_minus).
    """

    params: DiscreteParams
    cos_theta: float
    sin_theta: float
    theta: float
    cos_sigma: float
    sin_sigma: float
    sigma: float
    psi_phi: np.ndarray
    psi_plus: np.ndarray
    psi_minus: np.ndarray
    psi_phi_raw: np.ndarray
    psi_plus_raw: np.ndarray
    psi_minus_raw: np.ndarray
    values: tuple[complex, complex, complex]
    pairs: tuple[EigenPair, EigenPair, EigenPair]


# --- operator factors in the {|ab>, |ba>, |bb>} basis -----------------------

def shift_reduced() -> np.ndarray:
    """Flip-flop shift: swaps |ab> and |ba>, fixes |bb>."""
    return np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)


def faulty_shift_reduced(p: DiscreteParams) -> np.ndarray:
    return math.cos(p.phi) * shift_reduced() + 1j * math.sin(p.phi) * np.eye(3)


def coin_reduced(p: DiscreteParams) -> np.ndarray:
    ct, st = p.cos_theta, p.sin_theta
    return np.array([[1, 0, 0], [0, -ct, st], [0, st, ct]], dtype=complex)


def oracle_reduced(p: DiscreteParams) -> np.ndarray:
    return np.diag([-1.0, 1.0, 1.0]).astype(complex)


def reduced_operator(p: DiscreteParams) -> np.ndarray:
    """The search operator U restricted to span{|ab>, |ba>, |bb>}."""
    return faulty_shift_reduced(p) @ coin_reduced(p) @ oracle_reduced(p)


def initial_reduced(p: DiscreteParams) -> ReducedState3:
    """Uniform superposition |s_v> x |s_c> in the reduced basis."""
    root_n = math.sqrt(p.N)
    return ReducedState3(1 / root_n, 1 / root_n, math.sqrt(p.N - 2) / root_n)


def _sigma_parts(p: DiscreteParams) -> tuple[float, float]:
    # cos(sigma) = (1 + cos theta) cos(phi) / 2 = k cos(phi) with k = (N-2)/(N-1).
    # 4 - (1 + cos theta)^2 cos^2(phi) = 4 (1 - k^2) + 4 k^2 sin^2(phi) avoids the
    # cancellation of the literal form at large N.
    k = (p.N - 2) / (p.N - 1)
    cos_sigma = k * math.cos(p.phi)
    one_minus_k2 = (2 * p.N - 3) / (p.N - 1) ** 2
    sin_sigma = math.sqrt(one_minus_k2 + (k * math.sin(p.phi)) ** 2)
    return cos_sigma, sin_sigma


def spectrum(p: DiscreteParams) -> SpectrumD:
    """
    Closed-form eigenpairs of :func:`reduced_operator`, residual-checked.

    Raises
    ------
    AnalyticMismatchError
        If any closed-form pair misses ``U psi = lambda psi`` by more than 1e-10.
    """
    ct, st = p.cos_theta, p.sin_theta
    csc = 1.0 / st
    cot_half = (1.0 + ct) / st
    cos_sigma, sin_sigma = _sigma_parts(p)
    sigma = math.atan2(sin_sigma, cos_sigma)
    phi = p.phi

    psi_phi_raw = np.array([-cot_half, -cot_half, 1.0], dtype=complex)

    def plus_minus(sign: int) -> np.ndarray:
        ph = np.exp(-1j * (-sign * sigma + phi))
        return np.array([(1 - ph) * csc, (-ct + ph) * csc, 1.0], dtype=complex)

    psi_plus_raw = plus_minus(+1)
    psi_minus_raw = plus_minus(-1)
    values = (-np.exp(1j * phi), np.exp(1j * sigma), np.exp(-1j * sigma))

    u = reduced_operator(p)
    hint = list(zip(values, (psi_phi_raw, psi_plus_raw, psi_minus_raw)))
    pairs = unitary_eigensystem_3(u, hint=hint)
    for pair in pairs:
        if pair.residual > SPECTRUM_RESIDUAL_TOL:
            raise AnalyticMismatchError(f"eigen-residual {pair.residual:.3e} at {p}")

    def unit(v):
        return v / np.linalg.norm(v)

    return SpectrumD(
        params=p,
        cos_theta=ct,
        sin_theta=st,
        theta=p.theta,
        cos_sigma=cos_sigma,
        sin_sigma=sin_sigma,
        sigma=sigma,
        psi_phi=unit(psi_phi_raw),
        psi_plus=unit(psi_plus_raw),
        psi_minus=unit(psi_minus_raw),
        psi_phi_raw=psi_phi_raw,
        psi_plus_raw=psi_plus_raw,
        psi_minus_raw=psi_minus_raw,
        values=tuple(complex(v) for v in values),
        pairs=pairs,
    )


def sum_diff_vectors(s: SpectrumD) -> tuple[np.ndarray, np.ndarray]:
    """psi_+ + psi_- and psi_+ - psi_- from the unnormalized eigenvectors."""
    return s.psi_plus_raw + s.psi_minus_raw, s.psi_plus_raw - s.psi_minus_raw


def predicted_runtime(p: DiscreteParams) -> float:
    """Steps pi / (2 sigma) for the exact sigma (no large-N expansion)."""
    cos_sigma, sin_sigma = _sigma_parts(p)
    return math.pi / (2.0 * math.atan2(sin_sigma, cos_sigma))


def predicted_peak_probability(p: DiscreteParams) -> float:
    """Large-N peak success probability 1 / (c^2 + 2), c = phi sqrt(N)."""
    return 1.0 / (p.c ** 2 + 2.0)


def simulate_reduced(p: DiscreteParams, steps: int) -> ProbabilitySeries:
    """
    Iterate the 3x3 search operator from the uniform state.

    The success probability at step t is |<ab|psi(t)>|^2, i.e. only the
    position register is measured.  Returns ``steps + 1`` samples.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    u = reduced_operator(p)
    psi = initial_reduced(p).as_array()
    probs = np.empty(steps + 1)
    for t in range(steps + 1):
        probs[t] = abs(psi[0]) ** 2
        psi = u @ psi
    return ProbabilitySeries("step", np.arange(steps + 1, dtype=float), probs, p)


# --- full coined space -------------------------------------------------------

def _check_cap(p: DiscreteParams, cap: int) -> None:
    if p.N > cap:
        raise OracleSizeError(f"N={p.N} exceeds the full-space oracle cap {cap}")


def uniform_full_state(p: DiscreteParams) -> FullCoinedState:
    """|s_v> x |s_c>: every (v, w) amplitude equal to 1/sqrt(N(N-1))."""
    dim = p.N * (p.N - 1)
    return FullCoinedState(p.N, np.full(dim, 1.0 / math.sqrt(dim), dtype=complex))


def _apply_grid(p: DiscreteParams, grid: np.ndarray, coin: bool, oracle: bool) -> np.ndarray:
    n = p.N
    off = ~np.eye(n, dtype=bool)
    g = grid.copy()
    if oracle:
        g[p.marked, :] *= -1
    if coin:
        means = g.sum(axis=1, keepdims=True) / (n - 1)
        g = np.where(off, 2 * means - g, 0)
    # new(v, w) = cos(phi) old(w, v) + i sin(phi) old(v, w)
    return math.cos(p.phi) * g.T + 1j * math.sin(p.phi) * g


def full_operator_apply(
    p: DiscreteParams,
    s: FullCoinedState,
    *,
    coin: bool = True,
    oracle: bool = True,
    cap: int = DEFAULT_ORACLE_CAP,
) -> FullCoinedState:
    """
    One search step on the full coined space, matrix-free.

    ``coin`` and ``oracle`` can be switched off to isolate the shift.
    """
    _check_cap(p, cap)
    if s.N != p.N:
        raise ValueError(f"state has N={s.N}, params have N={p.N}")
    return FullCoinedState.from_grid(_apply_grid(p, s.to_grid(), coin, oracle))


def project_reduced(p: DiscreteParams, s: FullCoinedState) -> tuple[ReducedState3, float]:
    """
    Components of ``s`` along |ab>, |ba>, |bb> and the norm of the remainder.
    """
    n, a = p.N, p.marked
    grid = s.to_grid()
    others = np.array([v for v in range(n) if v != a])
    ab_vec = np.zeros((n, n), dtype=complex)
    ab_vec[a, others] = 1 / math.sqrt(n - 1)
    ba_vec = np.zeros((n, n), dtype=complex)
    ba_vec[others, a] = 1 / math.sqrt(n - 1)
    bb_vec = np.zeros((n, n), dtype=complex)
    bb_vec[np.ix_(others, others)] = 1 / math.sqrt((n - 1) * (n - 2))
    np.fill_diagonal(bb_vec, 0)
    amps = [np.vdot(b, grid) for b in (ab_vec, ba_vec, bb_vec)]
    remainder = grid - sum(c * b for c, b in zip(amps, (ab_vec, ba_vec, bb_vec)))
    return ReducedState3(*map(complex, amps)), float(np.linalg.norm(remainder))


def simulate_full(p: DiscreteParams, steps: int, cap: int = DEFAULT_ORACLE_CAP) -> ProbabilitySeries:
    """Position-marginal success probability from full-space evolution."""
    _check_cap(p, cap)
    if steps < 0:
        raise ValueError("steps must be non-negative")
    grid = uniform_full_state(p).to_grid()
    probs = np.empty(steps + 1)
    for t in range(steps + 1):
        row = grid[p.marked]
        probs[t] = float(np.vdot(row, row).real)
        grid = _apply_grid(p, grid, True, True)
    return ProbabilitySeries("step", np.arange(steps + 1, dtype=float), probs, p)
