"""
Small dense complex linear algebra used by both walk models.

Matrices and vectors are plain ``numpy`` arrays of dtype ``complex128``.
The eigen-solvers here only handle the two fixed sizes the walks need:
2x2 Hermitian matrices (continuous-time Hamiltonian in the {|a>, |b>}
basis) and 3x3 unitaries (discrete-time search operator in the
{|ab>, |ba>, |bb>} basis).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .errors import AnalyticMismatchError

__all__ = [
    "EigenPair",
    "as_matrix",
    "as_vector",
    "mat_vec",
    "is_unitary",
    "hermitian_eigensystem_2",
    "unitary_eigensystem_3",
    "unitary_fractional_power_apply",
    "principal_power",
]

HERMITIAN_TOL = 1e-12
UNITARY_PRE_TOL = 1e-10
HINT_RESIDUAL_TOL = 1e-8
RESIDUAL_TOL_2 = 1e-12
RESIDUAL_TOL_3 = 1e-10
ORTHONORMAL_TOL = 1e-10


@dataclass(frozen=True)
class EigenPair:
    """An eigenvalue with its unit-norm eigenvector and the residual ||Mv - lv||."""

    value: complex
    vector: np.ndarray
    residual: float


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-D complex array, rejecting NaN/Inf entries."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def as_vector(v) -> np.ndarray:
    """Coerce to a finite 1-D complex array, rejecting NaN/Inf entries."""
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector has non-finite entries")
    return arr


def mat_vec(m, v) -> np.ndarray:
    """Matrix-vector product with dimension checking."""
    m = as_matrix(m)
    v = as_vector(v)
    if m.shape[1] != v.shape[0]:
        raise ValueError(f"dimension mismatch: {m.shape} @ ({v.shape[0]},)")
    return m @ v


def is_unitary(m, tol: float = 1e-12) -> bool:
    """True iff max |(M^dagger M - I)_ij| <= tol."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"unitarity needs a square matrix, got {m.shape}")
    dev = m.conj().T @ m - np.eye(m.shape[0])
    return bool(np.max(np.abs(dev)) <= tol)


def _unit(v: np.ndarray) -> np.ndarray:
    # pre-scale by the largest entry; complex division by a subnormal overflows
    big = float(np.max(np.abs(v)))
    w = v.real / big + 1j * (v.imag / big)
    return w / np.linalg.norm(w)


def _residual(m: np.ndarray, value: complex, vec: np.ndarray) -> float:
    return float(np.linalg.norm(m @ vec - value * vec))


def hermitian_eigensystem_2(m) -> tuple[EigenPair, EigenPair]:
    """
    Closed-form eigensystem of a 2x2 Hermitian matrix.

    Returns
    -------
    (EigenPair, EigenPair)
        Ascending real eigenvalues with orthonormal eigenvectors.
    """
    m = as_matrix(m)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian within tolerance")

    # solve the unit-scaled problem so tiny or huge entries cannot under/overflow
    scale = float(np.max(np.abs(m))) or 1.0
    ms = m.real / scale + 1j * (m.imag / scale)
    a = ms[0, 0].real
    d = ms[1, 1].real
    b = 0.5 * (ms[0, 1] + np.conj(ms[1, 0]))
    mean = 0.5 * (a + d)
    half_diff = 0.5 * (a - d)
    radius = float(np.hypot(half_diff, abs(b)))
    values = (mean - radius, mean + radius)

    if abs(b) == 0.0:
        if a <= d:
            vecs = (np.array([1, 0], complex), np.array([0, 1], complex))
        else:
            vecs = (np.array([0, 1], complex), np.array([1, 0], complex))
    else:
        # Build the lower eigenvector from whichever row is better conditioned,
        # then take its orthogonal complement for the upper one.
        lam = values[0]
        cand1 = np.array([b, lam - a], dtype=complex)
        cand2 = np.array([lam - d, np.conj(b)], dtype=complex)
        low = cand1 if np.linalg.norm(cand1) >= np.linalg.norm(cand2) else cand2
        low = _unit(low)
        high = np.array([-np.conj(low[1]), np.conj(low[0])], dtype=complex)
        vecs = (low, high)

    values = tuple(scale * val for val in values)
    pairs = tuple(
        EigenPair(complex(val), vec, _residual(m, val, vec)) for val, vec in zip(values, vecs)
    )
    for pair in pairs:
        if pair.residual > RESIDUAL_TOL_2 * max(1.0, scale):
            raise AnalyticMismatchError(f"2x2 eigen-residual {pair.residual:.3e}")
    return pairs  # type: ignore[return-value]


def _gram_schmidt(vectors: Sequence[np.ndarray]) -> list[np.ndarray]:
    basis: list[np.ndarray] = []
    for v in vectors:
        w = np.array(v, dtype=complex)
        for _ in range(2):  # re-orthogonalize once for stability
            for q in basis:
                w = w - np.vdot(q, w) * q
        norm = np.linalg.norm(w)
        if norm == 0.0:
            raise ValueError("hint vectors are linearly dependent")
        basis.append(w / norm)
    return basis


def unitary_eigensystem_3(
    m, hint: Optional[Sequence[tuple[complex, np.ndarray]]] = None
) -> tuple[EigenPair, EigenPair, EigenPair]:
    """
    Eigensystem of a 3x3 unitary matrix.

    Parameters
    ----------
    m : array_like
        3x3 unitary matrix.
    hint : sequence of (value, vector), optional
        Analytic eigenpairs. When given, they are checked against ``m`` and
        orthonormalized instead of solving from scratch.

    Raises
    ------
    AnalyticMismatchError
        If a hinted pair has residual above 1e-8 after normalization.
    """
    m = as_matrix(m)
    if m.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got {m.shape}")
    if not is_unitary(m, UNITARY_PRE_TOL):
        raise ValueError("matrix is not unitary within 1e-10")

    if hint is not None:
        if len(hint) != 3:
            raise ValueError("hint must hold three eigenpairs")
        values = [complex(val) for val, _ in hint]
        raw = [as_vector(vec) for _, vec in hint]
        for val, vec in zip(values, raw):
            unit = vec / np.linalg.norm(vec)
            res = _residual(m, val, unit)
            if res > HINT_RESIDUAL_TOL:
                raise AnalyticMismatchError(
                    f"analytic eigenpair residual {res:.3e} exceeds {HINT_RESIDUAL_TOL}"
                )
        # Distinct eigenvalues of a normal matrix already give orthogonal
        # vectors; Gram-Schmidt only removes rounding (and fixes degenerate
        # clusters).
        vecs = _gram_schmidt(raw)
    else:
        # Complex Schur form of a normal matrix is diagonal with unitary Z.
        t, z = scipy.linalg.schur(m, output="complex")
        values = [complex(x) for x in np.diag(t)]
        vecs = _gram_schmidt([z[:, k] for k in range(3)])

    pairs = tuple(EigenPair(val, vec, _residual(m, val, vec)) for val, vec in zip(values, vecs))
    for pair in pairs:
        if pair.residual > RESIDUAL_TOL_3:
            raise AnalyticMismatchError(f"3x3 eigen-residual {pair.residual:.3e}")
    return pairs  # type: ignore[return-value]


def principal_power(value: complex, exponent: float) -> complex:
    """value**exponent on the principal branch, arg(value) taken in (-pi, pi]."""
    angle = float(np.angle(value))
    if angle == -np.pi:
        angle = np.pi
    return abs(value) ** exponent * np.exp(1j * exponent * angle)


def unitary_fractional_power_apply(
    pairs: Sequence[EigenPair], exponent: float, v
) -> np.ndarray:
    """Apply M**exponent to ``v`` through the orthonormal eigenbasis of M."""
    v = as_vector(v)
    basis = np.column_stack([p.vector for p in pairs])
    if basis.shape[0] != v.shape[0]:
        raise ValueError(f"dimension mismatch: basis {basis.shape}, vector {v.shape}")
    gram = basis.conj().T @ basis
    if np.max(np.abs(gram - np.eye(basis.shape[1]))) > ORTHONORMAL_TOL:
        raise ValueError("eigenbasis is not orthonormal within 1e-10")
    coeffs = basis.conj().T @ v
    phases = np.array([principal_power(p.value, exponent) for p in pairs])
    return basis @ (phases * coeffs)
