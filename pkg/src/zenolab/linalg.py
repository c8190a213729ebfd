"""
Small dense complex-matrix kernel.

Matrices are plain ``numpy`` complex arrays. Density matrices and state
vectors are not wrapped in classes; instead the helpers here validate them
at module boundaries and report defects.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used for validity checks."""

    hermiticity: float = 1e-12
    trace: float = 1e-12
    unitarity: float = 1e-12
    positivity: float = 1e-10
    oracle: float = 1e-10


DEFAULT_TOLERANCES = Tolerances()


def as_matrix(x, dim: int | None = None) -> np.ndarray:
    """Coerce to a finite square complex array, optionally of a given size."""
    m = np.asarray(x, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValidationError(f"expected a non-empty square matrix, got shape {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise ValidationError(f"expected a {dim}x{dim} matrix, got {m.shape[0]}x{m.shape[0]}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    return m


def as_state(psi, dim: int | None = None, tol: float = 1e-12) -> np.ndarray:
    v = np.asarray(psi, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise ValidationError(f"expected a non-empty vector, got shape {v.shape}")
    if dim is not None and v.size != dim:
        raise ValidationError(f"expected a state of dimension {dim}, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise ValidationError("state has non-finite amplitudes")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > tol:
        raise ValidationError(f"state is not normalized: |psi| = {norm!r}")
    return v


def basis_state(j: int, dim: int = 3) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[j] = 1.0
    return v


def pure_density(psi) -> np.ndarray:
    """Return |psi><psi|."""
    v = np.asarray(psi, dtype=complex)
    return np.outer(v, v.conj())


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def hermiticity_defect(m: np.ndarray) -> tuple[float, tuple[int, int]]:
    """Largest |m - m^H| entry and its position."""
    diff = np.abs(m - dagger(m))
    idx = np.unravel_index(np.argmax(diff), diff.shape)
    return float(diff[idx]), (int(idx[0]), int(idx[1]))


def unitarity_defect(u: np.ndarray) -> float:
    return float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))))


def hermitian_propagator(generator, duration: float,
                         tol: float = DEFAULT_TOLERANCES.hermiticity) -> np.ndarray:
    """
    Compute ``exp(-i * generator * duration)`` for a Hermitian generator.

    The exponential is taken through the eigendecomposition of the generator,
    which keeps the result unitary to rounding error.

    Raises
    ------
    ValidationError
        If the generator is not Hermitian within ``tol`` or ``duration`` is
        not finite.
    """
    m = as_matrix(generator)
    if not np.isfinite(duration):
        raise ValidationError(f"duration must be finite, got {duration!r}")
    defect, (i, j) = hermiticity_defect(m)
    if defect > tol:
        raise ValidationError(
            f"generator is not Hermitian: |M - M^H| = {defect:.3e} at entry ({i}, {j})"
        )
    m = 0.5 * (m + dagger(m))
    w, v = np.linalg.eigh(m)
    return (v * np.exp(-1j * w * duration)) @ dagger(v)


@dataclass(frozen=True)
class DensityReport:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    passed: bool

    def describe(self) -> str:
        status = "valid" if self.passed else "invalid"
        return (
            f"{status} density matrix: hermiticity defect {self.hermiticity_defect:.3e}, "
            f"trace defect {self.trace_defect:.3e}, min eigenvalue {self.min_eigenvalue:.3e}"
        )


def check_density(rho, tol: Tolerances | float | None = None) -> DensityReport:
    """
    Report how far ``rho`` is from a valid density matrix.

    ``tol`` may be a :class:`Tolerances` instance or a single float applied
    to all three checks. Never raises for square input; the verdict is in
    ``report.passed``.
    """
    if tol is None:
        tol = DEFAULT_TOLERANCES
    if isinstance(tol, Tolerances):
        herm_tol, trace_tol, pos_tol = tol.hermiticity, tol.trace, tol.positivity
    else:
        herm_tol = trace_tol = pos_tol = float(tol)

    m = np.asarray(rho, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        return DensityReport(np.inf, np.inf, -np.inf, False)

    herm, _ = hermiticity_defect(m)
    trace_defect = float(abs(np.trace(m) - 1.0))
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (m + dagger(m)))))
    passed = herm <= herm_tol and trace_defect <= trace_tol and min_eig >= -pos_tol
    return DensityReport(herm, trace_defect, min_eig, passed)


def require_density(rho, tol: Tolerances | float | None = None, dim: int | None = None) -> np.ndarray:
    """Return ``rho`` as an array, raising ValidationError if it is not a valid state."""
    m = as_matrix(rho, dim)
    report = check_density(m, tol)
    if not report.passed:
        raise ValidationError(report.describe())
    return m
