"""
Continuous-measurement master equation.

    d rho / dt = -i [M, rho] - D(t)/2 * sum_i [P_i, [P_i, rho]]

where ``M`` is the interaction-picture generator and ``D(t) dt`` is the
probability of a measurement in ``(t, t + dt)``. A delta train of
measurement events is approximated by narrow Gaussian bumps of adjustable
weight: a bump of weight ``w`` damps every cross-sector coherence by
``exp(-w)``, so ideal projective reduction is the ``w -> inf`` limit.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from .dynamics import RabiModel, rwa_hamiltonian
from .errors import AccuracyError, ValidationError
from .linalg import Tolerances, as_matrix, check_density, commutator, dagger, require_density
from .measurement import ProjectorSet

MAX_DEFECT = 1e-6
DEFAULT_WEIGHT = 50.0
STEPS_PER_POINCARE = 4096
STEPS_PER_WIDTH = 10
# bumps further apart than this many widths do not overlap appreciably
MIN_SPACING_WIDTHS = 6.0


@dataclass(frozen=True, eq=False)
class RateFunction:
    """Measurement rate ``D(t) >= 0``; call it with a scalar or an array of times."""

    func: Callable[[np.ndarray], np.ndarray]
    kind: Literal["constant", "delta_train", "custom"]
    value: float | None = None
    times: np.ndarray = field(default_factory=lambda: np.zeros(0))
    width: float | None = None
    weight: float | None = None

    def __call__(self, t):
        d = np.asarray(self.func(np.asarray(t, dtype=float)), dtype=float)
        if np.any(d < 0) or not np.all(np.isfinite(d)):
            raise ValidationError("measurement rate must be finite and non-negative")
        return d


def constant_rate(value: float) -> RateFunction:
    if not (math.isfinite(value) and value >= 0):
        raise ValidationError(f"rate must be finite and >= 0, got {value!r}")
    return RateFunction(lambda t: np.full(np.shape(t), float(value)), "constant", value=float(value))


def custom_rate(func: Callable[[float], float]) -> RateFunction:
    vectorized = np.vectorize(func, otypes=[float])
    return RateFunction(vectorized, "custom")


def delta_train_rate(times: Sequence[float], width: float, weight: float = DEFAULT_WEIGHT) -> RateFunction:
    """
    ``D(t) = weight * sum_k g(t - t_k)`` with ``g`` a unit-area Gaussian of
    standard deviation ``width``.
    """
    if not (math.isfinite(width) and width > 0):
        raise ValidationError(f"width must be positive, got {width!r}")
    if not (math.isfinite(weight) and weight > 0):
        raise ValidationError(f"weight must be positive, got {weight!r}")
    centers = np.sort(np.asarray(times, dtype=float).ravel())
    if not np.all(np.isfinite(centers)):
        raise ValidationError("event times must be finite")
    if centers.size > 1 and np.min(np.diff(centers)) < MIN_SPACING_WIDTHS * width:
        warnings.warn(
            f"delta-train bumps overlap: spacing {np.min(np.diff(centers)):.3g} "
            f"< {MIN_SPACING_WIDTHS:g} * width ({width:.3g})",
            stacklevel=2,
        )
    norm = weight / (width * math.sqrt(2.0 * math.pi))

    def func(t: np.ndarray) -> np.ndarray:
        if centers.size == 0:
            return np.zeros(np.shape(t))
        z = (np.asarray(t)[..., None] - centers) / width
        return norm * np.exp(-0.5 * z * z).sum(axis=-1)

    centers.setflags(write=False)
    return RateFunction(func, "delta_train", times=centers, width=float(width), weight=float(weight))


def lindblad_rhs(rho, generator, rate: float, projectors: ProjectorSet) -> np.ndarray:
    """Right-hand side of the measurement master equation at one instant."""
    if not rate >= 0:
        raise ValidationError(f"measurement rate must be >= 0, got {rate!r}")
    rho = as_matrix(rho)
    m = as_matrix(generator, rho.shape[0])
    if projectors.dim != rho.shape[0]:
        raise ValidationError("projector set and density matrix dimensions differ")
    out = -1j * commutator(m, rho)
    if rate:
        dissipator = sum(commutator(p, commutator(p, rho)) for p in projectors.projectors)
        out = out - 0.5 * rate * dissipator
    return out


def _superoperators(generator: np.ndarray, projectors: ProjectorSet) -> tuple[np.ndarray, np.ndarray]:
    """Row-major vectorized forms of the coherent part and of the unit-rate dissipator."""
    dim = generator.shape[0]
    eye = np.eye(dim)
    coherent = -1j * (np.kron(generator, eye) - np.kron(eye, generator.T))
    dissipator = np.zeros((dim * dim, dim * dim), dtype=complex)
    for p in projectors.projectors:
        p2 = p @ p
        # [P, [P, rho]] = P^2 rho + rho P^2 - 2 P rho P
        dissipator += np.kron(p2, eye) + np.kron(eye, p2.T) - 2.0 * np.kron(p, p.T)
    return coherent, -0.5 * dissipator


def _rk4_matrix(a: np.ndarray, h: float) -> np.ndarray:
    """One classical RK4 step for a constant linear system, as a matrix."""
    ha = h * a
    ha2 = ha @ ha
    ha3 = ha2 @ ha
    return np.eye(a.shape[0]) + ha + ha2 / 2.0 + ha3 / 6.0 + ha3 @ ha / 24.0


def default_step(model: RabiModel, rate: RateFunction) -> float:
    """``min(T_P / 4096, width / 10)``; without couplings only the width term applies."""
    candidates = []
    if model.has_recurrence:
        candidates.append(model.t_poincare / STEPS_PER_POINCARE)
    if rate.width is not None:
        candidates.append(rate.width / STEPS_PER_WIDTH)
    if not candidates:
        raise ValidationError("no time scale to pick a step from; pass step explicitly")
    return min(candidates)


@dataclass(frozen=True, eq=False)
class LindbladResult:
    """
    Final state plus the defects measured before the closing
    Hermitize-and-renormalize correction.
    """

    rho: np.ndarray
    trace_defect: float
    hermiticity_defect: float
    min_eigenvalue: float
    steps: int
    step: float


def _check_inputs(rho0, model, projectors, rate, t_end, step, tol):
    if projectors.dim != 3:
        raise ValidationError(f"the Rabi model is three-level; projector set has dim {projectors.dim}")
    rho0 = require_density(rho0, tol, dim=3)
    if not (math.isfinite(t_end) and t_end > 0):
        raise ValidationError(f"t_end must be positive, got {t_end!r}")
    if step is None:
        step = default_step(model, rate)
    if not (math.isfinite(step) and step > 0):
        raise ValidationError(f"step must be positive, got {step!r}")
    if rate.width is not None and step > rate.width / STEPS_PER_WIDTH * (1 + 1e-12):
        raise ValidationError(
            f"step {step:.3g} too coarse for delta-train width {rate.width:.3g}; "
            f"need step <= width/{STEPS_PER_WIDTH}"
        )
    if rate.kind == "delta_train" and rate.times.size:
        slack = 1e-12 * t_end
        if rate.times[0] < -slack or rate.times[-1] > t_end + slack:
            raise ValidationError("delta-train event times must lie inside [0, t_end]")
    return rho0, step


def integrate_trajectory(rho0, model: RabiModel, projectors: ProjectorSet, rate: RateFunction,
                         times, step: float | None = None,
                         tol: Tolerances | None = None) -> tuple[np.ndarray, int]:
    """
    Fixed-step RK4 integration from ``t = 0``, sampled at ``times``.

    Each interval between consecutive sample times is split into equal
    substeps no longer than ``step``. Returns the raw (uncorrected) states,
    shape ``(len(times), 3, 3)``, and the total number of RK4 steps.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0 or times[0] < 0 or np.any(np.diff(times) <= 0):
        raise ValidationError("sample times must be non-negative and strictly increasing")
    rho0, step = _check_inputs(rho0, model, projectors, rate, float(times[-1]), step, tol)

    coherent, dissipator = _superoperators(rwa_hamiltonian(model), projectors)
    cache: dict[float, np.ndarray] = {}

    def rk4_constant(d: float, h: float) -> np.ndarray:
        key = (d, h)
        if key not in cache:
            if len(cache) > 64:
                cache.clear()
            cache[key] = _rk4_matrix(coherent + d * dissipator, h)
        return cache[key]

    v = rho0.reshape(-1).copy()
    out = []
    t_prev, total = 0.0, 0
    for t_next in times:
        span = t_next - t_prev
        nsub = max(int(math.ceil(span / step - 1e-9)), 1) if span > 0 else 0
        if nsub:
            h = span / nsub
            nodes = t_prev + h * np.arange(2 * nsub + 1) / 2.0
            d = rate(nodes)
            for i in range(nsub):
                d0, d1, d2 = d[2 * i], d[2 * i + 1], d[2 * i + 2]
                if d0 == d1 == d2:
                    v = rk4_constant(float(d0), h) @ v
                    continue
                k1 = (coherent + d0 * dissipator) @ v
                mid = coherent + d1 * dissipator
                k2 = mid @ (v + 0.5 * h * k1)
                k3 = mid @ (v + 0.5 * h * k2)
                k4 = (coherent + d2 * dissipator) @ (v + h * k3)
                v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            total += nsub
        out.append(v.reshape(3, 3).copy())
        t_prev = t_next
    return np.array(out), total


def integrate(rho0, model: RabiModel, projectors: ProjectorSet, rate: RateFunction, t_end: float,
              step: float | None = None, checkpoints: int = 100,
              tol: Tolerances | None = None) -> LindbladResult:
    """
    Integrate the master equation to ``t_end``.

    Positivity is checked at ``checkpoints`` evenly spaced interior times.
    The final state is Hermitized and trace-renormalized once; the defects
    seen before that correction are reported, and any defect of
    ``MAX_DEFECT`` or more raises :class:`AccuracyError`.
    """
    rho0, step = _check_inputs(rho0, model, projectors, rate, t_end, step, tol)
    sample = np.linspace(0.0, t_end, checkpoints + 1)[1:]
    states, total = integrate_trajectory(rho0, model, projectors, rate, sample, step, tol)
    raw = states[-1]
    min_eig = min(check_density(s).min_eigenvalue for s in states)
    herm = float(np.max(np.abs(raw - dagger(raw))))
    trace = complex(np.trace(raw))
    trace_defect = abs(trace - 1.0)
    if herm >= MAX_DEFECT or trace_defect >= MAX_DEFECT or min_eig <= -MAX_DEFECT:
        raise AccuracyError(
            f"integration drifted: hermiticity defect {herm:.3e}, trace defect {trace_defect:.3e}, "
            f"min eigenvalue {min_eig:.3e} (limit {MAX_DEFECT:g})"
        )
    rho = 0.5 * (raw + dagger(raw))
    rho = rho / np.trace(rho).real
    return LindbladResult(rho, trace_defect, herm, min_eig, total, step)
