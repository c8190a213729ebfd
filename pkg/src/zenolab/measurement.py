"""
Ideal non-selective measurements and measurement-interrupted evolution.

A measurement is a complete set of orthogonal projectors ``{P_i}`` acting
as ``rho -> sum_i P_i rho P_i``. Only projectors diagonal in the bare level
basis are accepted, so every ``P_i`` commutes with the free Hamiltonian and
the reduction looks the same in the interaction picture.

"n measurements" always means the uniform schedule ``t_k = k T / n`` for
``k = 0..n``: reductions happen at both ends of the window, n + 1 events in
total.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .dynamics import RabiModel, closed_form_propagator
from .errors import ConsistencyError, ValidationError
from .linalg import (
    DEFAULT_TOLERANCES,
    Tolerances,
    as_matrix,
    as_state,
    basis_state,
    dagger,
    pure_density,
    require_density,
)


@dataclass(frozen=True, eq=False)
class ProjectorSet:
    projectors: tuple[np.ndarray, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.projectors) == 0:
            raise ValidationError("projector set is empty")
        if len(self.projectors) != len(self.labels):
            raise ValidationError("need exactly one label per projector")
        dim = np.shape(self.projectors[0])[0]
        total = np.zeros((dim, dim), dtype=complex)
        owned = []
        for p, label in zip(self.projectors, self.labels):
            p = np.array(as_matrix(p, dim))
            diag = np.diag(p)
            if np.any(p - np.diag(diag)) or not np.all(np.isin(diag, (0.0, 1.0))):
                raise ValidationError(f"projector {label!r} must be diagonal with 0/1 entries")
            total += p
            p.setflags(write=False)
            owned.append(p)
        if not np.array_equal(total, np.eye(dim)):
            # diagonal 0/1 projectors summing to I are automatically orthogonal
            raise ValidationError("projectors must be mutually orthogonal and sum to identity")
        object.__setattr__(self, "projectors", tuple(owned))
        object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def from_sectors(cls, sectors: Sequence[Sequence[int]], dim: int,
                     labels: Sequence[str] | None = None) -> ProjectorSet:
        """Build projectors onto groups of basis levels, e.g. ``[[0, 1], [2]]``."""
        projectors = []
        for levels in sectors:
            diag = np.zeros(dim)
            diag[list(levels)] = 1.0
            projectors.append(np.diag(diag).astype(complex))
        if labels is None:
            labels = ["P" + "".join(str(j) for j in levels) for levels in sectors]
        return cls(tuple(projectors), tuple(labels))

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def sector_of(self) -> np.ndarray:
        """Index of the projector that owns each basis level."""
        return np.argmax(np.array([np.diag(p).real for p in self.projectors]), axis=0)


def projector_set(kind: Literal["partial", "full"] = "partial", dim: int = 3) -> ProjectorSet:
    """
    ``"partial"``: is the atom in the top level or not ({P01, P2} for dim 3).
    ``"full"``: which level is the atom in (complete dephasing).
    """
    if kind == "partial":
        if dim < 2:
            raise ValueError("partial measurement needs at least two levels")
        rest = list(range(dim - 1))
        return ProjectorSet.from_sectors([rest, [dim - 1]], dim)
    if kind == "full":
        return ProjectorSet.from_sectors([[j] for j in range(dim)], dim)
    raise ValueError(f"unknown projector kind {kind!r}; expected 'partial' or 'full'")


def _reduce(rho: np.ndarray, projectors: ProjectorSet) -> np.ndarray:
    return sum(p @ rho @ p for p in projectors.projectors)


def reduce(rho, projectors: ProjectorSet, tol: Tolerances | None = None) -> np.ndarray:
    """Non-selective projective measurement ``sum_i P_i rho P_i``."""
    m = require_density(rho, tol, dim=projectors.dim)
    return _reduce(m, projectors)


@dataclass(frozen=True)
class DiscreteSchedule:
    """Uniform measurement times ``t_k = k * window / n`` for ``k = 0..n``."""

    n: int
    window: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError(f"measurement count n must be a positive integer, got {self.n!r}")
        if not (math.isfinite(self.window) and self.window > 0):
            raise ValidationError(f"window must be positive and finite, got {self.window!r}")

    @property
    def spacing(self) -> float:
        return self.window / self.n

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.window, self.n + 1)


def _measured_states(model: RabiModel, projectors: ProjectorSet, schedule: DiscreteSchedule,
                     rho0: np.ndarray) -> list[np.ndarray]:
    """States right after each reduction event t_0..t_n."""
    times = schedule.times
    rho = _reduce(rho0, projectors)
    states = [rho]
    for k in range(1, len(times)):
        u = closed_form_propagator(model, times[k] - times[k - 1])
        rho = _reduce(u @ rho @ dagger(u), projectors)
        states.append(rho)
    return states


def evolve_with_measurements(model: RabiModel, projectors: ProjectorSet, schedule: DiscreteSchedule,
                             rho0, tol: Tolerances | None = None) -> np.ndarray:
    """
    Alternate reductions and free propagation: ``R U_n R ... R U_1 R rho0``.

    Reductions are applied at every schedule time including both ends of
    the window.
    """
    rho0 = require_density(rho0, tol, dim=projectors.dim)
    if projectors.dim != 3:
        raise ValidationError(f"the Rabi model is three-level; projector set has dim {projectors.dim}")
    rho = _measured_states(model, projectors, schedule, rho0)[-1]
    return require_density(rho, tol)


def survival_probability(rho, psi0, tol: float = DEFAULT_TOLERANCES.trace) -> float:
    """``<psi0| rho |psi0>`` as a real number in [0, 1]."""
    m = as_matrix(rho)
    v = as_state(psi0, dim=m.shape[0])
    p = complex(np.vdot(v, m @ v))
    if abs(p.imag) > tol:
        raise ConsistencyError(f"survival probability has imaginary part {p.imag:.3e}")
    if not -tol <= p.real <= 1.0 + tol:
        raise ConsistencyError(f"survival probability {p.real!r} is outside [0, 1]")
    return min(max(p.real, 0.0), 1.0)


@dataclass(frozen=True, eq=False)
class SurvivalCurve:
    """
    Level populations sampled over ``tau = t / T_P``.

    ``n`` and ``period`` describe the measurement schedule (period in tau
    units); both are ``None`` for free evolution.
    """

    tau: np.ndarray
    p0: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    label: str = "free"
    n: int | None = None
    period: float | None = None
    states: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        arrays = [np.array(a, dtype=float) for a in (self.tau, self.p0, self.p1, self.p2)]
        if len({a.shape for a in arrays}) != 1 or arrays[0].ndim != 1:
            raise ValidationError("tau, p0, p1, p2 must be 1-d and of equal length")
        tau, p0, p1, p2 = arrays
        if np.any(np.diff(tau) <= 0):
            raise ValidationError("tau must be strictly increasing")
        pops = np.stack([p0, p1, p2])
        if pops.size and (pops.min() < -1e-10 or pops.max() > 1 + 1e-10):
            raise ValidationError("populations must lie in [0, 1]")
        if pops.size and np.max(np.abs(pops.sum(axis=0) - 1.0)) > 1e-10:
            raise ValidationError("populations must sum to 1 at every sample")
        pops = np.clip(pops, 0.0, 1.0)
        for name, arr in zip(("tau", "p0", "p1", "p2"), (tau, *pops)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.tau)

    @classmethod
    def from_states(cls, tau, states: np.ndarray, **kwargs) -> SurvivalCurve:
        states = np.asarray(states)
        pops = np.real(np.diagonal(states, axis1=-2, axis2=-1)) if len(states) else np.zeros((0, 3))
        return cls(np.asarray(tau, dtype=float), pops[:, 0], pops[:, 1], pops[:, 2],
                   states=states, **kwargs)


def survival_curve(model: RabiModel, projectors: ProjectorSet | None, schedule: DiscreteSchedule | None,
                   grid, rho0=None, tol: Tolerances | None = None) -> SurvivalCurve:
    """
    Populations at each ``tau`` in ``grid``.

    For a measured curve, every reduction scheduled at ``t_k <= tau * T_P``
    (including ``t_0 = 0``) has been applied, followed by free evolution from
    the last such ``t_k`` to the query time. No reduction is appended at the
    query time itself unless it coincides with a schedule time.
    """
    if (projectors is None) != (schedule is None):
        raise ValueError("projectors and schedule must be given together (or both omitted)")
    tau = np.asarray(grid, dtype=float)
    if tau.ndim != 1 or tau.size == 0:
        raise ValueError("grid must be a non-empty 1-d sequence")
    if np.any(np.diff(tau) <= 0):
        raise ValueError("grid must be strictly increasing")
    if tau[0] < 0:
        raise ValueError("grid must start at tau >= 0")
    rho0 = pure_density(basis_state(0)) if rho0 is None else rho0
    rho0 = require_density(rho0, tol, dim=3)
    t_p = model.t_poincare
    t = tau * t_p

    if schedule is None:
        states = []
        for ti in t:
            u = closed_form_propagator(model, ti)
            states.append(u @ rho0 @ dagger(u))
        return SurvivalCurve.from_states(tau, np.array(states))

    if projectors.dim != 3:
        raise ValidationError(f"the Rabi model is three-level; projector set has dim {projectors.dim}")
    times = schedule.times
    if t[-1] > schedule.window * (1 + 1e-12):
        raise ValueError(
            f"grid extends to tau={tau[-1]!r} beyond the schedule window "
            f"(tau_max={schedule.window / t_p!r})"
        )
    measured = _measured_states(model, projectors, schedule, rho0)
    slack = 1e-12 * schedule.window
    idx = np.searchsorted(times, t + slack, side="right") - 1
    states = []
    for ti, k in zip(t, idx):
        u = closed_form_propagator(model, max(ti - times[k], 0.0))
        states.append(u @ measured[k] @ dagger(u))
    return SurvivalCurve.from_states(
        tau, np.array(states), label=f"n={schedule.n}", n=schedule.n,
        period=schedule.spacing / t_p,
    )
