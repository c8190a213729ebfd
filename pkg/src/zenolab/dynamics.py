"""
Three-level atom driven on the 0-1 and 1-2 transitions.

Units: hbar = 1, frequencies in rad per unit time. In the interaction
picture under the rotating wave approximation the amplitudes obey
``da/dt = -i M a`` with a constant 3x3 generator ``M``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import UndefinedRecurrenceError, ValidationError
from .linalg import as_matrix, as_state

SQRT15 = math.sqrt(15.0)


@dataclass(frozen=True)
class RabiModel:
    """Rabi frequencies and phases of the two resonant drives."""

    omega01: float = 1.0
    omega12: float = SQRT15
    phi01: float = 0.0
    phi12: float = 0.0

    def __post_init__(self):
        for name in ("omega01", "omega12", "phi01", "phi12"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
        for name in ("omega01", "omega12"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0, got {getattr(self, name)!r}")

    @classmethod
    def ize_scenario(cls, omega01: float = 1.0, phi01: float = 0.0, phi12: float = 0.0) -> RabiModel:
        """The Omega12 = sqrt(15) * Omega01 configuration, for which Omega = 4 * Omega01."""
        return cls(omega01, SQRT15 * omega01, phi01, phi12)

    @property
    def omega(self) -> float:
        return math.sqrt(self.omega01 * self.omega01 + self.omega12 * self.omega12)

    @property
    def has_recurrence(self) -> bool:
        return self.omega > 0

    @property
    def t_poincare(self) -> float:
        """Recurrence period 2*pi/Omega of the free evolution."""
        if not self.has_recurrence:
            raise UndefinedRecurrenceError("both Rabi frequencies are zero; no Poincare time")
        return 2.0 * math.pi / self.omega


@dataclass(frozen=True)
class AtomLevels:
    """Bare level frequencies omega_0, omega_1, omega_2 of the free Hamiltonian."""

    omega0: float
    omega1: float
    omega2: float

    def __post_init__(self):
        if not all(math.isfinite(w) for w in self.as_array()):
            raise ValidationError("level frequencies must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.omega0, self.omega1, self.omega2], dtype=float)

    def transition(self, i: int, j: int) -> float:
        w = self.as_array()
        return float(w[i] - w[j])


def rwa_hamiltonian(model: RabiModel) -> np.ndarray:
    """Interaction-picture RWA generator ``M`` of ``da/dt = -i M a``."""
    c01 = model.omega01 * complex(math.cos(model.phi01), math.sin(model.phi01))
    c12 = model.omega12 * complex(math.cos(model.phi12), math.sin(model.phi12))
    return np.array(
        [
            [0.0, c01, 0.0],
            [c01.conjugate(), 0.0, c12],
            [0.0, c12.conjugate(), 0.0],
        ],
        dtype=complex,
    )


def closed_form_propagator(model: RabiModel, dt: float) -> np.ndarray:
    """
    Analytic evolution operator ``U(t + dt, t)`` for the RWA generator.

    With alpha = Omega * dt the entries are trigonometric in alpha; the
    result is periodic in ``dt`` with period 2*pi/Omega. Negative ``dt``
    propagates backwards. Both couplings off gives the identity.
    """
    if not math.isfinite(dt):
        raise ValidationError(f"dt must be finite, got {dt!r}")
    w01, w12 = model.omega01, model.omega12
    om2 = w01 * w01 + w12 * w12
    if om2 == 0.0:
        return np.eye(3, dtype=complex)
    om = math.sqrt(om2)
    alpha = om * dt
    c, s = math.cos(alpha), math.sin(alpha)
    e01 = complex(math.cos(model.phi01), math.sin(model.phi01))
    e12 = complex(math.cos(model.phi12), math.sin(model.phi12))

    u = np.empty((3, 3), dtype=complex)
    u[0, 0] = (w12 * w12 + w01 * w01 * c) / om2
    u[0, 1] = -1j * (w01 / om) * e01 * s
    u[0, 2] = -(w01 * w12 / om2) * e01 * e12 * (1.0 - c)
    u[1, 0] = -1j * (w01 / om) * e01.conjugate() * s
    u[1, 1] = c
    u[1, 2] = -1j * (w12 / om) * e12 * s
    u[2, 0] = -(w01 * w12 / om2) * (e01 * e12).conjugate() * (1.0 - c)
    u[2, 1] = -1j * (w12 / om) * e12.conjugate() * s
    u[2, 2] = (w01 * w01 + w12 * w12 * c) / om2
    return u


def pure_state_evolve(model: RabiModel, psi0, t: float) -> np.ndarray:
    psi = as_state(psi0, dim=3)
    return closed_form_propagator(model, t) @ psi


def interaction_transform(x, levels: AtomLevels, t: float,
                          direction: Literal["to", "from"] = "to") -> np.ndarray:
    """
    Conjugate ``x`` by the free evolution ``exp(i H0 t)``.

    ``direction="to"`` maps a Schrodinger-picture operator to the
    interaction picture, ``exp(i H0 t) x exp(-i H0 t)``; ``"from"`` undoes it.
    """
    m = as_matrix(x, dim=3)
    if direction == "to":
        sign = 1.0
    elif direction == "from":
        sign = -1.0
    else:
        raise ValueError(f"direction must be 'to' or 'from', got {direction!r}")
    w = levels.as_array()
    phase = np.exp(1j * sign * t * (w[:, None] - w[None, :]))
    return m * phase


@dataclass(frozen=True)
class RWAReport:
    omega_max: float
    threshold: float
    # (label, ratio) pairs; ratios are |frequency| / omega_max
    splitting_ratios: list[tuple[str, float]] = field(default_factory=list)
    detuning_ratios: list[tuple[str, float]] = field(default_factory=list)

    @property
    def failures(self) -> list[tuple[str, float]]:
        return [(k, r) for k, r in self.splitting_ratios + self.detuning_ratios if r < self.threshold]

    @property
    def passed(self) -> bool:
        return not self.failures


def validate_rwa(levels: AtomLevels, model: RabiModel, ratio_threshold: float = 100.0) -> RWAReport:
    """
    Advisory check that level splittings and their differences dominate the
    couplings. The coupling scale is ``max(omega01, omega12)``.
    """
    if not ratio_threshold > 1:
        raise ValueError(f"ratio_threshold must be > 1, got {ratio_threshold!r}")
    omega_max = max(model.omega01, model.omega12)

    def ratio(x: float) -> float:
        if omega_max == 0:
            return math.inf
        return abs(x) / omega_max

    pairs = [(i, j) for i in range(3) for j in range(3) if i != j]
    splitting = [(f"w{i}{j}", ratio(levels.transition(i, j))) for i, j in pairs if i > j]
    detuning = []
    for (i, j), (k, l) in itertools.combinations(pairs, 2):
        if {i, j} == {k, l}:
            continue
        diff = levels.transition(i, j) - levels.transition(k, l)
        detuning.append((f"w{i}{j}-w{k}{l}", ratio(diff)))
    return RWAReport(omega_max, ratio_threshold, splitting, detuning)
