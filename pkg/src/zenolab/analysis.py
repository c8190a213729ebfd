"""
Poincare time, limiting survival curves and Zeno / inverse-Zeno detection.

A measured curve shows the Zeno effect (QZE) on an interval where its
survival probability exceeds the free one, and the inverse effect (IZE)
where it falls below. Intervals must end no later than the Poincare time,
i.e. ``tau <= 1``, and the measurement schedule must be periodic with a
period no longer than the Poincare time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .dynamics import RabiModel, closed_form_propagator
from .errors import ValidationError
from .measurement import SurvivalCurve

DEFAULT_EPSILON = 1e-3
MIN_INTERVAL_POINTS = 3

Regime = Literal["QZE", "IZE", "none", "mixed"]


def poincare_time(model: RabiModel) -> float:
    return model.t_poincare


@dataclass(frozen=True, eq=False)
class ReferenceCurves:
    """
    ``rabi_limit``: two-level Rabi flopping cos^2(Omega01 * T_P * tau), the
    many-measurement limit with level 2 decoupled.
    ``free``: survival probability without measurements.
    """

    tau: np.ndarray
    rabi_limit: np.ndarray
    free: np.ndarray


def rabi_limit(model: RabiModel, tau) -> np.ndarray:
    return np.cos(model.omega01 * model.t_poincare * np.asarray(tau, dtype=float)) ** 2


def free_survival(model: RabiModel, tau) -> np.ndarray:
    t_p = model.t_poincare
    return np.array([abs(closed_form_propagator(model, x * t_p)[0, 0]) ** 2
                     for x in np.atleast_1d(np.asarray(tau, dtype=float))])


def reference_curves(model: RabiModel, grid) -> ReferenceCurves:
    tau = np.asarray(grid, dtype=float)
    return ReferenceCurves(tau, rabi_limit(model, tau), free_survival(model, tau))


def defreezing_error(model: RabiModel, measured: SurvivalCurve) -> float:
    """Largest deviation of the measured survival curve from the Rabi limit."""
    return float(np.max(np.abs(measured.p0 - rabi_limit(model, measured.tau))))


@dataclass(frozen=True)
class ZenoInterval:
    start: float
    end: float
    regime: Literal["QZE", "IZE"]
    # largest |P_measured - P_free| inside the interval
    peak: float


@dataclass(frozen=True)
class ZenoVerdict:
    regime: Regime
    intervals: list[ZenoInterval] = field(default_factory=list)
    margin: float = 0.0
    epsilon: float = DEFAULT_EPSILON

    def of(self, regime: str) -> list[ZenoInterval]:
        return [iv for iv in self.intervals if iv.regime == regime]

    def to_dict(self) -> dict:
        return {
            "regime": self.regime,
            "margin": self.margin,
            "epsilon": self.epsilon,
            "intervals": [
                {"start": iv.start, "end": iv.end, "regime": iv.regime, "peak": iv.peak}
                for iv in self.intervals
            ],
        }


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Inclusive index ranges of maximal runs of True."""
    padded = np.concatenate([[False], mask, [False]])
    edges = np.flatnonzero(np.diff(padded.astype(np.int8)))
    return [(int(a), int(b) - 1) for a, b in zip(edges[::2], edges[1::2])]


def detect_zeno_regime(free: SurvivalCurve, measured: SurvivalCurve, epsilon: float = DEFAULT_EPSILON,
                       min_points: int = MIN_INTERVAL_POINTS) -> ZenoVerdict:
    """
    Find maximal runs of grid points where ``measured - free > epsilon``
    (QZE) or ``free - measured > epsilon`` (IZE).

    Runs shorter than ``min_points`` samples are discarded. The grid must
    not extend past ``tau = 1``.
    """
    if len(free) != len(measured) or not np.array_equal(free.tau, measured.tau):
        raise ValidationError("free and measured curves must share the same tau grid")
    if not epsilon >= 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon!r}")
    tau = free.tau
    if len(tau) and tau[-1] > 1.0 + 1e-12:
        raise ValidationError(f"grid ends at tau={tau[-1]!r}; Zeno intervals must end by tau = 1")
    for curve in (free, measured):
        if curve.period is not None and curve.period > 1.0 + 1e-12:
            raise ValidationError(
                f"curve {curve.label!r}: measurement period {curve.period!r} exceeds the Poincare time"
            )

    above = measured.p0 - free.p0
    below = free.p0 - measured.p0
    intervals = []
    for regime, excess in (("QZE", above), ("IZE", below)):
        for a, b in _runs(excess > epsilon):
            if b - a + 1 < min_points:
                continue
            peak = float(np.max(np.abs(excess[a:b + 1])))
            intervals.append(ZenoInterval(float(tau[a]), float(tau[b]), regime, peak))
    intervals.sort(key=lambda iv: iv.start)

    kinds = {iv.regime for iv in intervals}
    if not kinds:
        regime = "none"
    elif len(kinds) == 2:
        regime = "mixed"
    else:
        regime = kinds.pop()
    margin = max((iv.peak for iv in intervals), default=0.0)
    return ZenoVerdict(regime, intervals, margin, epsilon)
