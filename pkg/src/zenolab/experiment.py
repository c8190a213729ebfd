"""Experiment configuration and the free / projective / Lindblad run driver."""
from __future__ import annotations

import dataclasses
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .analysis import ZenoVerdict, detect_zeno_regime
from .dynamics import SQRT15, RabiModel, closed_form_propagator, rwa_hamiltonian
from .errors import AccuracyError, ConfigError, ValidationError
from .lindblad import DEFAULT_WEIGHT, MAX_DEFECT, delta_train_rate, integrate_trajectory
from .linalg import Tolerances, basis_state, check_density, hermitian_propagator, pure_density
from .measurement import DiscreteSchedule, SurvivalCurve, projector_set, survival_curve

MODES = ("free", "projective", "lindblad")
PROJECTORS = ("partial", "full")


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One run. ``n`` lists measurement counts; each count means n + 1
    reduction events at ``t_k = k * tau_max * T_P / n``, k = 0..n.
    ``width`` is the delta-train bump width in tau units.
    """

    omega01: float = 1.0
    omega12: float = SQRT15
    phi01: float = 0.0
    phi12: float = 0.0
    projector: str = "partial"
    n: tuple[int, ...] = (1, 2, 4, 8, 16, 64)
    mode: str = "projective"
    weight: float = DEFAULT_WEIGHT
    width: float = 1.0 / 2000.0
    grid: int = 401
    tau_max: float = 1.0
    epsilon: float = 1e-3
    raw_time: bool = False
    csv: str | None = None
    svg: str | None = None
    report: str | None = None
    tol_hermiticity: float = Tolerances.hermiticity
    tol_trace: float = Tolerances.trace
    tol_unitarity: float = Tolerances.unitarity
    tol_positivity: float = Tolerances.positivity
    tol_oracle: float = Tolerances.oracle

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(self.n))
        for name in ("omega01", "omega12", "phi01", "phi12", "weight", "width", "tau_max", "epsilon"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name}: must be a finite number")
        for name in ("omega01", "omega12"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name}: must be >= 0")
        if self.omega01 == 0 and self.omega12 == 0:
            raise ConfigError("omega01, omega12: at least one must be > 0 (Poincare time undefined)")
        if self.projector not in PROJECTORS:
            raise ConfigError(f"projector: must be one of {', '.join(PROJECTORS)}")
        if self.mode not in MODES:
            raise ConfigError(f"mode: must be one of {', '.join(MODES)}")
        if self.mode != "free" and not self.n:
            raise ConfigError("n: at least one measurement count is required")
        if any(int(k) != k or k < 1 for k in self.n):
            raise ConfigError("n: every measurement count must be an integer >= 1")
        if len(set(self.n)) != len(self.n):
            raise ConfigError("n: measurement counts must be distinct")
        if int(self.grid) != self.grid or self.grid < 2:
            raise ConfigError("grid: must be an integer >= 2")
        if not self.tau_max > 0:
            raise ConfigError("tau_max: must be > 0")
        if self.weight <= 0:
            raise ConfigError("weight: must be > 0")
        if self.width <= 0:
            raise ConfigError("width: must be > 0")
        if self.epsilon < 0:
            raise ConfigError("epsilon: must be >= 0")
        for f in dataclasses.fields(self):
            if f.name.startswith("tol_") and not getattr(self, f.name) > 0:
                raise ConfigError(f"{f.name}: must be > 0")

    @property
    def model(self) -> RabiModel:
        return RabiModel(self.omega01, self.omega12, self.phi01, self.phi12)

    @property
    def tolerances(self) -> Tolerances:
        return Tolerances(self.tol_hermiticity, self.tol_trace, self.tol_unitarity,
                          self.tol_positivity, self.tol_oracle)

    @property
    def tau_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.tau_max, self.grid)

    def to_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        d["n"] = list(self.n)
        return d

    @classmethod
    def from_dict(cls, values: dict[str, Any]) -> ExperimentConfig:
        known = {f.name: f for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, value in values.items():
            name = key.replace("-", "_")
            if name not in known:
                raise ConfigError(f"{key}: unknown configuration key")
            kwargs[name] = _coerce(name, value)
        return cls(**kwargs)


_FLOAT_FIELDS = {"omega01", "omega12", "phi01", "phi12", "weight", "width", "tau_max", "epsilon",
                 "tol_hermiticity", "tol_trace", "tol_unitarity", "tol_positivity", "tol_oracle"}
_PATH_FIELDS = {"csv", "svg", "report"}


def _coerce(name: str, value: Any) -> Any:
    try:
        if name in _FLOAT_FIELDS:
            return float(value)
        if name == "grid":
            if isinstance(value, str):
                return int(value.strip())
            return value
        if name == "n":
            if isinstance(value, str):
                return tuple(int(part) for part in value.split(",") if part.strip())
            return tuple(value)
        if name == "raw_time":
            if isinstance(value, str):
                lowered = value.strip().lower()
                if lowered not in ("true", "false", "1", "0", "yes", "no"):
                    raise ValueError(value)
                return lowered in ("true", "1", "yes")
            return bool(value)
        if name in _PATH_FIELDS:
            return None if value in (None, "") else str(value)
        return str(value).strip()
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: cannot parse {value!r}") from exc


def parse_config_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: missing key")
        values[key.replace("-", "_")] = value
    return values


def load_config(path: str | Path, overrides: dict[str, Any] | None = None) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from exc
    values: dict[str, Any] = parse_config_text(text)
    values.update(overrides or {})
    return ExperimentConfig.from_dict(values)


@dataclass
class RunReport:
    config: dict[str, Any]
    curves: list[SurvivalCurve]
    verdicts: dict[int, ZenoVerdict | None]
    defects: dict[str, float]
    wall_time: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def free(self) -> SurvivalCurve:
        return self.curves[0]

    @property
    def measured(self) -> list[SurvivalCurve]:
        return self.curves[1:]

    def to_dict(self) -> dict[str, Any]:
        curves = []
        for c in self.curves:
            curves.append({
                "label": c.label,
                "n": c.n,
                "points": len(c),
                "p0_min": float(np.min(c.p0)),
                "p0_final": float(c.p0[-1]),
            })
        return {
            "config": self.config,
            "curves": curves,
            "verdicts": {str(n): (v.to_dict() if v else None) for n, v in self.verdicts.items()},
            "defects": self.defects,
            "notes": self.notes,
            "wall_time": self.wall_time,
        }


def _state_defects(curves: list[SurvivalCurve], tol: Tolerances | float) -> dict[str, float]:
    herm, trace, min_eig, passed = 0.0, 0.0, math.inf, True
    for c in curves:
        for s in c.states:
            r = check_density(s, tol)
            herm = max(herm, r.hermiticity_defect)
            trace = max(trace, r.trace_defect)
            min_eig = min(min_eig, r.min_eigenvalue)
            passed = passed and r.passed
    return {"hermiticity": herm, "trace": trace, "min_eigenvalue": min_eig, "valid": passed}


def _lindblad_curve(config: ExperimentConfig, model: RabiModel, n: int, tol: Tolerances) -> SurvivalCurve:
    t_p = model.t_poincare
    window = config.tau_max * t_p
    times = DiscreteSchedule(n, window).times
    rate = delta_train_rate(times, config.width * t_p, config.weight)
    tau = config.tau_grid
    rho0 = pure_density(basis_state(0))
    samples = tau * t_p
    # t = 0 is the initial state; integrate only over positive sample times
    states, _ = integrate_trajectory(rho0, model, projector_set(config.projector), rate, samples[1:], tol=tol)
    states = np.concatenate([rho0[None], states])
    return SurvivalCurve.from_states(tau, states, label=f"n={n}", n=n, period=config.tau_max / n)


def run_experiment(config: ExperimentConfig) -> RunReport:
    """
    Free curve plus one measured curve per requested ``n``, each compared
    with the free curve by the Zeno-regime detector.
    """
    start = time.perf_counter()
    model = config.model
    tol = config.tolerances
    tau = config.tau_grid
    t_p = model.t_poincare
    notes = []

    try:
        curves = [survival_curve(model, None, None, tau, tol=tol)]
        if config.mode == "projective":
            projectors = projector_set(config.projector)
            for n in sorted(config.n):
                schedule = DiscreteSchedule(n, config.tau_max * t_p)
                curves.append(survival_curve(model, projectors, schedule, tau, tol=tol))
        elif config.mode == "lindblad":
            for n in sorted(config.n):
                curves.append(_lindblad_curve(config, model, n, tol))
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc

    if config.mode == "lindblad":
        defects = _state_defects(curves, MAX_DEFECT)
        limit = MAX_DEFECT
    else:
        defects = _state_defects(curves, tol)
        limit = None
    if not defects["valid"]:
        raise AccuracyError(
            f"evolved states failed validity checks (limit {limit or tol}): "
            f"hermiticity {defects['hermiticity']:.3e}, trace {defects['trace']:.3e}, "
            f"min eigenvalue {defects['min_eigenvalue']:.3e}"
        )

    generator = rwa_hamiltonian(model)
    spans = [config.tau_max * t_p] + [config.tau_max * t_p / n for n in config.n]
    oracle = max(
        float(np.max(np.abs(closed_form_propagator(model, dt) - hermitian_propagator(generator, dt))))
        for dt in spans
    )
    defects["oracle_distance"] = oracle
    if oracle > tol.oracle:
        raise AccuracyError(f"closed-form propagator differs from eigendecomposition by {oracle:.3e}")

    verdicts: dict[int, ZenoVerdict | None] = {}
    if config.mode != "free":
        keep = tau <= 1.0 + 1e-12
        free = _restrict(curves[0], keep)
        for curve in curves[1:]:
            if curve.period > 1.0 + 1e-12:
                verdicts[curve.n] = None
                notes.append(f"n={curve.n}: measurement period exceeds the Poincare time; no verdict")
                continue
            verdicts[curve.n] = detect_zeno_regime(free, _restrict(curve, keep), config.epsilon)

    return RunReport(config.to_dict(), curves, verdicts, defects, time.perf_counter() - start, notes)


def _restrict(curve: SurvivalCurve, keep: np.ndarray) -> SurvivalCurve:
    if np.all(keep):
        return curve
    return SurvivalCurve(curve.tau[keep], curve.p0[keep], curve.p1[keep], curve.p2[keep],
                         label=curve.label, n=curve.n, period=curve.period)
