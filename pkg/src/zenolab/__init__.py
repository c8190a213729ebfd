"""Repeated projective measurements on a doubly driven three-level atom."""
from .analysis import ZenoVerdict, detect_zeno_regime, poincare_time, reference_curves
from .dynamics import AtomLevels, RabiModel, closed_form_propagator, rwa_hamiltonian
from .lindblad import delta_train_rate, integrate
from .linalg import check_density, hermitian_propagator
from .measurement import (
    DiscreteSchedule,
    ProjectorSet,
    SurvivalCurve,
    evolve_with_measurements,
    projector_set,
    reduce,
    survival_curve,
    survival_probability,
)

__version__ = "0.1.0"
