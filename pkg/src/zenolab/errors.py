"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a structural invariant (Hermiticity, trace, shape...)."""


class ConsistencyError(ArithmeticError):
    """A computed quantity that must be real or bounded came out otherwise."""


class AccuracyError(ArithmeticError):
    """Numerical integration drifted beyond the accepted defect."""


class UndefinedRecurrenceError(ValueError):
    """The model has no couplings, so no Poincare time exists."""


class ConfigError(ValueError):
    """An experiment configuration field is invalid."""
