"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Bad or missing configuration."""


class NumericalFailure(RuntimeError):
    """Base class for failures of a numerical routine."""


class NoConvergence(NumericalFailure):
    pass


class NotContracting(NumericalFailure):
    pass


class BasinEscape(NumericalFailure):
    pass


class NoSignChange(NumericalFailure):
    pass


class DegenerateTrace(NumericalFailure):
    pass


class BranchAmbiguity(NumericalFailure):
    pass


class ImagPartZero(NumericalFailure):
    pass


class SingularShift(NumericalFailure):
    pass


class IllConditioned(NumericalFailure):
    pass


class DivisionNearZero(NumericalFailure):
    pass


class OutsideAnalyticityStrip(ValueError):
    pass


class DomainError(ValueError):
    pass
