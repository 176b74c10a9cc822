"""Exception types shared across the package."""


class ParameterDomainError(ValueError):
    """A model or solver parameter is outside its admissible range."""


class ErgodicityError(RuntimeError):
    """The drift is not Hurwitz, so no stationary law exists."""


class SingularMetricError(RuntimeError):
    """The dissipative part does not define a usable inner product."""


class IllConditionedError(RuntimeError):
    """A truncated linear system is too close to singular to trust."""


class ConvergenceDomainError(RuntimeError):
    """A series was requested outside its radius of convergence."""


class MemoryGuardError(RuntimeError):
    """A simulation request would exceed the configured memory budget."""


class TailFitError(RuntimeError):
    """Exponential tail extrapolation failed on non-decaying data."""
