"""Exception and warning types shared across the package."""


class OptogravError(Exception):
    """Base class for all package errors."""


class InvalidParamsError(OptogravError, ValueError):
    """A physical parameter violates its constraints."""


class InvalidDriveComboError(OptogravError, ValueError):
    """Requested drive terms cannot coexist."""


class DimensionOverflowError(OptogravError, ValueError):
    """Truncated product space exceeds the configured cap."""


class NoSteadyStateError(OptogravError, RuntimeError):
    """The requested operating point admits no steady state."""


class BeyondCriticalError(NoSteadyStateError):
    """Drive amplitude at or past the critical point."""


class DegenerateSteadyStateError(OptogravError, RuntimeError):
    """The Liouvillian null space is not one dimensional."""


class NotConvergedError(OptogravError, RuntimeError):
    """An iterative solve did not reach its tolerance."""


class UnverifiedRegimeWarning(UserWarning):
    """Dissipative coupling outside the two analytically covered settings.

    Builders accept any lambda >= 0, but closed-form results are only
    validated for lambda == 0 (reciprocal) and lambda == kappa
    (nonreciprocal).
    """


class AdiabaticRegimeWarning(UserWarning):
    """Auxiliary-mode damping too slow for reliable adiabatic elimination."""


class WeakDriveWarning(UserWarning):
    """Drive or residual gravity too large for the two-level truncation."""
