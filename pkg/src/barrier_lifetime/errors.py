"""Exception hierarchy shared by the numerical modules."""


class LifetimeError(Exception):
    """Base class for every numerical failure raised by this package."""


class NonConvergence(LifetimeError):
    """Adaptive quadrature exhausted its panel budget above tolerance."""


class TailDominated(LifetimeError):
    """The estimated contribution beyond a truncation point is too large."""


class DerivativeUnstable(LifetimeError):
    """Richardson sequence of a finite-difference derivative is not contracting."""


class PeakUnresolved(LifetimeError):
    """The near-diagonal peak of a regularized kernel could not be resolved."""


class NonContracting(LifetimeError):
    """Successive extrapolation corrections failed to shrink."""
