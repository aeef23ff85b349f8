"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the validated domain of a formula."""


class ConvergenceError(RuntimeError):
    """A quadrature or root-finding routine failed to reach its tolerance."""


class InsufficientStatisticsError(RuntimeError):
    """A Monte Carlo estimate is too poor to form the requested ratio."""
