"""Exception hierarchy. Every error raised by the package derives from ConeSliceError."""


class ConeSliceError(Exception):
    pass


class ContractViolation(ConeSliceError, ValueError):
    """Caller broke a precondition (wrong dimension, non-tangent vector, off-slice point)."""


class OutOfDomainError(ConeSliceError, ValueError):
    pass


class DifferentiationError(ConeSliceError, ArithmeticError):
    pass


class InconclusiveError(ConeSliceError):
    """A sampling check could not draw a single admissible sample."""


class ProjectionUndefinedError(ConeSliceError, ValueError):
    pass


class DegeneratePointError(ConeSliceError, ValueError):
    pass


class DegenerateMetricError(ConeSliceError, ArithmeticError):
    pass


class ConformalBoundaryError(ConeSliceError):
    """The group action pushed a point to where k <= 0 (or outside k's domain)."""


class DomainExhaustedError(ConeSliceError):
    """Rejection sampling hit its attempt cap."""
