"""Exception types shared across the package."""


class EntwitError(Exception):
    """Base class for package-specific failures."""


class ShapeError(EntwitError, ValueError):
    """Input matrix has the wrong shape or violates a structural tolerance
    (non-square, non-Hermitian, non-symmetric, dimension mismatch)."""


class SizeCapError(EntwitError):
    """Requested operation would exceed the configured total-dimension cap."""


class StateValidationError(EntwitError, ValueError):
    """Object is not a valid quantum state (bad norm, trace, or spectrum)."""


class NumericalConsistencyError(EntwitError, RuntimeError):
    """A cross-route numerical identity failed beyond tolerance."""
