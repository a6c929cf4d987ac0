"""Exception hierarchy shared by every module."""


class MatdynError(Exception):
    """Base class for library errors."""


class SingularMatrix(MatdynError):
    pass


class IndeterminatePoint(MatdynError):
    pass


class PoleOfPsi(MatdynError):
    pass


class PoleOfMap(MatdynError):
    pass


class DegenerateFiber(MatdynError):
    pass


class NotRootOfUnity(MatdynError):
    pass


class OutsideDomain(MatdynError):
    pass


class PointBudgetExceeded(MatdynError):
    pass


class DegenerateAngle(MatdynError):
    """Angle where a closed-form catalog breaks down.

    ``fallback`` holds whatever part of the catalog is still well defined.
    """

    def __init__(self, message, fallback=None):
        super().__init__(message)
        self.fallback = fallback


class InternalConsistencyError(MatdynError):
    """A closed-form point failed its own numerical validation."""


class NonFiniteValue(MatdynError, ValueError):
    """A NaN or infinite entry reached a constructor (usually overflow)."""
