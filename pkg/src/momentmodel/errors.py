"""Exception hierarchy shared by every module."""


class MomentModelError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(MomentModelError, ValueError):
    """Shapes of the operands do not agree."""


class DomainError(MomentModelError, ValueError):
    """An argument lies outside the set where the operation is defined."""


class InvalidMeasureError(MomentModelError, ValueError):
    """Atoms or weights violate the measure invariants."""


class DegenerateAtomError(MomentModelError, ValueError):
    """An atom with zero trace was asked for its density."""


class WindowError(MomentModelError, ValueError):
    """A moment window or index window is too small for the request."""


class PositivityError(MomentModelError, ValueError):
    """A Gram / Hankel matrix failed the PSD test."""


class InvalidSUSetError(MomentModelError, ValueError):
    """Operators are not Hermitian / unitary within tolerance."""


class NotCommutingError(InvalidSUSetError):
    """A pair of operators in an SU-set fails to commute."""


class NonCyclicError(MomentModelError, ValueError):
    """A vector family does not generate the whole space."""


class WellDefinednessError(MomentModelError, ValueError):
    """The linear extension defining a model map is inconsistent."""
