"""Exception hierarchy shared by the solver modules."""


class QdislocError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(QdislocError):
    """A physics precondition of the closed-form spectrum does not hold."""


class BoundConditionViolated(PreconditionError):
    """The quantity under the square root of the angular index is negative."""


class NoConfinement(PreconditionError):
    """The oscillator strength vanishes (or is imaginary); no discrete spectrum."""


class DomainError(QdislocError, ValueError):
    pass


class NonConvergence(QdislocError):
    pass


class GridTooCoarse(QdislocError, ValueError):
    pass


class BisectionStall(QdislocError):
    pass


class DegenerateShift(QdislocError):
    pass


class NonQuadraticConvergence(QdislocError):
    """Observed refinement order is far from 2; usually a bad outer wall."""


class AllPointsInvalid(QdislocError):
    pass


class EmptyTable(QdislocError, ValueError):
    pass
