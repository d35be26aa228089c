"""Exception hierarchy shared by all circmaxent modules."""


class CircMaxEntError(Exception):
    """Base class for all errors raised by this package."""


class InputShapeError(CircMaxEntError, ValueError):
    """Array sizes or lengths do not match what an operation requires."""


class InvalidSeriesError(CircMaxEntError, ValueError):
    """Fourier coefficients violate conjugate symmetry beyond tolerance."""


class InvalidSequenceError(CircMaxEntError, ValueError):
    """A moment sequence violates a structural requirement (e.g. complex zeroth moment)."""


class InvalidPhaseError(CircMaxEntError, ValueError):
    """A phase moment sequence does not carry the mandatory zeroth moment pi/2."""


class NormalizationError(CircMaxEntError, ValueError):
    """A formal series does not have the unit constant term required by the series logarithm."""


class ResolutionError(CircMaxEntError, ValueError):
    """Requested moment count exceeds what the sampling resolution supports."""


class NonResolvableError(CircMaxEntError, RuntimeError):
    """Adaptive fitting hit the grid-size cap before the coefficient tail decayed.

    Attributes
    ----------
    achieved_tail_ratio : float
        Smallest tail-to-peak coefficient ratio reached before giving up.
    """

    def __init__(self, message: str, achieved_tail_ratio: float):
        super().__init__(message)
        self.achieved_tail_ratio = achieved_tail_ratio


class EmptyMeasureError(CircMaxEntError, ValueError):
    """A measure specification carries no mass at all."""


class DomainError(CircMaxEntError, ValueError):
    """Input values lie outside the mathematical domain of an operation."""


class DivergenceError(CircMaxEntError, ArithmeticError):
    """The exponential ansatz overflowed (exponent above the safe cap).

    ``last_safe`` optionally carries the last iterate that still evaluated.
    """

    def __init__(self, message: str, last_safe=None):
        super().__init__(message)
        self.last_safe = last_safe


class SingularityError(CircMaxEntError, ValueError):
    """Evaluation requested exactly at a singular point."""


class PipelineError(CircMaxEntError, RuntimeError):
    """A reconstruction pipeline stage failed; ``stage`` names the stage."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


class ReportLockError(CircMaxEntError, RuntimeError):
    """The report directory is already locked by another run."""
