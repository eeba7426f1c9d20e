"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument violates an operation's precondition."""


class GenerationError(RuntimeError):
    """Random graph generation gave up after too many restarts."""


class ResourceLimitError(RuntimeError):
    """A tensor or state vector would exceed the configured size cap."""

    def __init__(self, message, width=None):
        super().__init__(message)
        self.width = width


class ScheduleError(RuntimeError):
    """A contraction schedule sums a variable still referenced elsewhere."""


class CalibrationError(RuntimeError):
    """The backend threshold trial could not be run."""


class NumericalIntegrityError(ArithmeticError):
    """An edge expectation came back with a non-negligible imaginary part."""
