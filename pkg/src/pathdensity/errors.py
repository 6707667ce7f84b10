"""Exception hierarchy shared by all modules.

Two families matter to callers: ``PreconditionError`` means the input did not
satisfy what an operation needs (user error, CLI exit code 2), while
``InvariantViolation`` means a proven guarantee failed to materialise, which
should never happen and is treated as an alarm (CLI exit code 3).
"""


class PathDensityError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(PathDensityError, ValueError):
    """An operation was called outside its domain."""

    def __init__(self, message: str, *, stage: str | None = None, index: int | None = None):
        self.stage = stage
        self.index = index
        if stage:
            message = f"[{stage}] {message}"
        super().__init__(message)


class FormatError(PreconditionError):
    """A coloring, sequence or certificate file could not be parsed."""


class AmbiguousFloorError(PathDensityError, ArithmeticError):
    """The integer part of a value could not be decided."""


class InvariantViolation(PathDensityError, AssertionError):
    """A guarantee that the theory promises did not hold."""

    def __init__(self, message: str, *, stage: str | None = None):
        self.stage = stage
        if stage:
            message = f"[{stage}] {message}"
        super().__init__(message)


class ClaimGapError(PathDensityError):
    """The red/blue dichotomy has no certificate in the current orientation.

    Raised by :func:`pathdensity.extract.oscillation_or_forest` when every red
    vertex lies in the minimum cover of the red edges while the cover is still
    small.  Swapping both colour classes always resolves it, which is what the
    pipeline does.
    """
