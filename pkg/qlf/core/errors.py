"""Exception hierarchy shared across the package."""


class QLFError(Exception):
    """Base class for every error raised by qlf."""


class InvalidParameterError(QLFError, ValueError):
    """A precondition on the inputs of an operation is violated."""


class SeriesDivisionError(InvalidParameterError):
    """Series division by a series whose leading coefficient is not a unit."""


class VerificationError(QLFError):
    """Raised on demand when a verification report did not pass."""
