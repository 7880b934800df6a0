"""Exception types shared across the toolkit."""


class QuadregError(Exception):
    """Base class for toolkit errors."""


class InvalidArgument(QuadregError, ValueError):
    pass


class RangeError(QuadregError, OverflowError):
    """An argument or intermediate value left the supported integer range."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class SizeError(QuadregError, ValueError):
    """An exhaustive enumeration was requested on a box that is too large."""


class NotFound(QuadregError, LookupError):
    pass


class Unsupported(QuadregError, NotImplementedError):
    pass
