"""Exception types raised across the package.

Every error derives from :class:`PHError`, itself a ``ValueError``, so callers
can catch bad-input conditions with one clause.
"""


class PHError(ValueError):
    """Base class for all input/data errors."""


class MissingFace(PHError):
    pass


class NonMonotone(PHError):
    pass


class BadScale(PHError):
    pass


class NeedsCoordinates(PHError):
    pass


class EmptyLandmarks(PHError):
    pass


class BadNu(PHError):
    pass


class BadCount(PHError):
    pass


class EmptyGraph(PHError):
    pass


class Disconnected(PHError):
    def __init__(self, message, component=None):
        super().__init__(message)
        self.component = component


class UnsupportedDim(PHError):
    pass


class BadP(PHError):
    pass


class BadFrame(PHError):
    pass


class BadParams(PHError):
    pass


class SizeCapExceeded(PHError):
    """A complex would exceed the configured simplex-count cap."""

    def __init__(self, message, size=None):
        super().__init__(message)
        self.size = size
