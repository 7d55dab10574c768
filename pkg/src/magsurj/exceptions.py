"""Exception types raised across the package."""


class MagsurjError(Exception):
    """Base class for all errors raised by magsurj."""


class InvalidVertex(MagsurjError, KeyError):
    """A vertex token does not belong to the graph."""

    def __str__(self):
        return f"invalid vertex {self.args[0]!r}" if self.args else "invalid vertex"


class InvalidParams(MagsurjError, ValueError):
    pass


class NonHermitian(MagsurjError, ValueError):
    pass


class DimensionMismatch(MagsurjError, ValueError):
    pass


class NonScalarFiber(MagsurjError, ValueError):
    pass


class EmptySupport(MagsurjError, ValueError):
    pass


class EmptyWindow(MagsurjError, ValueError):
    pass


class SupportOutsideStar(MagsurjError, ValueError):
    pass


class PreconditionViolated(MagsurjError, ValueError):
    pass


class NonScalarProblem(MagsurjError, ValueError):
    pass


class ProblemFormatError(MagsurjError, ValueError):
    """The problem or report document is malformed."""
