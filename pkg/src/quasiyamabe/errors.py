"""Exception hierarchy shared by the geometry engine."""


class GeometryError(Exception):
    """Base class for all evaluation failures raised by the engine."""


class OutOfDomain(GeometryError, ValueError):
    """A point lies outside the domain box of a field."""


class NotPositiveDefinite(GeometryError, ValueError):
    """The metric failed a Cholesky factorization at an evaluated point."""


class CriticalPoint(GeometryError, ValueError):
    """|grad f| is below the regular-point floor, so no adapted frame exists."""


class WrongDimension(GeometryError, ValueError):
    pass


class PhiNonPositive(GeometryError, ValueError):
    """The warping function reached zero or a negative value."""


class OutOfProfileRange(OutOfDomain):
    """A query lies outside the radial range covered by a profile."""


class ProfileTooShort(GeometryError, ValueError):
    pass


class ConfigError(ValueError):
    """Invalid command-line or config-file input (exit code 2)."""
