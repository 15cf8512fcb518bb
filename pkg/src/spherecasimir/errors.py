"""Exception hierarchy shared by the numerics and the command-line front end."""


class CasimirError(Exception):
    """Base class for all errors raised by this package."""


class InvalidGeometryError(CasimirError, ValueError):
    """Radii or separation are non-positive, non-finite or otherwise out of range."""


class DegenerateGeometryError(CasimirError, ValueError):
    """The spheres touch (numerically): mu underflows to zero and every series diverges."""


class SeriesStalledError(CasimirError, RuntimeError):
    """An infinite series did not meet its termination criterion within the term cap."""


class VerificationError(CasimirError, AssertionError):
    """An oracle cross-check exceeded its tolerance."""
