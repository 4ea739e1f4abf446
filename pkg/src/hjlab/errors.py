"""Exception types shared across the laboratory.

Every failure mode that callers are expected to branch on gets its own class;
everything derives from HJLabError so scripts can catch the lot in one clause.
"""


class HJLabError(Exception):
    """Base class for all laboratory errors."""


class InvalidGridError(HJLabError):
    """Grid does not meet structural requirements (cell count, spacing)."""


class OutOfDomainError(HJLabError):
    """A requested point, ball, or time lies outside the discretized domain."""


class CFLError(HJLabError):
    """Time step request violates the stability restriction."""


class DivergedError(HJLabError):
    """A solver state picked up a non-finite value."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class IncompatibleSpecsError(HJLabError):
    """Two problem specifications that must agree (grid, q, nu, ...) do not."""


class RegimeError(HJLabError):
    """Parameters fall outside the regime where the requested object exists."""


class NotLocallyIntegrableError(HJLabError):
    """Initial datum is too singular for the requested norm or mass."""


class UnsupportedDatumError(HJLabError):
    """Operation cannot handle this initial-datum kind (e.g. unbounded data)."""


class InsufficientScheduleError(HJLabError):
    """Snapshot schedule does not cover the requested evaluation window."""


class BracketError(HJLabError):
    """A scan failed to bracket the root/separatrix being searched for."""


class MapStructureError(HJLabError):
    """A map assumed monotone for bisection turned out not to be."""


class ConstructionFailedError(HJLabError):
    """Supersolution assembly could not certify nonnegativity of the residual."""

    def __init__(self, message, radius=None):
        super().__init__(message)
        self.radius = radius


class ConfigError(HJLabError):
    """Malformed configuration file or unknown key/value."""
