"""Exception types shared across the library.

Two families matter for the CLI exit-code contract: input or configuration
problems (bad grids, bad parameters, unreadable files, under-resolved
experiment grids) exit with code 2, while computed violations of the
library's verified identities exit with code 1.
"""


class PathIntError(Exception):
    """Base class for all library errors."""


# ---------------------------------------------------------------- inputs


class NonMonotoneTimes(PathIntError):
    """Time grid is not strictly increasing."""


class LengthMismatch(PathIntError):
    """times and values have different lengths."""


class EmptyPath(PathIntError):
    """A path needs at least one grid point."""


class TimeBeforeOrigin(PathIntError):
    """Evaluation time precedes the first grid point."""


class InvalidSpec(PathIntError):
    """Path generator spec fails validation."""


class NonPositiveC(PathIntError):
    """Truncation parameter must be strictly positive."""


class NegativeC(PathIntError):
    """Variation truncation level must be nonnegative."""


class PathTooLong(PathIntError):
    """Path exceeds the brute-force oracle scale (2000 points)."""


class GridMismatch(PathIntError):
    """Operands must share the same time grid."""


class NonPositiveThreshold(PathIntError):
    """Stopping-time ladder threshold must be strictly positive."""


class InconsistentMarks(PathIntError):
    """Identical paths carry contradictory macroscopic-jump marks."""


class GridTooCoarse(PathIntError):
    """Experiment grid cannot resolve the requested truncation level."""


class ConfigError(PathIntError):
    """Malformed experiment configuration or CLI input."""


# ------------------------------------------------------- computed failures


class PhiOutOfRange(PathIntError):
    """Reflected difference path leaves the band [-c, c]."""


class CarrierViolation(PathIntError):
    """Regulator mass sits away from the band boundary."""


class BoundViolation(PathIntError):
    """A pathwise inequality that must hold on every cell failed."""


class IdentityViolation(PathIntError):
    """An exact identity of the invariant suite failed beyond tolerance."""
