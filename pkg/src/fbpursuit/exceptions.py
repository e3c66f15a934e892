"""Exception types raised by the recovery library."""


class PursuitError(Exception):
    """Base class for all library-specific errors."""


class BadDimensionsError(PursuitError, ValueError):
    """Inputs have incompatible or non-sensical shapes."""


class RankDeficientError(PursuitError):
    """A least-squares system's triangular factor is numerically singular."""


class InsufficientCandidatesError(PursuitError, ValueError):
    """A selection asked for more indices than are available."""


class ZeroSignalError(PursuitError, ValueError):
    """An operation that scales by signal energy received an all-zero signal."""


class InstanceTooLargeError(PursuitError, ValueError):
    """The exhaustive search oracle refuses problems beyond its size guard."""


class EmptyInputError(PursuitError, ValueError):
    """A statistic was requested over an empty collection."""


class UnsupportedImageError(PursuitError, ValueError):
    """An image file is not in the supported 8-bit binary PGM format."""
