"""Exception types raised by the oplat utilities."""


class OplatError(ValueError):
    """Base class for every error raised by the library code"""


class AlgebraMismatchError(OplatError):
    """Operands live in different algebras or have incompatible dimensions"""


class NotHermitianError(OplatError):
    """Entries are not self-adjoint within tolerance"""


class NotPositiveError(OplatError):
    """An operation requiring a positive element got something else"""


class WitnessError(OplatError):
    """A constructed witness failed its positivity check"""


class ConvergenceError(OplatError):
    """An iteration hit its limit before reaching the tolerance"""

    def __init__(self, message, last_iterate=None, gap=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.gap = gap


class DomainError(OplatError):
    """A projection needed by a PMapTable is missing from its domain"""


class FilterError(OplatError):
    """A projection family fails the filter axioms"""


class PosetError(OplatError):
    """A relation table is not a partial order, or a size bound was exceeded"""


class ConfigError(OplatError):
    """Invalid command line or environment settings"""


class SignatureTieError(OplatError):
    """A reference-state signature cannot decide a projection"""
