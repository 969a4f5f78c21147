"""Exception types raised by the library."""


class SpiritError(Exception):
    """Base class for all library errors."""


class RingMismatchError(SpiritError):
    """Operands belong to rings with different moduli."""


class NonPrimeModulusError(SpiritError):
    """Ring modulus must be prime (the zero test relies on Fermat exponentiation)."""


class DimensionMismatchError(SpiritError):
    """Matrix/vector dimensions are incompatible."""


class LengthMismatchError(SpiritError):
    """Bit-vector operands have different lengths."""


class NegativeInputError(SpiritError):
    """The first-positive sketch over the reals requires non-negative entries."""


class NoCorrectPrimeError(SpiritError):
    """No prime in the set is compatible with the given witness sums.

    Signals a violated precondition (the witness set was too large or its
    elements too big for the set's parameters); callers treat this as a
    hard failure, not a recoverable condition.
    """


class ValueOutOfRangeError(SpiritError):
    """A data value or lookup value is outside {0, ..., r-1}."""


class LookupOutOfRangeError(ValueOutOfRangeError):
    """The lookup value is outside {0, ..., r-1}."""


class ThresholdOutOfRangeError(SpiritError):
    """Hamming threshold must satisfy 0 <= h <= t."""


class MalformedFileError(SpiritError):
    """Dataset file is truncated, has a bad magic string, or inconsistent header."""
