"""Exception hierarchy for the softcover package."""


class SoftCoverError(Exception):
    """Base class for all domain errors raised by this package."""


class NegativeWeight(SoftCoverError):
    """A probability weight was negative."""


class ZeroMass(SoftCoverError):
    """All weights were zero; no distribution can be formed."""


class AlphabetMismatch(SoftCoverError):
    """Operands are defined over incompatible alphabets."""


class LengthMismatch(SoftCoverError):
    """Vectors of unequal length where equal length is required."""


class UndefinedDensity(SoftCoverError):
    """Information density requested at an output symbol of zero probability."""


class SupportViolation(SoftCoverError):
    """Absolute continuity violated: p puts mass where q has none."""


class DomainError(SoftCoverError):
    """Scalar argument outside the function's domain."""


class RateTooLow(SoftCoverError):
    """Rate minus slack does not exceed the mutual information; the decay exponent is zero."""


class ZeroDispersion(SoftCoverError):
    """Information-density variance is (numerically) zero; second-order analysis undefined."""


class SizeOverflow(SoftCoverError):
    """Requested codebook size exceeds the configured cap."""


class SpaceTooLarge(SoftCoverError):
    """Output sequence space exceeds the configured enumeration cap."""


class ZeroTargetMass(SoftCoverError):
    """Induced distribution puts mass on a sequence the target gives zero probability."""


class InvalidRate(SoftCoverError):
    """Rate specification unusable for this channel (e.g. second-order with zero dispersion)."""


class DegenerateFit(SoftCoverError):
    """Too few usable points to fit a decay slope."""
