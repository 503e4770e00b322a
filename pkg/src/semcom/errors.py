"""Exception hierarchy for the toolkit.

Every error raised by semcom derives from SemcomError so callers can
catch toolkit failures without swallowing unrelated bugs.
"""


class SemcomError(Exception):
    """Base class for all semcom errors."""


class InvalidDistribution(SemcomError, ValueError):
    """Probability vector violates non-negativity or normalization."""


class AbsoluteContinuityViolation(SemcomError, ValueError):
    """KL divergence requested where p(x) > 0 but q(x) = 0."""


class LengthMismatch(SemcomError, ValueError):
    """Paired sequences have different lengths."""


class NumericOverflow(SemcomError, ArithmeticError):
    """An exponent left the range representable in float64."""


class ZeroMarginal(SemcomError, ValueError):
    """Output marginal has a zero (or effectively zero) entry where the
    fixed-point update requires strict positivity."""


class ZeroGain(SemcomError, ValueError):
    """Equalization requested with a non-positive channel gain."""


class EmptySelection(SemcomError, ValueError):
    """Feature selection produced an empty payload."""


class FrameFormatError(SemcomError, ValueError):
    """Malformed frame bytes."""


class BadMagic(FrameFormatError):
    """Frame does not start with the expected magic bytes."""


class TruncatedFrame(FrameFormatError):
    """Frame byte sequence is shorter than its header declares."""


class VersionUnsupported(FrameFormatError):
    """Frame declares a format version this implementation cannot read."""


class GridTooCoarse(SemcomError, ArithmeticError):
    """Quadrature failed to converge within the configured grid budget."""
