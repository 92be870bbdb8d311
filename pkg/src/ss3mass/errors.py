"""Exception types raised by the library.

Every contract violation has a dedicated class so callers (and the CLI) can
tell configuration mistakes apart from genuine mathematical impossibilities.
The two *Disagreement/CrossCheck* classes signal that a built-in dual-route
verification failed; they are expected never to fire on correct inputs.
"""


class SS3Error(Exception):
    """Base class for all library errors."""


class CompositeP(SS3Error, ValueError):
    """The characteristic passed in is not a prime number."""


class DegreeOverflow(SS3Error, ValueError):
    """Requested extension degree exceeds the configured safety bound."""


class ContextMismatch(SS3Error, ValueError):
    """Arithmetic attempted between elements of different field contexts."""


class NonSquare(SS3Error, ValueError):
    """Determinant/inverse requested for a non-square matrix."""


class ZeroVector(SS3Error, ValueError):
    """A nonzero vector was required."""


class AllZero(SS3Error, ValueError):
    """Projective coordinates must not all vanish."""


class TooLarge(SS3Error, ValueError):
    """Exhaustive enumeration requested beyond the supported size."""


class NotInC0(SS3Error, ValueError):
    """Operation requires a curve point outside the degree-one locus."""


class SingularT(SS3Error, ValueError):
    """The coordinate matrix of a degree-one point is singular by design."""


class NotSymmetric(SS3Error, ValueError):
    """A symmetric matrix was required."""


class OnSectionT(SS3Error, ValueError):
    """The fibre coordinate (0:1) lies on the distinguished section."""


class CrossCheckFailure(SS3Error, RuntimeError):
    """Two independent criteria that must agree disagreed."""


class OracleDisagreement(SS3Error, RuntimeError):
    """The closed-form criterion and the direct module-action oracle differ."""


class WrongANumber(SS3Error, ValueError):
    """Operation requires a point with a different a-number."""


class UnsupportedPrime(SS3Error, ValueError):
    """Operation not available at this characteristic."""


class IllegalLabel(SS3Error, ValueError):
    """Stratum label is not legal at this characteristic."""


class BadC(SS3Error, ValueError):
    """Polarisation kernel exponent c out of range."""


class OutOfHypotheses(SS3Error, ValueError):
    """Arguments fall outside the hypotheses of the closed-form result."""


class SearchExhausted(SS3Error, RuntimeError):
    """A search guaranteed to succeed found nothing (indicates a bug)."""


class GeneratorSearchFailed(SearchExhausted):
    """No multiplicative generator with the required trace exists."""


class SearchFailed(SearchExhausted):
    """A counted search (guaranteed non-empty) failed."""


class ChecksumMismatch(SS3Error, RuntimeError):
    """Cache entry failed checksum validation; the file was quarantined."""
