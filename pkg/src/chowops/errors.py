"""Exception types shared across the package."""


class ChowopsError(Exception):
    """Base class for all errors raised by chowops."""


class UnknownLabel(ChowopsError):
    """A coefficient refers to a cell label the variety does not have."""


class VarietyMismatch(ChowopsError):
    """Operands live on different varieties."""


class InvalidVariety(ChowopsError):
    """Cell data violates a construction invariant (grading, associativity, ...)."""


class EvenDimensionUnsupported(ChowopsError):
    """Only odd-dimensional split quadrics are supported."""


class UnknownKind(ChowopsError):
    """Morphism kind not in the builder catalog."""


class IncompatibleDimensions(ChowopsError):
    """Morphism parameters do not fit together."""


class FlagViolation(ChowopsError):
    """Pushforward needs a proper morphism, pullback an lci or flat one."""


class NonInvertibleSeries(ChowopsError):
    """Multiplicative series with vanishing constant term."""


class IntegralityViolation(ChowopsError):
    """A class that must be integral has a fractional coefficient."""


class NonIntegralInput(ChowopsError):
    """Operation requires an integral class."""


class ZeroClass(ChowopsError):
    """Filtration level of the zero class is undefined."""


class ExtractionFailure(ChowopsError):
    """p-adic extraction hit a non-integral piece the theory rules out.

    Carries a `details` dict with the variety, prime, degree and offending class.
    """

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


class DecompositionFailure(ChowopsError):
    """Bott decomposition postcondition failed (signals an implementation bug)."""

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


class DimensionMismatch(ChowopsError):
    """dim X is not of the required k*(p-1) shape, or dimensions disagree."""


class LevelViolation(ChowopsError):
    """A class sits in a higher filtration level than allowed."""


def require_prime(p):
    """Every public entry point taking p insists on a prime."""
    if not isinstance(p, int) or p < 2:
        raise ValueError("p must be a prime integer, got %r" % (p,))
    if any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValueError("p must be prime, got %d" % p)
