"""Exception hierarchy for OSS code construction, decoding and analysis."""


class OSSError(Exception):
    """Base class for every error raised by this package."""


class SpecError(OSSError, ValueError):
    """A code specification violates one of its structural constraints."""


class OverlappingAlphabets(SpecError):
    pass


class ZeroInAlphabet(SpecError):
    pass


class SparsityExceedsPool(SpecError):
    pass


class NonPowerOfTwoAlphabet(SpecError):
    pass


class NonOrthonormalDictionary(SpecError):
    pass


class DimensionMismatch(SpecError):
    pass


class HadamardOrderInvalid(SpecError):
    pass


class RankOutOfRange(OSSError, ValueError):
    pass


class InvalidSubset(OSSError, ValueError):
    pass


class BitLengthMismatch(OSSError, ValueError):
    pass


class UnsupportedSpecShape(OSSError, ValueError):
    """The requested decoder or evaluator does not cover this code shape."""


class AnalyticUnavailable(UnsupportedSpecShape):
    pass


class ZeroRate(OSSError, ValueError):
    pass


class DomainError(OSSError, ValueError):
    pass


class UnsupportedN(OSSError, ValueError):
    pass


class CodebookTooLarge(OSSError, ValueError):
    pass


class QuadratureNonConvergence(OSSError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""
