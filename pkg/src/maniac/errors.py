"""Error taxonomy shared across the package.

Every named failure mode is a distinct class so callers (and the campaign
runner) can count outcomes without string matching.
"""


class ManiacError(Exception):
    pass


# field construction / element arithmetic

class NotPrime(ManiacError, ValueError):
    pass


class DivideByZero(ManiacError, ZeroDivisionError):
    pass


class NotInSubfield(ManiacError, ValueError):
    pass


# matrix algebra

class DimensionMismatch(ManiacError, ValueError):
    pass


class IncompatibleFields(ManiacError, TypeError):
    pass


class NotFullColumnRank(ManiacError, ValueError):
    pass


# fold / unfold

class ColumnCountNotDivisible(ManiacError, ValueError):
    pass


# rank-metric codes

class BadDimensions(ManiacError, ValueError):
    pass


class DecodeFailure(ManiacError):
    """Decoding could not produce a verified message."""

    def __init__(self, reason, diagnostics=None):
        super().__init__(reason)
        self.reason = reason
        self.diagnostics = diagnostics


class SearchSpaceTooLarge(ManiacError, ValueError):
    pass


# network simulator

class UnknownNode(ManiacError, ValueError):
    pass


class BadNetwork(ManiacError, ValueError):
    pass


# two-source codec

class ShapeMismatch(ManiacError, ValueError):
    pass


class RateRegionViolation(ManiacError, ValueError):
    pass


class SingularD(ManiacError):
    """The stacked coherent transform is not invertible."""


class MalformedRre(ManiacError):
    """Echelon extraction produced blocks violating its structural identities."""


class Stage1Failure(ManiacError):
    def __init__(self, reason, cause=None):
        super().__init__(reason)
        self.reason = reason
        self.cause = cause


class Stage2Failure(ManiacError):
    def __init__(self, reason, cause=None):
        super().__init__(reason)
        self.reason = reason
        self.cause = cause
