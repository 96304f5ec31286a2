"""Exception hierarchy shared by all modules."""


class UmbraError(Exception):
    """Base class for every error raised by the package."""


class SeriesError(UmbraError, ValueError):
    pass


class NonUnitDivisor(SeriesError):
    """Divisor has a non-invertible constant term; shift out powers first."""


class NonzeroConstantTerm(SeriesError):
    pass


class BadLowestTerms(SeriesError):
    pass


class BadConstantTerm(SeriesError):
    pass


class OrderExhausted(SeriesError):
    """A computation needs more truncation order than its inputs carry."""


class FamilyError(UmbraError, ValueError):
    pass


class BadLeadingCoefficient(FamilyError):
    pass


class BadValuation(FamilyError):
    pass


class InconsistentSystem(FamilyError):
    pass


class InsufficientTable(FamilyError):
    pass


class LemmaViolation(FamilyError):
    pass


class NonzeroRemainder(FamilyError):
    pass


class NotBinomial(FamilyError):
    pass


class PreconditionViolated(FamilyError):
    pass


class OperatorError(UmbraError, ValueError):
    pass


class WindowTooSmall(OperatorError):
    pass


class RatioValuationError(OperatorError):
    pass


class DSLSyntaxError(UmbraError, ValueError):
    """Parse failure; ``offset`` is the byte offset into the source text."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownAtom(DSLSyntaxError):
    pass
