class FundGroupError(Exception):
    """
    Base of every error the library raises on purpose.
    """

    exit_code: int = 1


class ParseError(FundGroupError):
    exit_code = 2


class UnsupportedScalar(FundGroupError):
    exit_code = 3


class UnsupportedDomain(FundGroupError):
    exit_code = 3


class NotFinitelyGenerated(UnsupportedDomain):
    """
    Stabilizer would need infinitely many prime generators (default cap is inf).
    """


class DimensionTooLarge(FundGroupError):
    exit_code = 3


class NotInvertibleInClosedForm(FundGroupError):
    exit_code = 3


class BoundExhausted(FundGroupError):
    exit_code = 4


class InvariantViolation(FundGroupError):
    exit_code = 5


class PrecisionExhausted(FundGroupError):
    pass


class NonConvergent(FundGroupError):
    pass


class ZeroScalarError(FundGroupError, ZeroDivisionError):
    pass


class UnfactorableEntry(FundGroupError):
    pass


class DimensionMismatch(FundGroupError):
    pass


class IndexOutOfRange(FundGroupError):
    pass


class Singular(FundGroupError):
    pass


class NotMonomial(FundGroupError):
    pass


class InvalidProfile(FundGroupError):
    pass


class InvalidSupernatural(FundGroupError):
    pass


class NotInModule(FundGroupError):
    pass
