"""Exception hierarchy shared by every layer of the package."""


class PrimefreeError(Exception):
    """Base class for all errors raised by primefree."""


class InvalidSpec(PrimefreeError, ValueError):
    pass


class ZeroLeadCoefficient(InvalidSpec):
    pass


class ArityMismatch(InvalidSpec):
    pass


class EmptyOrder(InvalidSpec):
    pass


class NonReversibleLevel(InvalidSpec):
    """An inner level of a composition chain has a0 outside {-1, 1}."""


class BudgetExceeded(PrimefreeError):
    pass


class NonPositiveIndex(PrimefreeError, ValueError):
    pass


class NonMonotoneEvidence(PrimefreeError):
    """The finite evaluation window does not support the growth hypothesis."""


class IndexBelowTowerStart(PrimefreeError):
    pass


class PrecisionInsufficient(PrimefreeError):
    pass


class NotPisotOrSalem(PrimefreeError, ValueError):
    pass


class NoFactorFound(PrimefreeError):
    def __init__(self, bound, message=None):
        self.bound = bound
        super().__init__(message or f"no prime factor <= {bound}")


class HTooLarge(PrimefreeError):
    pass


class SequenceFileError(PrimefreeError, ValueError):
    def __init__(self, message, lineno=None, path=None):
        self.lineno = lineno
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)


class CertificateFormatError(PrimefreeError, ValueError):
    pass
