class MultizeroError(Exception):
    """Base class for every error raised by the library."""


class ZeroPolynomial(MultizeroError):
    pass


class DuplicateAbscissa(MultizeroError):
    pass


class OutOfSupport(MultizeroError):
    pass


class InvalidParameters(MultizeroError):
    pass


class NoClosedForm(MultizeroError):
    pass


class InfiniteSupport(MultizeroError):
    pass


class IndexOutOfRange(MultizeroError):
    pass


class AllZero(MultizeroError):
    pass


class SupportViolation(MultizeroError):
    pass


class NotPolynomialBasis(MultizeroError):
    pass


class MultiplicityTooSmall(MultizeroError):
    pass


class ZeroLeadCoefficient(MultizeroError):
    pass


class ParameterDomain(MultizeroError):
    pass


class InstanceTooLarge(MultizeroError):
    pass


class EmptyCode(MultizeroError):
    pass


class DistancePreconditionViolated(MultizeroError):
    pass


class UsageError(MultizeroError):
    """Bad command-line arguments."""
