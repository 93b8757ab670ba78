"""Exception hierarchy.

Every error raised by the package derives from :class:`IUNTFError`.  The
three intermediate classes map onto the CLI exit codes (2 for bad
parameters, 3 for I/O, 4 for numerical failures).
"""


class IUNTFError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ParameterError(IUNTFError, ValueError):
    exit_code = 2


class NumericalError(IUNTFError, ArithmeticError):
    exit_code = 4


class FrameIOError(IUNTFError, OSError):
    exit_code = 3


# finite fields
class NotPrime(ParameterError):
    pass


class TooLarge(ParameterError):
    pass


class DivisionByZero(NumericalError, ZeroDivisionError):
    pass


# skeletons
class InvalidDegree(ParameterError):
    pass


class InvalidParams(ParameterError):
    pass


class ShapeMismatch(ParameterError):
    pass


class EmptyList(ParameterError):
    pass


# unitaries / frames
class UnsupportedOrder(ParameterError):
    pass


class NotUnitary(ParameterError):
    pass


# analysis
class TooFewColumns(ParameterError):
    pass


class DomainError(ParameterError):
    pass


class NotSorted(ParameterError):
    pass


class BadOrder(ParameterError):
    pass


class NumericalFailure(NumericalError):
    pass


# solver
class InvalidSparsity(ParameterError):
    pass


class SingularSupport(NumericalError):
    pass


class ZeroSignal(ParameterError):
    pass


# file formats
class ParseError(FrameIOError):
    pass
