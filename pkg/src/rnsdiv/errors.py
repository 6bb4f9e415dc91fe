"""Exception types raised by the RNS arithmetic routines."""


class RnsError(Exception):
    """Base class for every error raised by this package."""


class FormatError(RnsError, ValueError):
    pass


class NotPrime(FormatError):
    pass


class DuplicateBase(FormatError):
    pass


class WidthOverflow(FormatError):
    pass


class MissingBaseTwo(FormatError):
    pass


class OutOfRange(RnsError, ValueError):
    pass


class FormatMismatch(RnsError, ValueError):
    pass


class ValidityMismatch(RnsError, ValueError):
    pass


class DigitInvalid(RnsError, ValueError):
    pass


class NoInverse(RnsError, ArithmeticError):
    pass


class NotDivisible(RnsError, ArithmeticError):
    pass


class PowerExceeded(RnsError, ValueError):
    pass


class RangeInsufficient(RnsError, ArithmeticError):
    pass


class DivideByZero(RnsError, ZeroDivisionError):
    pass


# Same condition, named after the decomposition contract.
ZeroDivisor = DivideByZero
