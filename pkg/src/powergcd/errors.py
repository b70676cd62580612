"""Exception types raised across the package.

Every error is a ``PowerGcdError``; most are also ``ValueError`` so callers
that only care about bad input can catch the builtin.
"""


class PowerGcdError(Exception):
    pass


class EmptySet(PowerGcdError, ValueError):
    pass


class DuplicateElement(PowerGcdError, ValueError):
    pass


class NotPositive(PowerGcdError, ValueError):
    pass


class NotInSet(PowerGcdError, ValueError):
    pass


class NotGcdClosed(PowerGcdError, ValueError):
    pass


class NotFactorClosed(PowerGcdError, ValueError):
    pass


class ConditionGViolated(PowerGcdError, ValueError):
    pass


class GtdTooLarge(PowerGcdError, ValueError):
    pass


class UnsupportedFn(PowerGcdError, ValueError):
    pass


class IndexOutOfRange(PowerGcdError, IndexError):
    pass


class NotADivisor(PowerGcdError, ValueError):
    pass


class NotDividing(PowerGcdError, ValueError):
    """Raised when a check needs a | b and it does not hold."""


class AlphaZero(PowerGcdError, ArithmeticError):
    """A structured weight vanished where the formula divides by it."""


class Singular(PowerGcdError, ArithmeticError):
    pass


class DimensionMismatch(PowerGcdError, ValueError):
    pass


class ConfigInvalid(PowerGcdError, ValueError):
    pass


class ParseError(PowerGcdError, ValueError):
    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token
