"""Integer and rational helpers: gcd/lcm, divisors, Moebius, Dirichlet convolution.

Rationals are :class:`fractions.Fraction`, which is always stored in lowest
terms with a positive denominator, so equality and integrality tests are
structural.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, lcm
from typing import Callable, Optional

from .errors import NotPositive, ParseError

__all__ = [
    "ArithmeticFn",
    "Fraction",
    "conv_mobius",
    "divisors",
    "format_rational",
    "gcd",
    "gcd_many",
    "inverse_power_fn",
    "is_squarefree",
    "lcm",
    "mobius",
    "parse_rational",
    "power_fn",
]


def _check_pos(n):
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise NotPositive(f"expected a positive integer, got {n!r}")


def gcd_many(*xs):
    return gcd(*xs)


@lru_cache(maxsize=1 << 16)
def _divisors(n):
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return tuple(small + large[::-1])


def divisors(n):
    """Positive divisors of ``n`` in ascending order."""
    _check_pos(n)
    return list(_divisors(n))


@lru_cache(maxsize=1 << 16)
def _mobius(n):
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1 if p == 2 else 2
    if n > 1:
        result = -result
    return result


def mobius(n):
    _check_pos(n)
    return _mobius(n)


def is_squarefree(n):
    _check_pos(n)
    return _mobius(n) != 0


@dataclass(frozen=True)
class ArithmeticFn:
    """A function from positive integers to rationals.

    Power functions ``x -> x**e`` are described by ``exponent`` alone, which
    keeps them hashable and comparable by value (they key memo tables).
    Anything else wraps a callable and compares by identity of that callable.
    """

    name: str
    exponent: Optional[int] = None
    func: Optional[Callable[[int], object]] = None

    def __post_init__(self):
        if (self.exponent is None) == (self.func is None):
            raise ValueError("give exactly one of exponent or func")

    def __call__(self, x):
        if self.exponent is not None:
            return Fraction(x) ** self.exponent
        return Fraction(self.func(x))

    @property
    def is_power(self):
        return self.exponent is not None

    def __repr__(self):
        return f"ArithmeticFn({self.name})"


@lru_cache(maxsize=None)
def power_fn(a):
    """``x -> x**a``."""
    _check_pos(a)
    return ArithmeticFn(f"xi_{a}", exponent=a)


@lru_cache(maxsize=None)
def inverse_power_fn(a):
    """``x -> x**-a``."""
    _check_pos(a)
    return ArithmeticFn(f"inv_xi_{a}", exponent=-a)


def arithmetic_fn(name, func):
    return ArithmeticFn(name, func=func)


@lru_cache(maxsize=1 << 16)
def _conv_mobius(f, n):
    return sum((f(d) * _mobius(n // d) for d in _divisors(n)), Fraction(0))


def conv_mobius(f, n):
    """``(f * mu)(n) = sum over d | n of f(d) mu(n/d)``."""
    _check_pos(n)
    return _conv_mobius(f, n)


def format_rational(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}", token=text) from exc
