"""
Exact rational arithmetic and high-precision complex scalars.

Bernoulli numbers are exact ``Fraction`` values grown on demand into a
process-wide cache. Complex evaluations use ``mpmath.mpc`` inside a
``working_precision`` context, which adds guard bits on top of the precision
requested by the caller.
"""

import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, List, Optional, Sequence, Union

import mpmath

from .errors import InvalidParameterError

HPComplex = mpmath.mpc
Rational = Union[int, Fraction]

DEFAULT_PRECISION_BITS = 256
GUARD_BITS = 32
MIN_PRECISION_BITS = 53


# -----------------------------------------------------------------------------
# Precision handling
# -----------------------------------------------------------------------------
def validate_precision(precision_bits: int) -> int:
    if not isinstance(precision_bits, int) or precision_bits < MIN_PRECISION_BITS:
        raise InvalidParameterError(
            f"precision_bits must be an integer >= {MIN_PRECISION_BITS}, got {precision_bits!r}"
        )
    return precision_bits


@contextmanager
def working_precision(precision_bits: int) -> Iterator[None]:
    """Run mpmath arithmetic at ``precision_bits`` plus guard bits."""
    validate_precision(precision_bits)
    with mpmath.workprec(precision_bits + GUARD_BITS):
        yield


def tolerance(precision_bits: int, slack_bits: int) -> mpmath.mpf:
    """The bound 2^-(precision_bits - slack_bits)."""
    return mpmath.ldexp(mpmath.mpf(1), -(precision_bits - slack_bits))


def to_mpf(value: Rational, precision_bits: Optional[int] = None) -> mpmath.mpf:
    """
    A rational as an mpf.

    Without ``precision_bits`` the quotient is rounded at the active mpmath
    precision, so call it inside ``working_precision``.
    """
    value = Fraction(value)
    if precision_bits is not None:
        with working_precision(precision_bits):
            return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value.numerator) / value.denominator


def distance(x, y, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpmath.mpf:
    """|x - y| evaluated at working precision."""
    with working_precision(precision_bits):
        return abs(mpmath.mpc(x) - mpmath.mpc(y))


def root_of_unity(numerator: int, denominator: int, precision_bits: Optional[int] = None) -> mpmath.mpc:
    """
    exp(pi*i*numerator/denominator), with the numerator reduced mod 2*denominator first.

    Evaluated at the active mpmath precision unless ``precision_bits`` is
    given; callers without an explicit precision must be inside
    ``working_precision``.
    """
    if denominator <= 0:
        raise InvalidParameterError(f"denominator must be positive, got {denominator}")
    if precision_bits is not None:
        with working_precision(precision_bits):
            return mpmath.expjpi(mpmath.mpf(numerator % (2 * denominator)) / denominator)
    return mpmath.expjpi(mpmath.mpf(numerator % (2 * denominator)) / denominator)


# -----------------------------------------------------------------------------
# Bernoulli numbers and polynomials
# -----------------------------------------------------------------------------
class _BernoulliCache:
    """Growable cache of B_0, B_1, ... with the convention B_1 = -1/2."""

    def __init__(self) -> None:
        self._values: List[Fraction] = [Fraction(1)]
        self._lock = threading.Lock()

    def __call__(self, n: int) -> Fraction:
        if n >= len(self._values):
            self._grow(n)
        return self._values[n]

    def _grow(self, n: int) -> None:
        with self._lock:
            while len(self._values) <= n:
                k = len(self._values)
                total = sum(comb(k + 1, j) * self._values[j] for j in range(k))
                self._values.append(-total / (k + 1))


bernoulli_number = _BernoulliCache()


def bernoulli_polynomial(n: int, x: Rational) -> Fraction:
    """
    Evaluate the Bernoulli polynomial B_n at a rational point exactly.

    Args:
        n: Degree, n >= 0
        x: Rational argument

    Returns:
        B_n(x) = sum_k C(n, k) B_k x^(n - k)

    Raises:
        InvalidParameterError: If n is negative
    """
    if n < 0:
        raise InvalidParameterError(f"Bernoulli polynomial degree must be >= 0, got {n}")
    x = Fraction(x)
    return sum((comb(n, k) * bernoulli_number(k) * x ** (n - k) for k in range(n + 1)), Fraction(0))


# -----------------------------------------------------------------------------
# The odd periodic function chi_{2m}^{(a)}
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class PeriodicChar:
    """chi(n) = +1 for n = m-1-a, -1 for n = m+1+a (mod 2m), 0 otherwise."""

    m: int
    a: int

    def __post_init__(self) -> None:
        if self.m < 2:
            raise InvalidParameterError(f"m must be >= 2 for the periodic character, got m={self.m}")
        if not 0 <= self.a <= self.m - 2:
            raise InvalidParameterError(f"a must lie in [0, m-2] = [0, {self.m - 2}], got a={self.a}")

    @property
    def modulus(self) -> int:
        return 2 * self.m

    @property
    def positive_residue(self) -> int:
        return self.m - 1 - self.a

    @property
    def negative_residue(self) -> int:
        return self.m + 1 + self.a

    def __call__(self, n: int) -> int:
        r = n % self.modulus
        if r == self.positive_residue:
            return 1
        if r == self.negative_residue:
            return -1
        return 0

    def values(self) -> List[int]:
        """chi(0), ..., chi(2m - 1)."""
        return [self(n) for n in range(self.modulus)]

    def support(self, limit: int) -> Iterator[int]:
        """Nonnegative n < limit with chi(n) != 0, in increasing order."""
        f = self.modulus
        base = 0
        while base < limit:
            for r in (self.positive_residue, self.negative_residue):
                n = base + r
                if n < limit:
                    yield n
            base += f


def chi_eval(char: PeriodicChar, n: int) -> int:
    return char(n)


# -----------------------------------------------------------------------------
# L-values of periodic sequences
# -----------------------------------------------------------------------------
def _check_period(coefficients: Sequence) -> int:
    f = len(coefficients)
    if f == 0:
        raise InvalidParameterError("periodic sequence must have a positive period")
    return f


def l_value_exact(k: int, coefficients: Sequence[Rational]) -> Fraction:
    """
    L(-k, C) for a rational periodic sequence with zero mean.

    ``coefficients[j]`` holds C(j) for j = 0..f-1, so C(f) = coefficients[0].
    """
    if k < 0:
        raise InvalidParameterError(f"k must be >= 0, got {k}")
    f = _check_period(coefficients)
    values = [Fraction(c) for c in coefficients]
    if sum(values) != 0:
        raise InvalidParameterError(f"periodic sequence must have zero mean, period sum is {sum(values)}")
    total = sum(
        (values[n % f] * bernoulli_polynomial(k + 1, Fraction(n, f)) for n in range(1, f + 1)),
        Fraction(0),
    )
    return -Fraction(f ** k, k + 1) * total


def l_value(k: int, coefficients: Sequence, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpmath.mpc:
    """
    L(-k, C) = -(f^k / (k+1)) sum_{n=1}^{f} C(n) B_{k+1}(n/f).

    Bernoulli values are exact; the combination with the (possibly complex)
    sequence happens at the requested precision.

    Raises:
        InvalidParameterError: If the period sum exceeds 2^-(prec-8)
    """
    if k < 0:
        raise InvalidParameterError(f"k must be >= 0, got {k}")
    f = _check_period(coefficients)
    with working_precision(precision_bits):
        values = [mpmath.mpc(c) if not isinstance(c, Fraction) else mpmath.mpc(to_mpf(c)) for c in coefficients]
        if abs(mpmath.fsum(values)) > tolerance(precision_bits, 8):
            raise InvalidParameterError("periodic sequence must have zero mean over one period")
        total = mpmath.fsum(
            values[n % f] * to_mpf(bernoulli_polynomial(k + 1, Fraction(n, f))) for n in range(1, f + 1)
        )
        return -to_mpf(Fraction(f ** k, k + 1)) * total
