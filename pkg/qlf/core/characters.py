"""
Generalized Euler numbers E_k^{(m;a)}.

Two independent routes: the Taylor expansion of m*sh((a+1)z)/sh(mz), and the
Bernoulli-polynomial closed form m*L(-2k, chi_{2m}^{(a)}).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Tuple

from .errors import InvalidParameterError
from .numeric import PeriodicChar, bernoulli_polynomial, chi_eval
from .qseries import FormalSeries

DEFAULT_K_MAX = 20

ROUTE_GENERATING_FUNCTION = "generating_function"
ROUTE_BERNOULLI = "bernoulli"


@dataclass(frozen=True)
class EulerNumberTable:
    m: int
    a: int
    values: Tuple[Fraction, ...]
    route: str

    @property
    def k_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.values[k]


def _validated(m: int, a: int) -> PeriodicChar:
    return PeriodicChar(m, a)


def euler_numbers_gf(m: int, a: int, k_max: int = DEFAULT_K_MAX) -> EulerNumberTable:
    """
    Read E_0..E_kmax off m*sh((a+1)z)/sh(mz) = sum_k E_k z^(2k)/(2k)!.

    Both sh-series are odd, so after dividing by z the quotient is a series in
    w = z^2 and only even powers of z are ever formed.
    """
    _validated(m, a)
    if k_max < 0:
        raise InvalidParameterError(f"k_max must be >= 0, got {k_max}")
    b = a + 1
    numerator = [Fraction(m * b ** (2 * j + 1), factorial(2 * j + 1)) for j in range(k_max + 1)]
    denominator = [Fraction(m ** (2 * j + 1), factorial(2 * j + 1)) for j in range(k_max + 1)]
    ratio = []
    for n in range(k_max + 1):
        acc = numerator[n] - sum(denominator[j] * ratio[n - j] for j in range(1, n + 1))
        ratio.append(acc / denominator[0])
    values = tuple(factorial(2 * k) * r for k, r in enumerate(ratio))
    return EulerNumberTable(m, a, values, ROUTE_GENERATING_FUNCTION)


def euler_numbers_bernoulli(m: int, a: int, k: int) -> Fraction:
    """E_k = -m (2m)^(2k)/(2k+1) * (B_{2k+1}((m-1-a)/2m) - B_{2k+1}((m+1+a)/2m))."""
    _validated(m, a)
    if k < 0:
        raise InvalidParameterError(f"k must be >= 0, got {k}")
    f = 2 * m
    difference = bernoulli_polynomial(2 * k + 1, Fraction(m - 1 - a, f)) - bernoulli_polynomial(
        2 * k + 1, Fraction(m + 1 + a, f)
    )
    return -m * Fraction(f ** (2 * k), 2 * k + 1) * difference


def euler_table_bernoulli(m: int, a: int, k_max: int = DEFAULT_K_MAX) -> EulerNumberTable:
    values = tuple(euler_numbers_bernoulli(m, a, k) for k in range(k_max + 1))
    return EulerNumberTable(m, a, values, ROUTE_BERNOULLI)


def chi_generating_check(m: int, a: int, order: int = 20) -> bool:
    """
    Check sh((a+1)z)/sh(mz) = sum_{n>=0} chi(n) y^n with y = e^{-z}, to ``order``.

    In y the left side is (y^(m-1-a) - y^(m+1+a)) / (1 - y^(2m)).
    """
    char = _validated(m, a)
    if order < 1:
        raise InvalidParameterError(f"order must be >= 1, got {order}")
    numerator = FormalSeries({char.positive_residue: 1, char.negative_residue: -1}, 1, order)
    denominator = FormalSeries({0: 1, 2 * m: -1}, 1, order)
    quotient = numerator / denominator
    return all(quotient.coefficient(n) == chi_eval(char, n) for n in range(order))
