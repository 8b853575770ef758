from fractions import Fraction

import mpmath
import pytest

from qlf.core.characters import euler_numbers_bernoulli
from qlf.core.errors import InvalidParameterError
from qlf.core.numeric import (
    GUARD_BITS,
    PeriodicChar,
    bernoulli_number,
    bernoulli_polynomial,
    distance,
    l_value,
    l_value_exact,
    root_of_unity,
    to_mpf,
    tolerance,
    working_precision,
)


def test_bernoulli_numbers():
    assert [bernoulli_number(n) for n in range(7)] == [
        Fraction(1),
        Fraction(-1, 2),
        Fraction(1, 6),
        Fraction(0),
        Fraction(-1, 30),
        Fraction(0),
        Fraction(1, 42),
    ]


def test_bernoulli_polynomial_value():
    assert bernoulli_polynomial(3, Fraction(1, 4)) == Fraction(3, 64)
    assert bernoulli_polynomial(2, 0) == Fraction(1, 6)


@pytest.mark.parametrize("n", [1, 2, 5, 9])
@pytest.mark.parametrize("x", [Fraction(0), Fraction(1, 3), Fraction(-5, 7)])
def test_bernoulli_polynomial_shift(n, x):
    assert bernoulli_polynomial(n, x + 1) - bernoulli_polynomial(n, x) == n * x ** (n - 1)


def test_bernoulli_polynomial_rejects_negative_degree():
    with pytest.raises(InvalidParameterError):
        bernoulli_polynomial(-1, 0)


def test_periodic_char_values():
    assert PeriodicChar(2, 0).values() == [0, 1, 0, -1]
    assert PeriodicChar(3, 1).values() == [0, 1, 0, 0, 0, -1]
    assert PeriodicChar(4, 0).values() == [0, 0, 0, 1, 0, -1, 0, 0]


@pytest.mark.parametrize("m,a", [(2, 0), (3, 0), (3, 1), (5, 3)])
def test_periodic_char_is_odd(m, a):
    char = PeriodicChar(m, a)
    assert all(char(-n) == -char(n) for n in range(4 * m))
    assert list(char.support(4 * m)) == [n for n in range(4 * m) if char(n)]


@pytest.mark.parametrize("m,a", [(1, 0), (3, 2), (3, -1)])
def test_periodic_char_rejects_bad_parameters(m, a):
    with pytest.raises(InvalidParameterError):
        PeriodicChar(m, a)
    with pytest.raises(ValueError):
        PeriodicChar(m, a)


def test_l_value_exact_small_period():
    assert l_value_exact(0, [-1, 1]) == Fraction(1, 2)


def test_l_value_rejects_nonzero_mean():
    with pytest.raises(InvalidParameterError):
        l_value_exact(1, [1, 1, 0])
    with pytest.raises(InvalidParameterError):
        l_value(1, [1, 0, 0], 64)


@pytest.mark.parametrize("m,a", [(2, 0), (3, 1), (4, 2), (5, 0)])
@pytest.mark.parametrize("k", [0, 1, 3])
def test_l_value_gives_euler_numbers(m, a, k):
    chi = PeriodicChar(m, a).values()
    assert m * l_value_exact(2 * k, chi) == euler_numbers_bernoulli(m, a, k)


def test_l_value_numeric_matches_exact():
    chi = PeriodicChar(3, 1).values()
    exact = l_value_exact(4, chi)
    value = l_value(4, chi, 128)
    assert distance(value, to_mpf(exact, 128), 128) < tolerance(128, 16)


def test_working_precision_adds_guard_bits():
    with working_precision(64):
        assert mpmath.mp.prec == 64 + GUARD_BITS


def test_working_precision_rejects_low_precision():
    with pytest.raises(InvalidParameterError):
        with working_precision(20):
            pass


def test_root_of_unity():
    assert distance(root_of_unity(1, 2), 1j, 128) < tolerance(128, 8)
    assert distance(root_of_unity(7, 2), -1j, 128) < tolerance(128, 8)
    assert distance(root_of_unity(1, 2, 128), 1j, 128) < tolerance(128, 8)


def test_explicit_precision_is_kept_outside_a_context():
    with working_precision(128):
        expected = (1 + 1j) / mpmath.sqrt(2)
        third = mpmath.mpf(1) / 3
    assert distance(root_of_unity(1, 4, 128), expected, 128) < tolerance(128, 8)
    assert distance(to_mpf(Fraction(1, 3), 128), third, 128) < tolerance(128, 8)
    # the active default precision only carries 53 bits
    assert distance(root_of_unity(1, 4), expected, 128) > tolerance(128, 8)
