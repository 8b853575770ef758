from fractions import Fraction

import pytest

from qlf.core.characters import (
    chi_generating_check,
    euler_numbers_bernoulli,
    euler_numbers_gf,
    euler_table_bernoulli,
)
from qlf.core.errors import InvalidParameterError

ALL_PAIRS = [(m, a) for m in range(2, 7) for a in range(m - 1)]


def closed_form(m, a):
    b = a + 1
    d = b * b - m * m
    return [
        Fraction(b),
        Fraction(b * d, 3),
        Fraction(b * d * (3 * b * b - 7 * m * m), 15),
        Fraction(b * d * (3 * b ** 4 - 18 * b * b * m * m + 31 * m ** 4), 21),
    ]


def test_tabulated_values():
    assert list(euler_numbers_gf(2, 0, 3).values) == [1, -1, 5, -61]
    assert list(euler_numbers_gf(4, 0, 3).values) == [1, -5, 109, -5465]
    assert list(euler_numbers_gf(3, 0, 2).values) == [1, Fraction(-8, 3), 32]
    assert list(euler_numbers_gf(3, 1, 2).values) == [2, Fraction(-10, 3), 34]


@pytest.mark.parametrize("m,a", ALL_PAIRS)
def test_low_order_closed_form(m, a):
    assert list(euler_numbers_gf(m, a, 3).values) == closed_form(m, a)


@pytest.mark.parametrize("m,a", ALL_PAIRS)
def test_routes_agree(m, a):
    assert euler_numbers_gf(m, a, 20).values == euler_table_bernoulli(m, a, 20).values


def test_table_access():
    table = euler_numbers_gf(2, 0, 4)
    assert table.k_max == 4
    assert table[4] == 1385
    assert euler_numbers_bernoulli(2, 0, 4) == 1385


@pytest.mark.parametrize("m,a", ALL_PAIRS)
def test_chi_generating_function(m, a):
    assert chi_generating_check(m, a, order=6 * m)


def test_rejects_bad_parameters():
    with pytest.raises(InvalidParameterError):
        euler_numbers_gf(3, 2)
    with pytest.raises(InvalidParameterError):
        euler_numbers_gf(3, 0, -1)
    with pytest.raises(InvalidParameterError):
        euler_numbers_bernoulli(3, 0, -2)
