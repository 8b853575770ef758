from fractions import Fraction
from math import comb

import numpy as np
import pytest

from qlf.core.errors import InvalidParameterError, SeriesDivisionError
from qlf.core.qseries import (
    BINOMIALS,
    BiSeries,
    FormalSeries,
    dedekind_eta,
    gauss_binomial,
    pochhammer,
)


def test_gauss_binomial_small():
    assert gauss_binomial(4, 2).dense(5) == [1, 1, 2, 1, 1]
    assert BINOMIALS.coefficients(3, 5) == ()
    assert gauss_binomial(3, 5).is_zero()


@pytest.mark.parametrize("n", range(1, 41))
def test_gauss_binomial_pascal_rules(n):
    # order past the top degree k(n-k) so the whole polynomial is compared
    order = n * n + 1
    for k in range(0, n + 1):
        lhs = gauss_binomial(n, k, order)
        first = gauss_binomial(n - 1, k, order).shift(k).truncate(order) + gauss_binomial(n - 1, k - 1, order)
        second = gauss_binomial(n - 1, k, order) + gauss_binomial(n - 1, k - 1, order).shift(n - k).truncate(order)
        assert lhs == first
        assert lhs == second
        assert lhs.dense(order) == list(BINOMIALS.coefficients(n, k)) + [0] * (order - k * (n - k) - 1)


@pytest.mark.parametrize("n", range(21))
def test_gauss_binomial_symmetry_and_value_at_one(n):
    for k in range(n + 1):
        coeffs = BINOMIALS.coefficients(n, k)
        assert coeffs == BINOMIALS.coefficients(n, n - k)
        assert all(c > 0 for c in coeffs)
        assert sum(coeffs) == comb(n, k)


def _random_series(rng, order):
    denom = int(rng.choice([1, 2, 3, 8, 12]))
    size = int(rng.integers(1, 16))
    exponents = rng.integers(0, order * denom, size=size)
    values = rng.integers(-9, 10, size=size)
    return FormalSeries({int(k): int(c) for k, c in zip(exponents, values)}, denom, order)


@pytest.mark.parametrize("seed", range(8))
def test_ring_axioms_on_random_series(seed):
    rng = np.random.default_rng(seed)
    order = int(rng.integers(5, 61))
    a, b, c = (_random_series(rng, order) for _ in range(3))
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    assert a * FormalSeries.one(order) == a


def test_pochhammer():
    assert pochhammer(1, 1, 3, order=7, offset=1).dense(7) == [1, -1, -1, 0, 1, 1, -1]
    assert pochhammer(-1, 2, 2, order=6).dense(6) == [2, 0, 2, 0, 0, 0]
    with pytest.raises(InvalidParameterError):
        pochhammer(2, 1, 3)


def test_eta_pentagonal_numbers():
    eta = dedekind_eta(1, 30)
    expected = {0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1, 15: -1, 22: 1, 26: 1}
    for n in range(29):
        assert eta.coefficient(Fraction(1, 24) + n) == expected.get(n, 0)


def test_eta_cube_jacobi():
    cube = dedekind_eta(1, 40) ** 3
    expected = {n * (n + 1) // 2: (-1) ** n * (2 * n + 1) for n in range(9)}
    for k in range(36):
        assert cube.coefficient(Fraction(1, 8) + k) == expected.get(k, 0)


def test_eta_grids_reconcile():
    half = dedekind_eta(Fraction(1, 2), 20)
    assert half.denom == 48
    assert (half ** 3).valuation() == Fraction(1, 16)
    product = half * dedekind_eta(2, 20)
    assert product.valuation() == Fraction(1, 48) + Fraction(1, 12)


def test_division_geometric_series():
    quotient = FormalSeries.one(10) / FormalSeries.from_coefficients([1, -1], 10)
    assert quotient.dense(10) == [1] * 10
    assert quotient.order == 10


def test_division_negative_exponent():
    quotient = FormalSeries.one(100) / FormalSeries.monomial(1, Fraction(1, 2), 100)
    assert quotient.coefficient(Fraction(-1, 2)) == 1
    assert quotient.order == Fraction(99)


def test_division_rejects_non_unit_lead():
    with pytest.raises(SeriesDivisionError):
        FormalSeries.one(10) / FormalSeries.from_coefficients([2, 1], 10)
    with pytest.raises(SeriesDivisionError):
        FormalSeries.one(10) / FormalSeries.zero(10)


def test_exact_integer_division():
    series = FormalSeries({0: 4, 2: 6}, 1, 10)
    assert series.exact_div_int(2) == FormalSeries({0: 2, 2: 3}, 1, 10)
    with pytest.raises(SeriesDivisionError):
        series.exact_div_int(4)


def test_product_keeps_smaller_order():
    a = FormalSeries.from_coefficients([1, 1], 5)
    b = FormalSeries.from_coefficients([1, -1], 8)
    product = a * b
    assert product.order == 5
    assert product.dense(5) == [1, 0, -1, 0, 0]


def test_first_difference_reports_location():
    a = FormalSeries({0: 1, 3: 2}, 1, 10)
    b = FormalSeries({0: 1, 3: 5}, 1, 10)
    assert a.first_difference(b) == (Fraction(3), 2, 5)
    assert a.first_difference(a) is None


def test_bi_series_substitution():
    series = BiSeries.from_dense({0: [1], 1: [0, 1], 2: [1]}, x_order=4, q_order=10)
    moved = series.substitute_x(2)
    assert moved.coefficient(1).coefficient(3) == 1
    assert moved.coefficient(2).coefficient(4) == 1
    assert series.at_x_one().dense(3) == [2, 1, 0]
