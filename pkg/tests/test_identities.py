from fractions import Fraction

import pytest

from qlf.core.errors import InvalidParameterError
from qlf.identities import (
    KSeriesSpec,
    MultiKSpec,
    k_multi,
    k_rhs,
    k_series,
    multivariate_collapse_check,
    phi_weighted_series,
    verify_difference_equation,
    verify_main_identity,
    verify_multivariate_recurrences,
)
from qlf.modular import eichler_series, theta_series


def test_k_series_m2_closed_form():
    # K_2^{(0)}(x) = sum_c (-1)^c q^{c(c+1)/2} x^c
    series = k_series(KSeriesSpec(2, 0, q_order=30, x_order=6))
    for c in range(6):
        row = series.coefficient(c)
        assert row.coefficient(c * (c + 1) // 2) == (-1) ** c
        assert len(row.coeffs) == 1


def test_k_rhs_m2_matches_closed_form():
    spec = KSeriesSpec(2, 0, q_order=30, x_order=6)
    assert k_rhs(spec).first_difference(k_series(spec)) is None


@pytest.mark.parametrize("m,a", [(m, a) for m in range(2, 5) for a in range(m - 1)])
def test_main_identity(m, a):
    report = verify_main_identity(KSeriesSpec(m, a, q_order=40, x_order=15))
    assert report.passed, report.discrepancy
    assert report.checked_terms == 15 * 40


@pytest.mark.slow
@pytest.mark.parametrize("m,a", [(m, a) for m in range(2, 7) for a in range(m - 1)])
def test_main_identity_full_truncation(m, a):
    assert verify_main_identity(KSeriesSpec(m, a, q_order=100, x_order=40)).passed


def test_main_identity_detects_perturbation():
    report = verify_main_identity(KSeriesSpec(3, 0, q_order=40, x_order=15), perturb=(2, 5, 1))
    assert not report.passed
    assert report.discrepancy["x_degree"] == 2
    assert report.discrepancy["q_exponent"] == "5"
    assert report.discrepancy["lhs"] == report.discrepancy["rhs"] + 1


@pytest.mark.parametrize("m,a", [(2, 0), (3, 0), (3, 1), (4, 2)])
def test_difference_equation(m, a):
    report = verify_difference_equation(KSeriesSpec(m, a, q_order=40, x_order=12))
    assert report.passed, report.discrepancy


@pytest.mark.parametrize("m,a", [(2, 0), (3, 0), (3, 1), (4, 0), (4, 1), (4, 2)])
def test_weighted_sum_is_theta_series(m, a):
    assert phi_weighted_series(m, a, 60) == theta_series(m, a, 60)


@pytest.mark.slow
@pytest.mark.parametrize("m,a", [(m, a) for m in range(2, 7) for a in range(m - 1)])
def test_weighted_sum_is_theta_series_full_order(m, a):
    assert phi_weighted_series(m, a, 100) == theta_series(m, a, 100)


@pytest.mark.parametrize("m,a", [(m, a) for m in range(2, 6) for a in range(m - 1)])
def test_k_series_at_one_is_eichler_series(m, a):
    # degrees with (d^2 + d s)/m < 30 all sit below x_order = 20
    s = m - 1 - a
    at_one = k_series(KSeriesSpec(m, a, q_order=30, x_order=20)).at_x_one()
    shifted = (m * at_one).shift(Fraction(s * s, 4 * m))
    assert shifted == eichler_series(m, a, 30)
    assert shifted.valuation() == Fraction(s * s, 4 * m)


def test_k_series_m3_a0_at_one():
    at_one = k_series(KSeriesSpec(3, 0, q_order=22, x_order=10)).at_x_one()
    expected = {0: 1, 1: -1, 5: 1, 8: -1, 16: 1, 21: -1}
    assert at_one.dense(22) == [expected.get(j, 0) for j in range(22)]


def test_k_rhs_m3_a1_at_one():
    at_one = k_rhs(KSeriesSpec(3, 1, q_order=25, x_order=10)).at_x_one()
    expected = {0: 1, 2: -1, 4: 1, 10: -1, 14: 1, 24: -1}
    assert at_one.dense(25) == [expected.get(j, 0) for j in range(25)]


def test_lowest_truncation_keeps_constant_term():
    for m, a in [(2, 0), (3, 1), (5, 2)]:
        spec = KSeriesSpec(m, a, q_order=1, x_order=1)
        assert k_series(spec).coefficient(0).dense(1) == [1]
        assert k_rhs(spec).coefficient(0).dense(1) == [1]
    with pytest.raises(InvalidParameterError):
        KSeriesSpec(3, 0, q_order=0)


def test_multi_spec_validation():
    assert MultiKSpec(3, 0, 20).shifts == (0, 0)
    with pytest.raises(InvalidParameterError):
        MultiKSpec(3, 0, 20, shifts=(0, -2))
    with pytest.raises(InvalidParameterError):
        MultiKSpec(3, 0, 20, shifts=(0,))


def test_k_multi_m2_single_variable():
    terms = k_multi(MultiKSpec(2, 0, 20, degree_cap=5)).terms
    assert terms[((2,), 3)] == 1
    assert terms[((3,), 6)] == -1


@pytest.mark.parametrize("a", [0, 1])
def test_recurrences_m3(a):
    report = verify_multivariate_recurrences(3, a, q_order=30, degree_cap=10)
    assert report.passed, report.discrepancy
    names = [c.name for c in report.checks]
    assert {"maru_3", "comp_1", "comp_2"} <= set(names)
    assert ("maru_1" in names) == (a >= 1)


@pytest.mark.slow
@pytest.mark.parametrize("m,a", [(4, 0), (4, 1), (4, 2), (5, 0), (5, 3)])
def test_recurrences_larger_m(m, a):
    report = verify_multivariate_recurrences(m, a, q_order=30)
    assert report.passed, report.discrepancy


def test_recurrences_reject_unsupported_m():
    with pytest.raises(InvalidParameterError):
        verify_multivariate_recurrences(6, 0)


@pytest.mark.parametrize("m,a", [(3, 0), (3, 1), (4, 2)])
def test_collapse_reproduces_single_variable(m, a):
    assert multivariate_collapse_check(m, a, q_order=25, degree_cap=8).passed


def test_spec_validation():
    with pytest.raises(InvalidParameterError):
        KSeriesSpec(1, 0)
    with pytest.raises(InvalidParameterError):
        KSeriesSpec(3, 2)
    with pytest.raises(InvalidParameterError):
        KSeriesSpec(3, 0, q_order=0)
