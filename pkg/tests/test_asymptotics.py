import mpmath
import pytest

from qlf.asymptotics import (
    build_expansion,
    conjecture1_error_scan,
    conjecture2_residual,
    kashaev_expansion,
    nearly_modular_leading,
    torus_link_expansion,
    volume_conjecture_check,
)
from qlf.backends import RootContext
from qlf.core.errors import InvalidParameterError
from qlf.core.numeric import distance, root_of_unity, tolerance, working_precision
from qlf.modular import eichler_at_integer


def test_m2_leading_part(prec):
    for N in (1, 5, 12):
        expansion = build_expansion(2, 0, N, 2, prec)
        with working_precision(prec):
            expected = mpmath.sqrt(N) * root_of_unity(3, 4) * root_of_unity(-N, 4)
            via_eichler = mpmath.sqrt(N) * root_of_unity(3, 4) * eichler_at_integer(2, 0, -N, prec)
        assert distance(expansion.leading_theta_part, expected, prec) < tolerance(prec, 16)
        assert distance(expansion.leading_theta_part, via_eichler, prec) < tolerance(prec, 16)


@pytest.mark.parametrize("m,a", [(m, a) for m in range(2, 6) for a in range(m - 1)])
def test_leading_part_from_modular_matrix(m, a, prec):
    for N in (3, 10):
        leading = build_expansion(m, a, N, 0, prec).leading_theta_part
        assert distance(leading, nearly_modular_leading(m, a, N, prec), prec) < tolerance(prec, 16)


def test_tail_starts_with_a_plus_one(prec):
    for m, a in [(2, 0), (4, 2), (5, 1)]:
        expansion = build_expansion(m, a, 7, 0, prec)
        assert distance(expansion.tail_terms[0], a + 1, prec) < tolerance(prec, 16)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
@pytest.mark.parametrize("N", [1, 7, 50])
def test_torus_link_expansion_matches_general_form(m, N, prec):
    expansion = build_expansion(m, 0, N, 6, prec)
    for K in (0, 3, 6):
        with working_precision(prec):
            general = expansion.phase * expansion.value(K)
        assert distance(torus_link_expansion(m, N, K, prec), general, prec) < tolerance(prec, 16)
    with working_precision(prec):
        scaled = N * torus_link_expansion(m, N, 6, prec)
    assert distance(kashaev_expansion(m, N, 6, prec), scaled, prec) < tolerance(prec, 16)


def test_tail_length_is_capped():
    with pytest.raises(InvalidParameterError):
        build_expansion(3, 0, 5, 13)
    with pytest.raises(InvalidParameterError):
        build_expansion(3, 0, 5, 4).value(5)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_conjecture2_proven_case(m):
    for N in (1, 2, 5, 8):
        residual = conjecture2_residual(m, 0, N, RootContext.build(N, 256))
        assert residual < tolerance(256, 24)


@pytest.mark.parametrize("m,a", [(3, 1), (4, 1), (4, 2)])
def test_conjecture2_numerically(m, a):
    for N in (1, 3, 6):
        assert conjecture2_residual(m, a, N, RootContext.build(N, 256)) < mpmath.mpf("1e-12")


@pytest.mark.slow
@pytest.mark.parametrize("m,a", [(m, a) for m in range(2, 5) for a in range(m - 1)])
def test_conjecture2_full_grid(m, a):
    bound = tolerance(256, 24) if a == 0 else mpmath.mpf("1e-12")
    for N in range(1, 16):
        assert conjecture2_residual(m, a, N, RootContext.build(N, 256)) < bound


def test_conjecture2_rejects_mismatched_context():
    with pytest.raises(InvalidParameterError):
        conjecture2_residual(3, 0, 4, RootContext.build(5, 64))


@pytest.mark.parametrize("K", [0, 1, 3])
def test_error_decay_m2(K):
    scan = conjecture1_error_scan(2, 0, K, (8, 16, 32, 64), precision_bits=128)
    assert abs(scan.slope - scan.expected_slope) <= 0.5
    assert scan.decreasing
    assert [row.N for row in scan.rows] == [8, 16, 32, 64]


@pytest.mark.slow
@pytest.mark.parametrize("m,a,K", [(3, 0, 0), (3, 0, 1), (3, 0, 2), (3, 1, 0), (3, 1, 1), (3, 1, 2), (2, 0, 2)])
def test_error_decay_grid(m, a, K):
    scan = conjecture1_error_scan(m, a, K, (8, 16, 32, 64), precision_bits=128)
    assert abs(scan.slope - scan.expected_slope) <= 0.5


def test_error_scan_needs_ascending_n():
    with pytest.raises(InvalidParameterError):
        conjecture1_error_scan(2, 0, 1, (16, 8))


def test_volume_ratio_hopf_link():
    scan = volume_conjecture_check(1, (10, 20, 40), precision_bits=64)
    for row in scan.rows:
        with working_precision(64):
            expected = 2 * mpmath.pi * mpmath.log(row.N) / row.N
        assert distance(row.ratio, expected, 64) < tolerance(64, 16)
    assert scan.decreasing


@pytest.mark.parametrize("m", [2, 4])
def test_volume_ratios_decrease(m):
    scan = volume_conjecture_check(m, (10, 20, 40, 80), precision_bits=64)
    assert scan.decreasing
