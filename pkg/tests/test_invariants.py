import mpmath
import pytest

from qlf.backends import RootContext
from qlf.core.errors import InvalidParameterError
from qlf.core.numeric import distance, root_of_unity, tolerance, working_precision
from qlf.invariants import (
    colored_jones_chi_form,
    colored_jones_ratio,
    kashaev_invariant,
    kashaev_nested,
    kashaev_theta,
    y_series,
)
from qlf.modular import eichler_at_rational


def test_hopf_link_value():
    for N in range(1, 65):
        ctx = RootContext.build(N, 64)
        assert kashaev_nested(1, N, ctx).value == N
        assert kashaev_theta(1, N, ctx).value == N


def test_small_values(root_context, prec):
    assert distance(kashaev_nested(2, 1, root_context(1)).value, 1, prec) < tolerance(prec, 16)
    assert distance(kashaev_nested(2, 2, root_context(2)).value, 4, prec) < tolerance(prec, 16)
    assert distance(kashaev_theta(2, 1, root_context(1)).value, 1, prec) < tolerance(prec, 16)


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("N", [1, 3, 7, 10])
def test_nested_matches_theta(m, N, root_context, prec):
    result = kashaev_invariant(m, N, root_context(N), method="both")
    assert result.cross_method < tolerance(prec, 24)
    assert distance(result.value, result.extra["theta_value"], prec) == result.cross_method


@pytest.mark.slow
@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_nested_matches_theta_full_grid(m):
    for N in range(1, 31):
        result = kashaev_invariant(m, N, RootContext.build(N, 256), method="both")
        assert result.cross_method < tolerance(256, 24)


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("N", [2, 5, 12])
def test_exact_backend_agrees(m, N):
    result = kashaev_nested(m, N, RootContext.build(N, 256, exact_backend_enabled=True))
    assert result.exact_value is not None
    assert result.exact_value.modulus == 2 * N
    assert result.cross_backend < tolerance(256, 32)


def test_y_series_a0_is_invariant_over_n(root_context, prec):
    ctx = root_context(9)
    with working_precision(prec):
        scaled = 9 * y_series(4, 0, ctx)
    assert distance(scaled, kashaev_nested(4, 9, ctx).value, prec) < tolerance(prec, 16)


def test_y_series_backends_agree(root_context, prec):
    ctx = root_context(6)
    assert distance(y_series(4, 2, ctx), y_series(4, 2, ctx, backend="exact"), prec) < tolerance(prec, 24)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_y_series_at_n1_counts_shifted_chains(m, root_context, prec):
    ctx = root_context(1)
    for a in range(m - 1):
        assert distance(y_series(m, a, ctx), 1 + a, prec) < tolerance(prec, 16)


def test_y_series_m3_a1_n2(root_context, prec):
    assert distance(y_series(3, 1, root_context(2)), 2, prec) < tolerance(prec, 16)


@pytest.mark.parametrize("N", [1, 4, 5, 11])
def test_y_series_matches_eichler_for_m3(N, root_context, prec):
    ctx = root_context(N)
    with working_precision(prec):
        expected = root_of_unity(-1, 6 * N) * eichler_at_rational(3, 1, 1, N, prec)
    assert distance(y_series(3, 1, ctx), expected, prec) < mpmath.mpf("1e-12")


def test_colored_jones_single_color():
    h = mpmath.mpc("0.4", "-0.25")
    with working_precision(128):
        expected = 2 * mpmath.sinh(h / 2)
    for m in (1, 2, 5):
        assert distance(colored_jones_ratio(m, 1, h, 128), expected, 128) < tolerance(128, 16)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
@pytest.mark.parametrize("N", [1, 2, 5, 8])
def test_colored_jones_chi_rewrite(m, N):
    h = mpmath.mpc("0.03", "0.21")
    lhs = colored_jones_ratio(m, N, h, 128)
    rhs = colored_jones_chi_form(m, N, h, 128)
    assert distance(lhs, rhs, 128) < tolerance(128, 16) * max(1, abs(lhs))


def test_rejects_bad_parameters(root_context):
    ctx = root_context(4)
    with pytest.raises(InvalidParameterError):
        kashaev_nested(0, 4, ctx)
    with pytest.raises(InvalidParameterError):
        kashaev_nested(2, 5, ctx)
    with pytest.raises(InvalidParameterError):
        y_series(3, 2, ctx)
    with pytest.raises(InvalidParameterError):
        kashaev_invariant(2, 4, ctx, method="jones")
