"""
Kashaev's invariant of the torus link T(2,2m) and the omega-series Y_m^{(a)}.

Three evaluations are provided: the colored Jones ratio at a generic h, the
nested q-binomial sum at omega = exp(2*pi*i/N) (on either backend), and the
O(N) theta-sum expression. The nested sum is accumulated from the innermost
index outward: the partial sum over c_1..c_i is kept as a function of
c_{i+1}, which gives O(m N^2) backend operations.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, List, Optional

import mpmath

from .backends import GroupRingElement, RootBackend, RootContext, get_backend
from .core.errors import InvalidParameterError
from .core.numeric import PeriodicChar, distance, root_of_unity, working_precision

logger = logging.getLogger("qlf.invariants")

METHOD_NESTED = "nested"
METHOD_THETA = "theta"
METHODS = (METHOD_NESTED, METHOD_THETA)


@dataclass
class InvariantResult:
    m: int
    N: int
    method: str
    value: mpmath.mpc
    precision_bits: int
    exact_value: Optional[GroupRingElement] = None
    cross_method: Optional[mpmath.mpf] = None
    cross_backend: Optional[mpmath.mpf] = None
    extra: dict = field(default_factory=dict)


def _check_m(m: int, minimum: int) -> None:
    if not isinstance(m, int) or m < minimum:
        raise InvalidParameterError(f"m must be an integer >= {minimum}, got {m!r}")


def _check_a(m: int, a: int) -> None:
    if not isinstance(a, int) or not 0 <= a <= m - 2:
        raise InvalidParameterError(f"a must lie in [0, m-2] = [0, {m - 2}], got a={a!r}")


# -----------------------------------------------------------------------------
# Colored Jones
# -----------------------------------------------------------------------------
def colored_jones_ratio(m: int, N: int, h, precision_bits: int = 256) -> mpmath.mpc:
    """
    2 sh(Nh/2) J_N(K; h) / J_N(O; h) for K = T(2,2m).

    Args:
        m: Half the crossing number, m >= 1
        N: Color (dimension of the representation), N >= 1
        h: Complex deformation parameter, q = e^h
        precision_bits: Working precision

    Returns:
        e^{-m(N^2-1)h/2} sum_{eps=+-1} sum_{j<N} eps e^{m h j^2 + (m+eps) h j + h eps/2}
    """
    _check_m(m, 1)
    if N < 1:
        raise InvalidParameterError(f"N must be >= 1, got {N}")
    with working_precision(precision_bits):
        h = mpmath.mpc(h)
        total = mpmath.mpc(0)
        for eps in (1, -1):
            for j in range(N):
                total += eps * mpmath.exp(m * h * j * j + (m + eps) * h * j + h * eps / 2)
        return mpmath.exp(-m * (N * N - 1) * h / 2) * total


def colored_jones_chi_form(m: int, N: int, h, precision_bits: int = 256) -> mpmath.mpc:
    """The same ratio rewritten with chi_{2m}^{(0)}: a sum over 0 <= k <= 2mN."""
    _check_m(m, 2)
    char = PeriodicChar(m, 0)
    with working_precision(precision_bits):
        h = mpmath.mpc(h)
        total = mpmath.fsum(char(k) * mpmath.exp(k * k * h / (4 * m)) for k in char.support(2 * m * N + 1))
        prefactor = mpmath.exp(-m * (N * N - 1) * h / 2 - (m * m + 1) * h / (4 * m))
        return -prefactor * total


# -----------------------------------------------------------------------------
# Nested q-binomial sum at omega
# -----------------------------------------------------------------------------
def _omega_series(backend: RootBackend, m: int, a: int) -> Any:
    """
    Y_m^{(a)}(omega) on the given backend.

    Exponents live on the zeta grid: omega^e = zeta^(2e), (-1)^c = zeta^(Nc).
    Only c_{m-1} is capped at N-1; below it each index runs over the support
    of its binomial, so c_a (and the indices under it) may reach N.
    """
    N = backend.ctx.N
    one = backend.monomial(0)
    inner: List[Any] = [one] * (N + 1)
    for i in range(1, m - 1):
        lift = 1 if i == a else 0
        linear = 1 if i > a else 0
        weights = [backend.monomial(2 * (c * c + linear * c)) for c in range(N + 1)]
        outer = []
        for top in range(N + 1):
            upper = top + lift
            acc = backend.zero()
            for c in range(min(N, upper) + 1):
                acc = acc + weights[c] * backend.binomial(upper, c) * inner[c]
            outer.append(acc)
        inner = outer
    total = backend.zero()
    for top in range(N):
        total = total + backend.monomial(top * (top + 1) + N * top) * inner[top]
    return total


def y_series(m: int, a: int, ctx: RootContext, backend: str = "complex") -> mpmath.mpc:
    """
    The omega-series Y_m^{(a)}(omega), omega = exp(2*pi*i/N).

    Sum over 0 <= c_{m-1} <= N-1 and 0 <= c_i <= c_{i+1} + delta_{i,a} of
    (-1)^{c_{m-1}} omega^{c_{m-1}(c_{m-1}+1)/2 + sum_{i<=m-2} c_i^2 + sum_{i>a} c_i}
    prod_i [c_{i+1} + delta_{i,a} choose c_i].

    For a = 0 this is the box c_i in [0, N-1]. For a > 0 the terms with
    c_a = c_{a+1} + 1 = N are kept; at N = 1 they give Y = 1 + a, the value
    Phi~_m^{(a)}(1) e^{-s^2 pi i/2m} requires.
    """
    _check_m(m, 2)
    _check_a(m, a)
    engine = get_backend(backend, ctx)
    with working_precision(ctx.precision_bits):
        return engine.to_complex(_omega_series(engine, m, a))


def kashaev_nested(m: int, N: int, ctx: RootContext) -> InvariantResult:
    """
    <T(2,2m)>_N by the nested q-binomial sum.

    When the context enables the exact backend the sum is also formed in the
    group ring and the two values are compared.
    """
    _check_m(m, 1)
    if ctx.N != N:
        raise InvalidParameterError(f"root context is built for N={ctx.N}, not N={N}")
    if m == 1:
        return InvariantResult(m, N, METHOD_NESTED, mpmath.mpc(N), ctx.precision_bits)

    complex_backend = get_backend("complex", ctx)
    with working_precision(ctx.precision_bits):
        value = N * _omega_series(complex_backend, m, 0)
    result = InvariantResult(m, N, METHOD_NESTED, value, ctx.precision_bits)

    if ctx.exact_backend_enabled:
        exact_backend = get_backend("exact", ctx)
        result.exact_value = N * _omega_series(exact_backend, m, 0)
        result.cross_backend = distance(exact_backend.to_complex(result.exact_value), value, ctx.precision_bits)
        logger.debug(f"[INVARIANT] m={m} N={N} cross-backend residual {mpmath.nstr(result.cross_backend, 5)}")
    return result


def kashaev_theta(m: int, N: int, ctx: RootContext) -> InvariantResult:
    """-(1/4mN) e^{-(m-1)^2 pi i/2mN} sum_{k=0}^{2mN} k^2 chi(k) e^{k^2 pi i/2mN}."""
    _check_m(m, 1)
    if ctx.N != N:
        raise InvalidParameterError(f"root context is built for N={ctx.N}, not N={N}")
    if m == 1:
        return InvariantResult(m, N, METHOD_THETA, mpmath.mpc(N), ctx.precision_bits)

    char = PeriodicChar(m, 0)
    period = 2 * m * N
    with working_precision(ctx.precision_bits):
        total = mpmath.fsum(
            k * k * char(k) * root_of_unity(k * k, period) for k in char.support(period + 1)
        )
        value = -root_of_unity(-(m - 1) ** 2, period) * total / (4 * m * N)
    return InvariantResult(m, N, METHOD_THETA, value, ctx.precision_bits)


def kashaev_invariant(m: int, N: int, ctx: RootContext, method: str = METHOD_NESTED) -> InvariantResult:
    """
    Dispatch on ``method`` ("nested", "theta" or "both").

    With "both" the nested value is returned and ``cross_method`` holds its
    distance to the theta-sum value.
    """
    if method == METHOD_NESTED:
        return kashaev_nested(m, N, ctx)
    if method == METHOD_THETA:
        return kashaev_theta(m, N, ctx)
    if method == "both":
        nested = kashaev_nested(m, N, ctx)
        theta = kashaev_theta(m, N, ctx)
        nested.cross_method = distance(nested.value, theta.value, ctx.precision_bits)
        nested.extra["theta_value"] = theta.value
        logger.info(f"[INVARIANT] m={m} N={N} cross-method residual {mpmath.nstr(nested.cross_method, 5)}")
        return nested
    raise InvalidParameterError(f"method must be one of {list(METHODS) + ['both']}, got {method!r}")
