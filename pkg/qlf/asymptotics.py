"""
Asymptotic expansions of the omega-series in N and their numerical checks.

The expansion has an oscillating part of size sqrt(N), built from the
modular matrix and the values of the Eichler integrals at integers, and a
tail sum_k E_k/k! (pi i/2mN)^k in the generalized Euler numbers. It is an
asymptotic series, so agreement is measured by how fast the error decays
with N rather than against a fixed tolerance.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import List, Optional, Sequence

import mpmath
import numpy as np

from .backends import RootContext
from .core.characters import euler_numbers_gf, euler_table_bernoulli
from .core.errors import InvalidParameterError
from .core.numeric import DEFAULT_PRECISION_BITS, PeriodicChar, root_of_unity, to_mpf, working_precision
from .invariants import kashaev_theta, y_series
from .modular import eichler_at_integer, eichler_at_rational, modular_matrix

logger = logging.getLogger("qlf.asymptotics")

MAX_TAIL_TERMS = 12


@dataclass
class AsymptoticExpansion:
    """
    Right-hand side of the expansion of e^{s^2 pi i/2mN} Y_m^{(a)}(omega), s = m-1-a.

    ``tail_terms[K]`` is the partial sum of the tail through k = K. ``phase``
    is e^{-s^2 pi i/2mN}, the factor that moves the expansion onto Y itself.
    """

    m: int
    a: int
    N: int
    leading_theta_part: mpmath.mpc
    tail_terms: List[mpmath.mpc]
    phase: mpmath.mpc
    precision_bits: int = DEFAULT_PRECISION_BITS

    @property
    def k_max(self) -> int:
        return len(self.tail_terms) - 1

    def value(self, K: Optional[int] = None) -> mpmath.mpc:
        K = self.k_max if K is None else K
        if not 0 <= K <= self.k_max:
            raise InvalidParameterError(f"K must lie in [0, {self.k_max}], got {K}")
        return self.leading_theta_part + self.tail_terms[K]


def _check_k_max(K_max: int) -> None:
    if not 0 <= K_max <= MAX_TAIL_TERMS:
        raise InvalidParameterError(f"K_max must lie in [0, {MAX_TAIL_TERMS}], got {K_max}")


def _tail_partial_sums(values: Sequence[Fraction], m: int, N: int) -> List[mpmath.mpc]:
    """sum_{k<=K} E_k/k! (pi i/2mN)^k for K = 0..len(values)-1; call inside a precision context."""
    step = 1j * mpmath.pi / (2 * m * N)
    partial = []
    total = mpmath.mpc(0)
    for k, e in enumerate(values):
        total += to_mpf(e / factorial(k)) * step ** k
        partial.append(total)
    return partial


def build_expansion(
    m: int,
    a: int,
    N: int,
    K_max: int = 6,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> AsymptoticExpansion:
    """
    Expansion of e^{s^2 pi i/2mN} Y_m^{(a)}(omega) as N grows.

    Args:
        m, a: Character parameters
        N: Root-of-unity order
        K_max: Last tail term kept, at most 12
        precision_bits: Working precision

    Returns:
        AsymptoticExpansion with the sqrt(N) part
        sqrt(N) e^{3 pi i/4} sqrt(2/m) sum_{k=1}^{m-1} (-1)^k (k-m) sin(k(a+1)pi/m) e^{-k^2 pi i N/2m}
        and the tail partial sums
    """
    char = PeriodicChar(m, a)
    if N < 1:
        raise InvalidParameterError(f"N must be >= 1, got {N}")
    _check_k_max(K_max)
    euler = euler_numbers_gf(m, a, K_max)
    s = char.positive_residue
    with working_precision(precision_bits):
        weights = mpmath.fsum(
            (-1) ** k * (k - m) * mpmath.sinpi(mpmath.mpf(k * (a + 1)) / m) * root_of_unity(-k * k * N, 2 * m)
            for k in range(1, m)
        )
        leading = mpmath.sqrt(N) * root_of_unity(3, 4) * mpmath.sqrt(mpmath.mpf(2) / m) * weights
        tail = _tail_partial_sums(euler.values, m, N)
        phase = root_of_unity(-s * s, 2 * m * N)
    return AsymptoticExpansion(m, a, N, leading, tail, phase, precision_bits)


def nearly_modular_leading(m: int, a: int, N: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpmath.mpc:
    """
    e^{3 pi i/4} sqrt(N) sum_b (M_m)_{m-1-a,b} Phi~_m^{(m-1-b)}(-N).

    The oscillating part of the expansion read off from the modular matrix
    and the integer-point values of the Eichler integrals; equal to
    ``build_expansion(...).leading_theta_part``.
    """
    PeriodicChar(m, a)
    matrix = modular_matrix(m, precision_bits)
    with working_precision(precision_bits):
        total = mpmath.fsum(
            matrix.entry(m - 1 - a, b) * eichler_at_integer(m, m - 1 - b, -N, precision_bits) for b in range(1, m)
        )
        return root_of_unity(3, 4) * mpmath.sqrt(N) * total


def torus_link_expansion(m: int, N: int, K: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpmath.mpc:
    """
    Expansion of the nested omega-sum Y_m^{(0)}(omega) with the phase folded in.

    Built on its own from the Bernoulli form of E_k^{(m;0)}:
    e^{-(m-1)^2 pi i/2mN} (sqrt(N) e^{3 pi i/4} sqrt(2/m) sum_k (-1)^k (k-m) sin(k pi/m) e^{-k^2 pi i N/2m}
    + sum_{k<=K} E_k/k! (pi i/2mN)^k).
    """
    if m < 2:
        raise InvalidParameterError(f"m must be >= 2, got {m}")
    if N < 1:
        raise InvalidParameterError(f"N must be >= 1, got {N}")
    _check_k_max(K)
    euler = euler_table_bernoulli(m, 0, K)
    with working_precision(precision_bits):
        x = mpmath.pi / (2 * m * N)
        oscillating = mpmath.mpc(0)
        for k in range(1, m):
            sign = 1 if k % 2 == 0 else -1
            oscillating += sign * (k - m) * mpmath.sin(k * mpmath.pi / m) * mpmath.expj(-k * k * x * N * N)
        head = mpmath.sqrt(2 * mpmath.mpf(N) / m) * mpmath.expj(3 * mpmath.pi / 4) * oscillating
        tail = mpmath.fsum(to_mpf(euler[k]) / mpmath.factorial(k) * (1j * x) ** k for k in range(K + 1))
        return mpmath.expj(-(m - 1) ** 2 * x) * (head + tail)


def kashaev_expansion(m: int, N: int, K: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpmath.mpc:
    """Expansion of <T(2,2m)>_N = N Y_m^{(0)}(omega) through the tail term k = K."""
    with working_precision(precision_bits):
        return N * torus_link_expansion(m, N, K, precision_bits)


# -----------------------------------------------------------------------------
# Numerical checks
# -----------------------------------------------------------------------------
def conjecture2_residual(m: int, a: int, N: int, ctx: RootContext, backend: str = "complex") -> mpmath.mpf:
    """
    |Phi~_m^{(a)}(1/N) - e^{s^2 pi i/2mN} Y_m^{(a)}(omega)|, s = m-1-a.

    ``backend`` selects the arithmetic used for Y (see ``y_series``).
    """
    char = PeriodicChar(m, a)
    if ctx.N != N:
        raise InvalidParameterError(f"root context is built for N={ctx.N}, not N={N}")
    s = char.positive_residue
    prec = ctx.precision_bits
    eichler = eichler_at_rational(m, a, 1, N, prec)
    y = y_series(m, a, ctx, backend=backend)
    with working_precision(prec):
        residual = abs(eichler - root_of_unity(s * s, 2 * m * N) * y)
    logger.debug(f"[ASYMPTOTIC] m={m} a={a} N={N} Eichler residual {mpmath.nstr(residual, 5)}")
    return residual


@dataclass
class ErrorRow:
    N: int
    exact: mpmath.mpc
    approx: mpmath.mpc
    abs_err: mpmath.mpf


@dataclass
class ErrorScan:
    m: int
    a: int
    K: int
    rows: List[ErrorRow] = field(default_factory=list)
    slope: float = 0.0

    @property
    def decreasing(self) -> bool:
        return all(later.abs_err < earlier.abs_err for earlier, later in zip(self.rows, self.rows[1:]))

    @property
    def expected_slope(self) -> int:
        return -(self.K + 1)


def _check_ascending(N_list: Sequence[int]) -> List[int]:
    values = list(N_list)
    if len(values) < 2:
        raise InvalidParameterError(f"need at least two values of N, got {values}")
    if any(n < 1 for n in values) or any(b <= a for a, b in zip(values, values[1:])):
        raise InvalidParameterError(f"N values must be positive and strictly ascending, got {values}")
    return values


def conjecture1_error_scan(
    m: int,
    a: int,
    K: int,
    N_list: Sequence[int] = (8, 16, 32, 64),
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> ErrorScan:
    """
    Error of the expansion truncated after the tail term K, for each N.

    The exact side is e^{s^2 pi i/2mN} y_series(m, a). The slope is the
    least-squares fit of log err against log N and should sit near -(K+1).
    """
    char = PeriodicChar(m, a)
    _check_k_max(K)
    values = _check_ascending(N_list)
    s = char.positive_residue
    scan = ErrorScan(m, a, K)
    for N in values:
        ctx = RootContext.build(N, precision_bits)
        expansion = build_expansion(m, a, N, K, precision_bits)
        with working_precision(precision_bits):
            exact = root_of_unity(s * s, 2 * m * N) * y_series(m, a, ctx)
            approx = expansion.value(K)
            err = abs(exact - approx)
        scan.rows.append(ErrorRow(N, exact, approx, err))
        logger.info(f"[ASYMPTOTIC] m={m} a={a} K={K} N={N} err={mpmath.nstr(err, 6)}")
    logs_n = np.log(np.array([row.N for row in scan.rows], dtype=float))
    logs_err = np.array([float(mpmath.log(row.abs_err)) for row in scan.rows])
    scan.slope = float(np.polyfit(logs_n, logs_err, 1)[0])
    logger.info(f"[ASYMPTOTIC] m={m} a={a} K={K} fitted slope {scan.slope:.3f} (expected {scan.expected_slope})")
    return scan


@dataclass
class VolumeRow:
    N: int
    value: mpmath.mpc
    ratio: mpmath.mpf


@dataclass
class VolumeScan:
    m: int
    rows: List[VolumeRow] = field(default_factory=list)

    @property
    def decreasing(self) -> bool:
        return all(later.ratio < earlier.ratio for earlier, later in zip(self.rows, self.rows[1:]))


def volume_conjecture_check(
    m: int,
    N_list: Sequence[int] = (10, 20, 40, 80),
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> VolumeScan:
    """(2 pi/N) log |<T(2,2m)>_N| along N_list, from the theta-sum expression."""
    values = _check_ascending(N_list)
    scan = VolumeScan(m)
    for N in values:
        result = kashaev_theta(m, N, RootContext.build(N, precision_bits))
        with working_precision(precision_bits):
            size = abs(result.value)
            ratio = 2 * mpmath.pi * mpmath.log(size) / N if size else mpmath.ninf
        scan.rows.append(VolumeRow(N, result.value, ratio))
    logger.info(f"[ASYMPTOTIC] volume ratios m={m}: {[mpmath.nstr(r.ratio, 5) for r in scan.rows]}")
    return scan
