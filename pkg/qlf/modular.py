"""
Theta series Phi_m^{(a)}, Eichler integrals, and their modular behaviour.

Exact q-series (theta and Eichler series, eta products, affine su(2)
characters) are ``FormalSeries``; evaluations in the upper half plane and at
rational points are mpmath complex values at the caller's precision.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .core.errors import InvalidParameterError
from .core.numeric import DEFAULT_PRECISION_BITS, PeriodicChar, root_of_unity, tolerance, working_precision
from .core.qseries import DEFAULT_ORDER, FormalSeries, dedekind_eta, pochhammer
from .core.verification import VerificationReport

logger = logging.getLogger("qlf.modular")

ETA_CASES = ("m2", "m3", "m4")
CONSECUTIVE_SMALL_TERMS = 3


# -----------------------------------------------------------------------------
# Exact series
# -----------------------------------------------------------------------------
def theta_series(m: int, a: int, q_order: int = DEFAULT_ORDER) -> FormalSeries:
    """Phi_m^{(a)} = sum_{n in Z} n chi(n) q^{n^2/4m} = 2 sum_{n>=1} n chi(n) q^{n^2/4m}."""
    char = PeriodicChar(m, a)
    bound = 4 * m * q_order
    coeffs: Dict[int, int] = {}
    for n in char.support(bound):
        if n * n >= bound:
            break
        coeffs[n * n] = 2 * n * char(n)
    return FormalSeries(coeffs, 4 * m, Fraction(q_order))


def eichler_series(m: int, a: int, q_order: int = DEFAULT_ORDER) -> FormalSeries:
    """Phi~_m^{(a)} = m sum_{n>=0} chi(n) q^{n^2/4m}."""
    char = PeriodicChar(m, a)
    bound = 4 * m * q_order
    coeffs: Dict[int, int] = {}
    for n in char.support(bound):
        if n * n >= bound:
            break
        coeffs[n * n] = m * char(n)
    return FormalSeries(coeffs, 4 * m, Fraction(q_order))


@dataclass(frozen=True)
class ThetaFamily:
    """Phi_m^{(m-2)}, ..., Phi_m^{(0)}: entry r (1-based) is Phi_m^{(m-1-r)}."""

    m: int
    series: Tuple[FormalSeries, ...]

    def component(self, a: int) -> FormalSeries:
        return self.series[self.m - 2 - a]


def theta_family(m: int, q_order: int = DEFAULT_ORDER) -> ThetaFamily:
    if m < 2:
        raise InvalidParameterError(f"m must be >= 2, got {m}")
    return ThetaFamily(m, tuple(theta_series(m, m - 1 - r, q_order) for r in range(1, m)))


# -----------------------------------------------------------------------------
# Numeric evaluation
# -----------------------------------------------------------------------------
def _check_tau(tau) -> mpmath.mpc:
    tau = mpmath.mpc(tau)
    if tau.imag <= 0:
        raise InvalidParameterError(f"tau must lie in the upper half plane, got Im(tau) = {mpmath.nstr(tau.imag, 8)}")
    return tau


def _sum_over_support(char: PeriodicChar, term, precision_bits: int) -> mpmath.mpc:
    threshold = tolerance(precision_bits, 32)
    total = mpmath.mpc(0)
    small = 0
    for n in char.support(10 ** 12):
        value = term(n)
        total += value
        small = small + 1 if abs(value) < threshold else 0
        if small >= CONSECUTIVE_SMALL_TERMS:
            break
    return total


def theta_eval(m: int, a: int, tau, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpmath.mpc:
    """Phi_m^{(a)}(tau) at q = e^{2 pi i tau}, Im(tau) > 0."""
    char = PeriodicChar(m, a)
    with working_precision(precision_bits):
        tau = _check_tau(tau)
        step = 1j * mpmath.pi * tau / (2 * m)
        return _sum_over_support(char, lambda n: 2 * n * char(n) * mpmath.exp(step * n * n), precision_bits)


def eichler_series_eval(m: int, a: int, tau, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpmath.mpc:
    """Phi~_m^{(a)}(tau) at q = e^{2 pi i tau}, Im(tau) > 0."""
    char = PeriodicChar(m, a)
    with working_precision(precision_bits):
        tau = _check_tau(tau)
        step = 1j * mpmath.pi * tau / (2 * m)
        return _sum_over_support(char, lambda n: m * char(n) * mpmath.exp(step * n * n), precision_bits)


def eichler_at_rational(m: int, a: int, M: int, N: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpmath.mpc:
    """
    Limit value of Phi~_m^{(a)} at tau = M/N.

    Args:
        m, a: Character parameters
        M: Numerator, coprime to N
        N: Positive denominator
        precision_bits: Working precision

    Returns:
        m sum_{n=0}^{mN} chi(n) (1 - n/mN) e^{n^2 M pi i / 2mN}

    Raises:
        InvalidParameterError: If N <= 0 or gcd(M, N) != 1
    """
    char = PeriodicChar(m, a)
    if N <= 0:
        raise InvalidParameterError(f"N must be positive, got {N}")
    if gcd(M, N) != 1:
        raise InvalidParameterError(f"M and N must be coprime, got gcd({M}, {N}) = {gcd(M, N)}")
    span = m * N
    with working_precision(precision_bits):
        total = mpmath.fsum(
            char(n) * mpmath.mpf(span - n) * root_of_unity(n * n * M, 2 * span)
            for n in char.support(span + 1)
        )
        return m * total / span


def eichler_at_integer(m: int, a: int, N: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpmath.mpc:
    """Phi~_m^{(a)}(N) = (1+a) e^{(m-1-a)^2 pi i N / 2m} for integer N."""
    char = PeriodicChar(m, a)
    s = char.positive_residue
    with working_precision(precision_bits):
        return (1 + a) * root_of_unity(s * s * N, 2 * m)


def eichler_limit_bridge(
    m: int,
    a: int,
    N: int,
    t_values: Optional[Sequence] = None,
    precision_bits: int = 64,
) -> Tuple[mpmath.mpc, mpmath.mpc, mpmath.mpf]:
    """
    Approach tau = 1/N from above along tau = 1/N + i t / 2 pi and extrapolate t -> 0.

    The small-t expansion is a power series in t, so two Richardson steps on
    a halving grid remove the t and t^2 terms. The default grid starts at
    t = 1/(8 (2mN)^2), inside the range where that expansion is accurate.

    Returns:
        (extrapolated value, finite-sum value at 1/N, absolute difference)
    """
    if t_values is None:
        t0 = Fraction(1, 8 * (2 * m * N) ** 2)
        t_values = [t0, t0 / 2, t0 / 4]
    if len(t_values) != 3:
        raise InvalidParameterError(f"Richardson bridge needs three t values, got {len(t_values)}")
    with working_precision(precision_bits):
        ts = [mpmath.mpf(t.numerator) / t.denominator if isinstance(t, Fraction) else mpmath.mpf(t) for t in t_values]
        base = mpmath.mpf(1) / N
        f = [eichler_series_eval(m, a, mpmath.mpc(base, t / (2 * mpmath.pi)), precision_bits) for t in ts]
        r1 = [2 * f[1] - f[0], 2 * f[2] - f[1]]
        extrapolated = (4 * r1[1] - r1[0]) / 3
        exact = eichler_at_rational(m, a, 1, N, precision_bits)
        return extrapolated, exact, abs(extrapolated - exact)


# -----------------------------------------------------------------------------
# Modular transformations
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class ModularMatrix:
    """(M_m)_{a,b} = sqrt(2/m) sin(a b pi / m), 1 <= a, b <= m-1."""

    m: int
    precision_bits: int
    entries: mpmath.matrix

    def entry(self, a: int, b: int) -> mpmath.mpf:
        return self.entries[a - 1, b - 1]

    def square_residual(self) -> mpmath.mpf:
        with working_precision(self.precision_bits):
            size = self.m - 1
            return mpmath.mnorm(self.entries * self.entries - mpmath.eye(size), 1)

    def is_symmetric(self) -> bool:
        size = self.m - 1
        return all(self.entries[i, j] == self.entries[j, i] for i in range(size) for j in range(size))


def modular_matrix(m: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> ModularMatrix:
    if m < 2:
        raise InvalidParameterError(f"m must be >= 2, got {m}")
    with working_precision(precision_bits):
        norm = mpmath.sqrt(mpmath.mpf(2) / m)
        size = m - 1
        entries = mpmath.matrix(size, size)
        for i in range(size):
            for j in range(size):
                entries[i, j] = norm * mpmath.sinpi(mpmath.mpf((i + 1) * (j + 1)) / m)
    return ModularMatrix(m, precision_bits, entries)


def theta_vector(m: int, tau, precision_bits: int = DEFAULT_PRECISION_BITS) -> List[mpmath.mpc]:
    """(Phi_m^{(m-2)}(tau), ..., Phi_m^{(0)}(tau))."""
    return [theta_eval(m, m - 1 - r, tau, precision_bits) for r in range(1, m)]


def s_transform_check(m: int, tau, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpmath.mpf:
    """Max-norm residual of Phi_m(tau) = (i/tau)^{3/2} M_m Phi_m(-1/tau), principal branch."""
    matrix = modular_matrix(m, precision_bits)
    with working_precision(precision_bits):
        tau = _check_tau(tau)
        lhs = theta_vector(m, tau, precision_bits)
        image = theta_vector(m, -1 / tau, precision_bits)
        factor = mpmath.power(1j / tau, mpmath.mpf(3) / 2)
        rhs = matrix.entries * mpmath.matrix(image)
        residual = max(abs(lhs[i] - factor * rhs[i]) for i in range(m - 1))
    logger.debug(f"[MODULAR] S-check m={m} tau={mpmath.nstr(tau, 6)} residual {mpmath.nstr(residual, 5)}")
    return residual


def sample_taus(count: int = 3, seed: int = 20240611) -> List[complex]:
    """Deterministic points of the upper half plane for numeric checks."""
    rng = np.random.default_rng(seed)
    return [complex(x, y) for x, y in zip(rng.uniform(-0.5, 0.5, count), rng.uniform(0.6, 1.6, count))]


def t_transform_check(
    m: int,
    q_order: int = 60,
    taus: Optional[Sequence] = None,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> VerificationReport:
    """
    Phi_m^{(m-1-r)}(tau + 1) = e^{r^2 pi i / 2m} Phi_m^{(m-1-r)}(tau) for r = 1..m-1.

    The exact part checks that every exponent e of the series satisfies
    e - r^2/4m in Z; the numeric part compares both sides at sample points.
    """
    taus = list(taus) if taus is not None else sample_taus()
    checks = []
    for r in range(1, m):
        series = theta_series(m, m - 1 - r, q_order)
        shift = Fraction(r * r, 4 * m)
        bad = next(((e, c) for e, c in series.items() if (e - shift).denominator != 1), None)
        checks.append(
            VerificationReport(
                f"t_exponents_r{r}",
                bad is None,
                len(series.coeffs),
                None if bad is None else {"exponent": str(bad[0]), "coefficient": bad[1]},
            )
        )
        with working_precision(precision_bits):
            phase = root_of_unity(r * r, 2 * m)
            worst = mpmath.mpf(0)
            for tau in taus:
                tau = mpmath.mpc(tau)
                moved = theta_eval(m, m - 1 - r, tau + 1, precision_bits)
                worst = max(worst, abs(moved - phase * theta_eval(m, m - 1 - r, tau, precision_bits)))
            ok = worst < tolerance(precision_bits, 40)
        checks.append(
            VerificationReport(
                f"t_numeric_r{r}",
                bool(ok),
                len(taus),
                None if ok else {"residual": mpmath.nstr(worst, 8)},
                details={"residual": float(worst)},
            )
        )
    return VerificationReport.combine("t_transform", checks, m=m, q_order=q_order)


# -----------------------------------------------------------------------------
# Eta products and characters
# -----------------------------------------------------------------------------
def _series_check(name: str, lhs: FormalSeries, rhs: FormalSeries) -> VerificationReport:
    diff = lhs.first_difference(rhs)
    discrepancy = None
    if diff is not None:
        exponent, left, right = diff
        discrepancy = {"q_exponent": str(exponent), "lhs": left, "rhs": right}
    return VerificationReport(name, diff is None, lhs.compared_terms(rhs), discrepancy)


def eta_identity_check(case: str, q_order: int = 60) -> VerificationReport:
    """
    Eta-product forms of the theta series for m = 2, 3, 4.

    m2: Phi_2^{(0)} = 2 eta^3
    m3: Phi_3^{(0)} = 4 eta(tau)^2 eta(4tau)^2 / eta(2tau), Phi_3^{(1)} = 2 eta(2tau)^5 / eta(4tau)^2
    m4: Phi_4^{(1)} = 4 eta(2tau)^3, Phi_4^{(0)}, Phi_4^{(2)} = A^3 -+ eta(tau/2)^3
        with A = eta(tau)^3 / (eta(tau/2) eta(2tau))
    """
    if case not in ETA_CASES:
        raise InvalidParameterError(f"eta identity case must be one of {list(ETA_CASES)}, got {case!r}")
    eta = {s: dedekind_eta(s, q_order) for s in (Fraction(1, 2), 1, 2, 4)}
    checks = []
    if case == "m2":
        checks.append(_series_check("phi_2_0", theta_series(2, 0, q_order), 2 * eta[1] ** 3))
    elif case == "m3":
        checks.append(
            _series_check("phi_3_0", theta_series(3, 0, q_order), 4 * (eta[1] ** 2 * eta[4] ** 2) / eta[2])
        )
        numerator = eta[2] ** 5
        denominator = eta[4] ** 2
        quotient = numerator / denominator
        checks.append(_series_check("phi_3_1_remainder", quotient * denominator, numerator))
        checks.append(_series_check("phi_3_1", theta_series(3, 1, q_order), 2 * quotient))
    else:
        cube = (eta[1] ** 3 / (eta[Fraction(1, 2)] * eta[2])) ** 3
        half = eta[Fraction(1, 2)] ** 3
        checks.append(_series_check("phi_4_1", theta_series(4, 1, q_order), 4 * eta[2] ** 3))
        checks.append(_series_check("phi_4_0", theta_series(4, 0, q_order), cube - half))
        checks.append(_series_check("phi_4_2", theta_series(4, 2, q_order), cube + half))
    report = VerificationReport.combine("eta_identity", checks, case=case, q_order=q_order)
    logger.info(f"[MODULAR] eta identities {case}: {[(c.name, c.passed) for c in checks]}")
    return report


def su2_character(level: int, lam: int, q_order: int = DEFAULT_ORDER) -> FormalSeries:
    """ch_lam^level = Phi_{level+2}^{(level-lam)} / (2 eta^3)."""
    if level < 0 or not 0 <= lam <= level:
        raise InvalidParameterError(f"need level >= 0 and 0 <= lambda <= level, got level={level}, lambda={lam}")
    theta = theta_series(level + 2, level - lam, q_order)
    return theta.exact_div_int(2) / dedekind_eta(1, q_order) ** 3


def zagier_identity_check(q_order: int = 50, sign: int = -1, window: int = 4) -> VerificationReport:
    """
    Phi~_3^{(1)} = 3 q^{1/12} sum_{n>=0} sign^n (-1; q^2)_{n+1}.

    The summands do not tend to zero, so the sum is read through averaged
    partial sums (T_n + T_{n+1})/2; each coefficient must settle over the
    last ``window`` values of n before the comparison is made.
    """
    if q_order < 1:
        raise InvalidParameterError(f"q_order must be >= 1, got {q_order}")
    scan = q_order // 2 + window + 1
    partial = [0] * q_order
    history: List[List[int]] = []
    previous: Optional[List[int]] = None
    for n in range(scan + 1):
        term = pochhammer(-1, 2, n + 1, q_order).dense(q_order)
        partial = [p + sign ** n * t for p, t in zip(partial, term)]
        if previous is not None:
            pair = [x + y for x, y in zip(previous, partial)]
            history.append([v // 2 for v in pair])
        previous = list(partial)
    recent = history[-window:]
    unstable = next((k for k in range(q_order) if len({row[k] for row in recent}) > 1), None)
    if unstable is not None:
        return VerificationReport(
            "zagier_identity",
            False,
            q_order,
            {"unstable_coefficient": unstable, "recent_values": [row[unstable] for row in recent]},
            details={"sign": sign, "window": window},
        )
    averaged = recent[-1]
    rhs = FormalSeries({1 + 12 * j: 3 * c for j, c in enumerate(averaged) if c}, 12, q_order)
    report = _series_check("zagier_identity", eichler_series(3, 1, q_order), rhs)
    report.details = {"sign": sign, "window": window, "scanned_terms": scan}
    return report
