"""
The q-series K_m^{(a)} in one and several variables.

Every evaluation enumerates the leaves (c_1, ..., c_{m-1}) of the defining
sum from the top index down, pruning a branch as soon as its monomial
q-exponent reaches the truncation order (later indices only add nonnegative
exponents). Each leaf carries the product of its Gaussian binomials as a dense
integer polynomial truncated at the remaining budget.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .core.errors import InvalidParameterError, QLFError
from .core.numeric import PeriodicChar
from .core.qseries import BINOMIALS, BiSeries, FormalSeries, poly_mul_truncated
from .core.verification import VerificationReport

logger = logging.getLogger("qlf.identities")

DEFAULT_Q_ORDER = 100
DEFAULT_X_ORDER = 40
DEFAULT_DEGREE_CAP = 12


@dataclass(frozen=True)
class KSeriesSpec:
    """
    Parameters and truncation of K_m^{(a)}(x).

    Coefficients are kept for q-exponents below ``q_order`` and x-degrees
    below ``x_order``. Both must be at least 1: an order of 0 leaves no
    representable term, and the smallest truncation (1, 1) is the constant
    term 1.
    """

    m: int
    a: int
    q_order: int = DEFAULT_Q_ORDER
    x_order: int = DEFAULT_X_ORDER

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or self.m < 2:
            raise InvalidParameterError(f"m must be an integer >= 2, got {self.m!r}")
        if not isinstance(self.a, int) or not 0 <= self.a <= self.m - 2:
            raise InvalidParameterError(f"a must lie in [0, m-2] = [0, {self.m - 2}], got a={self.a!r}")
        if self.q_order < 1 or self.x_order < 1:
            raise InvalidParameterError(
                f"q_order and x_order must be >= 1, got q_order={self.q_order}, x_order={self.x_order}"
            )

    @property
    def offset(self) -> int:
        return self.m - 1 - self.a


@dataclass(frozen=True)
class MultiKSpec:
    """
    K_m^{(a)}(q^{e_1} x_1, ..., q^{e_{m-1}} x_{m-1}) with every x_i of degree <= degree_cap.

    Shifts below -1 are rejected: with e_i >= -1 each index still contributes a
    nonnegative q-exponent, so the truncated sum stays finite and complete.
    """

    m: int
    a: int
    q_order: int
    shifts: Tuple[int, ...] = ()
    degree_cap: int = DEFAULT_DEGREE_CAP

    def __post_init__(self) -> None:
        KSeriesSpec(self.m, self.a, self.q_order, 1)
        shifts = tuple(self.shifts) or (0,) * (self.m - 1)
        if len(shifts) != self.m - 1:
            raise InvalidParameterError(f"need {self.m - 1} substitution exponents, got {len(shifts)}")
        if min(shifts) < -1:
            raise InvalidParameterError(f"substitution exponents must be >= -1, got {shifts}")
        if self.degree_cap < 1:
            raise InvalidParameterError(f"degree_cap must be >= 1, got {self.degree_cap}")
        object.__setattr__(self, "shifts", shifts)


# -----------------------------------------------------------------------------
# Leaf enumeration
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class _Leaf:
    c: Tuple[int, ...]  # c_1, ..., c_{m-1}
    sign: int
    exponent: int
    poly: Tuple[int, ...]


def _leaves(
    m: int,
    a: int,
    q_order: int,
    shifts: Optional[Sequence[int]] = None,
    degree_cap: Optional[int] = None,
    total_cap: Optional[int] = None,
) -> Iterator[_Leaf]:
    shifts = tuple(shifts) if shifts else (0,) * (m - 1)
    cap = degree_cap if degree_cap is not None else q_order + 1
    c = [0] * m  # c[i] for i = 1..m-1

    def descend(i: int, exponent: int, degree: int, poly: List[int]) -> Iterator[_Leaf]:
        if i == 0:
            yield _Leaf(tuple(c[1:]), (-1) ** c[m - 1], exponent, tuple(poly))
            return
        upper = c[i + 1] + (1 if i == a else 0)
        linear = 1 if i > a else 0
        for value in range(min(upper, cap) + 1):
            step = value * value + linear * value + shifts[i - 1] * value
            if exponent + step >= q_order:
                break
            if total_cap is not None and degree + value >= total_cap:
                break
            budget = q_order - exponent - step
            c[i] = value
            product = poly_mul_truncated(poly, BINOMIALS.coefficients(upper, value), budget)
            yield from descend(i - 1, exponent + step, degree + value, product)
        c[i] = 0

    top = 0
    while top <= cap:
        exponent = top * (top + 1) // 2 + shifts[m - 2] * top
        if exponent >= q_order or (total_cap is not None and top >= total_cap):
            break
        c[m - 1] = top
        yield from descend(m - 2, exponent, top, [1])
        top += 1


def _add_shifted(target: List[int], poly: Sequence[int], offset: int, weight: int) -> None:
    for j, value in enumerate(poly):
        k = offset + j
        if k >= len(target):
            break
        target[k] += weight * value


# -----------------------------------------------------------------------------
# One variable
# -----------------------------------------------------------------------------
def k_series(spec: KSeriesSpec) -> BiSeries:
    """K_m^{(a)}(x) from its defining nested sum, truncated at (q_order, x_order)."""
    rows: Dict[int, List[int]] = {}
    leaves = 0
    for leaf in _leaves(spec.m, spec.a, spec.q_order, total_cap=spec.x_order):
        degree = sum(leaf.c)
        row = rows.setdefault(degree, [0] * spec.q_order)
        _add_shifted(row, leaf.poly, leaf.exponent, leaf.sign)
        leaves += 1
    logger.debug(f"[IDENTITY] K_{spec.m}^({spec.a}) summed over {leaves} leaves")
    return BiSeries.from_dense(rows, spec.x_order, spec.q_order)


def k_rhs(spec: KSeriesSpec) -> BiSeries:
    """sum_{n>=0} chi(n) q^{(n^2 - s^2)/4m} x^{(n - s)/2} with s = m-1-a."""
    char = PeriodicChar(spec.m, spec.a)
    s = spec.offset
    four_m = 4 * spec.m
    terms: Dict[int, Dict[int, int]] = {}
    for n in char.support(10 ** 9):
        exponent, r1 = divmod(n * n - s * s, four_m)
        degree, r2 = divmod(n - s, 2)
        if r1 or r2:
            raise QLFError(f"non-integral exponent at n={n} for m={spec.m}, a={spec.a}")
        if exponent >= spec.q_order or degree >= spec.x_order:
            break
        terms.setdefault(degree, {})[exponent] = char(n)
    return BiSeries(
        {d: FormalSeries(c, 1, spec.q_order) for d, c in terms.items()},
        spec.x_order,
        spec.q_order,
    )


def compare_bi_series(name: str, lhs: BiSeries, rhs: BiSeries) -> VerificationReport:
    diff = lhs.first_difference(rhs)
    discrepancy = None
    if diff is not None:
        degree, exponent, left, right = diff
        discrepancy = {"x_degree": degree, "q_exponent": str(exponent), "lhs": left, "rhs": right}
    return VerificationReport(name, diff is None, lhs.compared_terms(rhs), discrepancy)


def verify_main_identity(
    spec: KSeriesSpec,
    perturb: Optional[Tuple[int, int, int]] = None,
) -> VerificationReport:
    """
    Coefficientwise comparison of the nested sum with the chi-sum.

    Args:
        spec: Series and truncation parameters
        perturb: Optional (x_degree, q_exponent, delta) added to the nested
            side first; a negative control

    Returns:
        Report whose discrepancy locates the first mismatching coefficient
    """
    lhs = k_series(spec)
    if perturb is not None:
        degree, exponent, delta = perturb
        bump = BiSeries({degree: FormalSeries({exponent: delta}, 1, spec.q_order)}, spec.x_order, spec.q_order)
        lhs = lhs + bump
    report = compare_bi_series("main_identity", lhs, k_rhs(spec))
    report.details = {"m": spec.m, "a": spec.a, "q_order": spec.q_order, "x_order": spec.x_order}
    logger.info(f"[IDENTITY] main identity m={spec.m} a={spec.a}: {'ok' if report.passed else report.discrepancy}")
    return report


def verify_difference_equation(spec: KSeriesSpec) -> VerificationReport:
    """K(x) = 1 - q^{a+1} x^{a+1} + x^m q^{2m-1-a} K(q^2 x)."""
    m, a = spec.m, spec.a
    k = k_series(spec)
    rhs = (
        BiSeries.one(spec.x_order, spec.q_order)
        + BiSeries.one(spec.x_order, spec.q_order).monomial_times(a + 1, a + 1, sign=-1)
        + k.substitute_x(2).monomial_times(m, 2 * m - 1 - a)
    )
    report = compare_bi_series("difference_equation", k, rhs)
    report.details = {"m": m, "a": a, "q_order": spec.q_order, "x_order": spec.x_order}
    return report


def phi_weighted_series(m: int, a: int, q_order: int = DEFAULT_Q_ORDER) -> FormalSeries:
    """
    4 q^{s^2/4m} sum_c (c_1 + ... + c_{m-1} + s/2) (-1)^{c_{m-1}} q^{...} prod [..],
    the derivative at x = 1 of x^{s/2} K(x) rewritten as a weighted sum.
    """
    spec = KSeriesSpec(m, a, q_order, 1)
    s = spec.offset
    dense = [0] * q_order
    for leaf in _leaves(m, a, q_order):
        _add_shifted(dense, leaf.poly, leaf.exponent, 2 * (2 * sum(leaf.c) + s) * leaf.sign)
    # q^j * q^{s^2/4m} = q^{(4mj + s^2)/4m}
    four_m = 4 * m
    return FormalSeries(
        {four_m * j + s * s: c for j, c in enumerate(dense) if c},
        four_m,
        Fraction(q_order),
    )


# -----------------------------------------------------------------------------
# Several variables
# -----------------------------------------------------------------------------
MultiKey = Tuple[Tuple[int, ...], int]


@dataclass
class MultiSeries:
    """Sparse map (x multidegree, q exponent) -> integer, complete inside its box."""

    terms: Dict[MultiKey, int] = field(default_factory=dict)

    @classmethod
    def constant(cls, nvars: int, value: int = 1) -> "MultiSeries":
        return cls({((0,) * nvars, 0): value})

    def times(self, q_power: int, variables: Sequence[int] = (), sign: int = 1) -> "MultiSeries":
        """Multiply by sign * q^q_power * prod x_i over the 1-based ``variables``."""
        out: Dict[MultiKey, int] = {}
        for (degrees, k), c in self.terms.items():
            moved = list(degrees)
            for i in variables:
                moved[i - 1] += 1
            out[(tuple(moved), k + q_power)] = sign * c
        return MultiSeries(out)

    def __add__(self, other: "MultiSeries") -> "MultiSeries":
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return MultiSeries({key: c for key, c in out.items() if c})

    def __neg__(self) -> "MultiSeries":
        return MultiSeries({key: -c for key, c in self.terms.items()})

    def __sub__(self, other: "MultiSeries") -> "MultiSeries":
        return self + (-other)

    def restricted(self, degree_cap: int, q_order: int) -> Dict[MultiKey, int]:
        return {
            key: c
            for key, c in self.terms.items()
            if c and key[1] < q_order and max(key[0], default=0) <= degree_cap
        }

    def collapse(self) -> Dict[int, Dict[int, int]]:
        """Set every x_i = x."""
        out: Dict[int, Dict[int, int]] = {}
        for (degrees, k), c in self.terms.items():
            row = out.setdefault(sum(degrees), {})
            row[k] = row.get(k, 0) + c
        return out


def k_multi(spec: MultiKSpec) -> MultiSeries:
    """Multivariate K with each x_i replaced by q^{e_i} x_i."""
    terms: Dict[MultiKey, int] = {}
    for leaf in _leaves(spec.m, spec.a, spec.q_order, spec.shifts, spec.degree_cap):
        for j, value in enumerate(leaf.poly):
            if value:
                key = (leaf.c, leaf.exponent + j)
                terms[key] = terms.get(key, 0) + leaf.sign * value
    return MultiSeries(terms)


def _compare_multi(name: str, lhs: MultiSeries, rhs: MultiSeries, degree_cap: int, q_order: int) -> VerificationReport:
    left = lhs.restricted(degree_cap, q_order)
    right = rhs.restricted(degree_cap, q_order)
    for key in sorted(set(left) | set(right), key=lambda kv: (kv[1], kv[0])):
        if left.get(key, 0) != right.get(key, 0):
            degrees, exponent = key
            return VerificationReport(
                name,
                False,
                len(left),
                {"x_degrees": list(degrees), "q_exponent": exponent, "lhs": left.get(key, 0), "rhs": right.get(key, 0)},
            )
    return VerificationReport(name, True, len(set(left) | set(right)))


class _Recurrences:
    """Builds both sides of each multivariate recurrence for fixed (m, a)."""

    def __init__(self, m: int, a: int, q_order: int, degree_cap: int):
        self.m, self.a, self.q_order, self.cap = m, a, q_order, degree_cap
        self.n = m - 1
        self._cache: Dict[Tuple[int, Tuple[int, ...]], MultiSeries] = {}

    def K(self, a: int, shifts: Sequence[int]) -> MultiSeries:
        key = (a, tuple(shifts))
        if key not in self._cache:
            self._cache[key] = k_multi(MultiKSpec(self.m, a, self.q_order, tuple(shifts), self.cap))
        return self._cache[key]

    def shifts(self, rule) -> Tuple[int, ...]:
        return tuple(rule(i) for i in range(1, self.n + 1))

    def one(self) -> MultiSeries:
        return MultiSeries.constant(self.n)

    def check(self, name: str, lhs: MultiSeries, rhs: MultiSeries) -> VerificationReport:
        return _compare_multi(name, lhs, rhs, self.cap, self.q_order)

    # K^{(a)}(x) = K^{(0)}(x_1/q..x_{a-1}/q, x_a, ..) + q x_a K^{(a-1)}(.., q x_a, ..)
    def maru_1(self) -> VerificationReport:
        a = self.a
        lhs = self.K(a, self.shifts(lambda i: 0))
        rhs = self.K(0, self.shifts(lambda i: -1 if i <= a - 1 else 0)) + self.K(
            a - 1, self.shifts(lambda i: 1 if i == a else 0)
        ).times(1, [a])
        return self.check("maru_1", lhs, rhs)

    # K^{(a)}(x) = K^{(0)}(x_1/q..x_a/q, x_{a+1}, ..) + q x_a K^{(a-1)}(.., q x_{a+1}, ..)
    def maru_2(self) -> VerificationReport:
        a = self.a
        lhs = self.K(a, self.shifts(lambda i: 0))
        rhs = self.K(0, self.shifts(lambda i: -1 if i <= a else 0)) + self.K(
            a - 1, self.shifts(lambda i: 1 if i == a + 1 else 0)
        ).times(1, [a])
        return self.check("maru_2", lhs, rhs)

    # K^{(0)}(x) = 1 - q x_{m-1} K^{(m-2)}(q x)
    def maru_3(self) -> VerificationReport:
        lhs = self.K(0, self.shifts(lambda i: 0))
        rhs = self.one() - self.K(self.m - 2, self.shifts(lambda i: 1)).times(1, [self.n])
        return self.check("maru_3", lhs, rhs)

    def a_and_0_1(self) -> VerificationReport:
        a = self.a
        lhs = self.K(a, self.shifts(lambda i: 1 if i >= a + 1 else 0))
        rhs = MultiSeries()
        for j in range(a + 1):
            pivot = a - j
            term = self.K(0, self.shifts(lambda i: -1 if i < pivot else (0 if i == pivot else 1)))
            rhs = rhs + term.times(j, range(a - j + 1, a + 1))
        return self.check("a_and_0_1", lhs, rhs)

    def a_and_0_2(self) -> VerificationReport:
        a = self.a
        lhs = self.K(a, self.shifts(lambda i: 1 if i >= a + 2 else 0))
        rhs = MultiSeries()
        for j in range(a + 1):
            pivot = a - j + 1
            term = self.K(0, self.shifts(lambda i: -1 if i < pivot else (0 if i == pivot else 1)))
            rhs = rhs + term.times(j, range(a - j + 1, a + 1))
        return self.check("a_and_0_2", lhs, rhs)

    def comp_1(self) -> VerificationReport:
        n = self.n
        lhs = self.K(0, self.shifts(lambda i: -1 if i <= n - 1 else 0))
        for j in range(0, self.m - 2):
            pivot = n - 1 - j
            term = self.K(0, self.shifts(lambda i: -1 if i < pivot else (0 if i == pivot else 1)))
            lhs = lhs + term.times(j + 1, [n, *range(n - j, n)])
        rhs = self.one() - self.K(0, self.shifts(lambda i: 1)).times(n, range(1, n + 1))
        return self.check("comp_1", lhs, rhs)

    def comp_2(self) -> VerificationReport:
        n = self.n
        total = MultiSeries()
        for j in range(self.m - 1):
            pivot = n - j
            term = self.K(0, self.shifts(lambda i: -1 if i < pivot else (0 if i == pivot else 1)))
            total = total + term.times(j, range(n - j, n))
        lhs = total.times(0, [n])
        rhs = self.one() - self.K(0, self.shifts(lambda i: -1))
        return self.check("comp_2", lhs, rhs)


def verify_multivariate_recurrences(
    m: int,
    a: int,
    q_order: int = 40,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> VerificationReport:
    """
    Check the multivariate q-difference recurrences of K_m^{(a)}(x_1, ..., x_{m-1}).

    Recurrences that lower a (maru_1, maru_2 and the two iterated forms)
    need a >= 1; maru_3, comp_1 and comp_2 involve K^{(0)} and K^{(m-2)} and
    are checked for every a. Comparison is restricted to multidegrees with
    every x_i of degree <= degree_cap, where all truncated terms are complete.
    """
    if m not in (3, 4, 5):
        raise InvalidParameterError(f"multivariate recurrences need m in {{3, 4, 5}}, got m={m}")
    KSeriesSpec(m, a, q_order, 1)
    rec = _Recurrences(m, a, q_order, degree_cap)
    checks = [rec.maru_3(), rec.comp_1(), rec.comp_2()]
    if a >= 1:
        checks = [rec.maru_1(), rec.maru_2(), *checks, rec.a_and_0_1(), rec.a_and_0_2()]
    report = VerificationReport.combine(
        "multivariate_recurrences", checks, m=m, a=a, q_order=q_order, degree_cap=degree_cap
    )
    logger.info(f"[IDENTITY] recurrences m={m} a={a}: {[(c.name, c.passed) for c in checks]}")
    return report


def multivariate_collapse_check(
    m: int,
    a: int,
    q_order: int = 40,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> VerificationReport:
    """Setting x_i = x in the multivariate series reproduces k_series up to x-degree degree_cap."""
    multi = k_multi(MultiKSpec(m, a, q_order, (), degree_cap)).collapse()
    collapsed = BiSeries(
        {d: FormalSeries(row, 1, q_order) for d, row in multi.items()},
        degree_cap + 1,
        q_order,
    )
    report = compare_bi_series("multivariate_collapse", collapsed, k_series(KSeriesSpec(m, a, q_order, degree_cap + 1)))
    report.details = {"m": m, "a": a, "q_order": q_order, "degree_cap": degree_cap}
    return report
