"""
Truncated formal power series in a fractional power of q.

A ``FormalSeries`` stores exact integer coefficients of q^(k/D) for k/D below
its truncation order. Binary operations rescale both operands to a common
denominator and keep the smaller order. Gaussian binomials come from a
memoized Pascal triangle, so they stay valid when later evaluated at roots of
unity where (q)_n vanishes.
"""

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import mpmath

from .errors import InvalidParameterError, SeriesDivisionError

DEFAULT_ORDER = 100

Number = Union[int, Fraction]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _count_below(bound: Fraction) -> int:
    """Number of integers n >= 0 with n < bound."""
    return max(0, ceil(bound))


# -----------------------------------------------------------------------------
# Dense integer polynomial helpers
# -----------------------------------------------------------------------------
def poly_mul_truncated(p: Sequence[int], b: Sequence[int], limit: int) -> List[int]:
    """Product of two coefficient lists, keeping degrees < limit."""
    if limit <= 0 or not p or not b:
        return []
    out = [0] * min(limit, len(p) + len(b) - 1)
    for i, x in enumerate(p):
        if i >= limit:
            break
        if x == 0:
            continue
        for j, y in enumerate(b[: limit - i]):
            if y:
                out[i + j] += x * y
    return out


@dataclass(frozen=True, eq=False)
class FormalSeries:
    """sum_k coeffs[k] q^(k/denom), complete for exponents below ``order``."""

    coeffs: Dict[int, int]
    denom: int = 1
    order: Fraction = Fraction(DEFAULT_ORDER)

    def __post_init__(self) -> None:
        if not isinstance(self.denom, int) or self.denom < 1:
            raise InvalidParameterError(f"series denominator must be a positive integer, got {self.denom!r}")
        order = Fraction(self.order)
        bound = order * self.denom
        cleaned = {int(k): int(c) for k, c in self.coeffs.items() if c and k < bound}
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", cleaned)

    # -- construction ---------------------------------------------------------
    @classmethod
    def zero(cls, order: Number = DEFAULT_ORDER, denom: int = 1) -> "FormalSeries":
        return cls({}, denom, Fraction(order))

    @classmethod
    def one(cls, order: Number = DEFAULT_ORDER) -> "FormalSeries":
        return cls({0: 1}, 1, Fraction(order))

    @classmethod
    def monomial(cls, coefficient: int, exponent: Number, order: Number = DEFAULT_ORDER) -> "FormalSeries":
        exponent = Fraction(exponent)
        return cls({exponent.numerator: coefficient}, exponent.denominator, Fraction(order))

    @classmethod
    def from_coefficients(
        cls,
        coefficients: Iterable[int],
        order: Number = DEFAULT_ORDER,
        denom: int = 1,
        offset: int = 0,
    ) -> "FormalSeries":
        """coefficients[j] becomes the coefficient of q^((offset + j)/denom)."""
        return cls({offset + j: c for j, c in enumerate(coefficients) if c}, denom, Fraction(order))

    # -- inspection -----------------------------------------------------------
    def items(self) -> List[Tuple[Fraction, int]]:
        return [(Fraction(k, self.denom), self.coeffs[k]) for k in sorted(self.coeffs)]

    def coefficient(self, exponent: Number) -> int:
        exponent = Fraction(exponent)
        k = exponent * self.denom
        if k.denominator != 1:
            return 0
        return self.coeffs.get(int(k), 0)

    def valuation(self) -> Optional[Fraction]:
        if not self.coeffs:
            return None
        return Fraction(min(self.coeffs), self.denom)

    def is_zero(self) -> bool:
        return not self.coeffs

    def dense(self, length: Optional[int] = None) -> List[int]:
        """Coefficients of q^0, q^(1/D), ... as a list (nonnegative exponents only)."""
        if length is None:
            length = _count_below(self.order * self.denom)
        out = [0] * length
        for k, c in self.coeffs.items():
            if 0 <= k < length:
                out[k] = c
        return out

    def to_rows(self) -> List[Tuple[int, int, int]]:
        """(exponent numerator, denominator, coefficient) triples in exponent order."""
        return [(k, self.denom, self.coeffs[k]) for k in sorted(self.coeffs)]

    # -- exponent grid --------------------------------------------------------
    def rescale(self, denom: int) -> "FormalSeries":
        if denom % self.denom:
            raise InvalidParameterError(f"cannot rescale denominator {self.denom} to {denom}")
        factor = denom // self.denom
        return FormalSeries({k * factor: c for k, c in self.coeffs.items()}, denom, self.order)

    def normalized(self) -> "FormalSeries":
        """Same series on the smallest exponent grid."""
        g = self.denom
        for k in self.coeffs:
            g = gcd(g, k)
        if g <= 1:
            return self
        return FormalSeries({k // g: c for k, c in self.coeffs.items()}, self.denom // g, self.order)

    def _aligned(self, other: "FormalSeries") -> Tuple[Dict[int, int], Dict[int, int], int]:
        d = _lcm(self.denom, other.denom)
        return self.rescale(d).coeffs, other.rescale(d).coeffs, d

    def truncate(self, order: Number) -> "FormalSeries":
        return FormalSeries(self.coeffs, self.denom, min(self.order, Fraction(order)))

    # -- ring operations ------------------------------------------------------
    def _coerce(self, other: Union["FormalSeries", int]) -> "FormalSeries":
        if isinstance(other, FormalSeries):
            return other
        if isinstance(other, int):
            return FormalSeries({0: other}, 1, self.order)
        return NotImplemented

    def __add__(self, other: Union["FormalSeries", int]) -> "FormalSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, d = self._aligned(other)
        out = dict(a)
        for k, c in b.items():
            out[k] = out.get(k, 0) + c
        return FormalSeries(out, d, min(self.order, other.order))

    __radd__ = __add__

    def __neg__(self) -> "FormalSeries":
        return FormalSeries({k: -c for k, c in self.coeffs.items()}, self.denom, self.order)

    def __sub__(self, other: Union["FormalSeries", int]) -> "FormalSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: int) -> "FormalSeries":
        return (-self) + other

    def scale(self, factor: int) -> "FormalSeries":
        return FormalSeries({k: factor * c for k, c in self.coeffs.items()}, self.denom, self.order)

    def __mul__(self, other: Union["FormalSeries", int]) -> "FormalSeries":
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, FormalSeries):
            return NotImplemented
        a, b, d = self._aligned(other)
        order = min(self.order, other.order)
        bound = order * d
        out: Dict[int, int] = {}
        b_items = sorted(b.items())
        for ka, ca in a.items():
            for kb, cb in b_items:
                k = ka + kb
                if k >= bound:
                    break
                out[k] = out.get(k, 0) + ca * cb
        return FormalSeries(out, d, order)

    def __rmul__(self, other: int) -> "FormalSeries":
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "FormalSeries":
        if not isinstance(n, int) or n < 0:
            raise InvalidParameterError(f"series power must be a nonnegative integer, got {n!r}")
        result = FormalSeries.one(self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, exponent: Number) -> "FormalSeries":
        """Multiply by q^exponent; the order moves with the exponents."""
        exponent = Fraction(exponent)
        d = _lcm(self.denom, exponent.denominator)
        step = int(exponent * d)
        moved = self.rescale(d)
        return FormalSeries({k + step: c for k, c in moved.coeffs.items()}, d, self.order + exponent)

    def substitute(self, scale: Number) -> "FormalSeries":
        """Replace q by q^scale for a positive rational scale."""
        scale = Fraction(scale)
        if scale <= 0:
            raise InvalidParameterError(f"substitution scale must be positive, got {scale}")
        return FormalSeries(
            {k * scale.numerator: c for k, c in self.coeffs.items()},
            self.denom * scale.denominator,
            self.order * scale,
        )

    def exact_div_int(self, divisor: int) -> "FormalSeries":
        if divisor == 0:
            raise SeriesDivisionError("division of a series by the integer 0")
        bad = [k for k, c in self.coeffs.items() if c % divisor]
        if bad:
            raise SeriesDivisionError(
                f"coefficient of q^{Fraction(min(bad), self.denom)} is not divisible by {divisor}"
            )
        return FormalSeries({k: c // divisor for k, c in self.coeffs.items()}, self.denom, self.order)

    def __truediv__(self, other: Union["FormalSeries", int]) -> "FormalSeries":
        if isinstance(other, int):
            return self.exact_div_int(other)
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return divide(self, other)

    # -- comparison and evaluation -------------------------------------------
    def first_difference(self, other: "FormalSeries") -> Optional[Tuple[Fraction, int, int]]:
        """First exponent below the common order where the coefficients differ."""
        a, b, d = self._aligned(other)
        bound = min(self.order, other.order) * d
        for k in sorted(set(a) | set(b)):
            if k >= bound:
                break
            if a.get(k, 0) != b.get(k, 0):
                return Fraction(k, d), a.get(k, 0), b.get(k, 0)
        return None

    def compared_terms(self, other: "FormalSeries") -> int:
        d = _lcm(self.denom, other.denom)
        return _count_below(min(self.order, other.order) * d)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.first_difference(other) is None

    __hash__ = None  # type: ignore[assignment]

    def evaluate(self, tau) -> mpmath.mpc:
        """Sum of the stored terms at q = exp(2 pi i tau); call inside a precision context."""
        two_pi_i_tau = 2j * mpmath.pi * mpmath.mpc(tau)
        return mpmath.fsum(
            c * mpmath.exp(two_pi_i_tau * mpmath.mpf(k) / self.denom) for k, c in self.coeffs.items()
        )

    def __repr__(self) -> str:
        shown = ", ".join(f"{c}*q^{e}" for e, c in self.items()[:8])
        return f"FormalSeries([{shown}{', ...' if len(self.coeffs) > 8 else ''}], order={self.order})"


def divide(numerator: FormalSeries, denominator: FormalSeries) -> FormalSeries:
    """
    Exact quotient of two series.

    The denominator is written as q^e * U with U(0) = +-1; anything else is
    rejected since the quotient would leave the integers.

    Raises:
        SeriesDivisionError: If the denominator is zero or has a non-unit leading coefficient
    """
    a, b, d = numerator._aligned(denominator)
    if not b:
        raise SeriesDivisionError("division by the zero series")
    kb = min(b)
    lead = b[kb]
    if lead not in (1, -1):
        raise SeriesDivisionError(
            f"leading coefficient {lead} at q^{Fraction(kb, d)} is not a unit"
        )
    eb = Fraction(kb, d)
    if not a:
        return FormalSeries.zero(numerator.order - eb, d)
    ka = min(a)
    va = Fraction(ka, d)
    order = min(numerator.order, va + denominator.order - eb) - eb
    length = _count_below(order * d - ka + kb)
    tail = sorted((k - kb, c) for k, c in b.items() if k != kb)
    quotient = [0] * length
    for n in range(length):
        acc = a.get(ka + n, 0)
        for step, c in tail:
            if step > n:
                break
            acc -= c * quotient[n - step]
        quotient[n] = lead * acc
    return FormalSeries.from_coefficients(quotient, order, d, offset=ka - kb)


# -----------------------------------------------------------------------------
# Series in two variables
# -----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class BiSeries:
    """sum_d terms[d] x^d with q-series coefficients, complete for x-degree < x_order."""

    terms: Dict[int, FormalSeries]
    x_order: int
    q_order: Fraction = Fraction(DEFAULT_ORDER)

    def __post_init__(self) -> None:
        object.__setattr__(self, "q_order", Fraction(self.q_order))
        kept = {
            d: s.truncate(self.q_order)
            for d, s in self.terms.items()
            if 0 <= d < self.x_order and not s.is_zero()
        }
        object.__setattr__(self, "terms", {d: s for d, s in kept.items() if not s.is_zero()})

    @classmethod
    def from_dense(cls, rows: Dict[int, Sequence[int]], x_order: int, q_order: int, denom: int = 1) -> "BiSeries":
        return cls(
            {d: FormalSeries.from_coefficients(c, q_order, denom) for d, c in rows.items()},
            x_order,
            q_order,
        )

    @classmethod
    def one(cls, x_order: int, q_order: Number) -> "BiSeries":
        return cls({0: FormalSeries.one(q_order)}, x_order, q_order)

    def coefficient(self, degree: int) -> FormalSeries:
        return self.terms.get(degree, FormalSeries.zero(self.q_order))

    def monomial_times(self, x_degree: int, q_exponent: Number, sign: int = 1) -> "BiSeries":
        """Multiply by sign * x^x_degree * q^q_exponent."""
        return BiSeries(
            {d + x_degree: s.shift(q_exponent).scale(sign).truncate(self.q_order) for d, s in self.terms.items()},
            self.x_order,
            self.q_order,
        )

    def substitute_x(self, q_power: int) -> "BiSeries":
        """Replace x by q^q_power * x."""
        return BiSeries(
            {d: s.shift(q_power * d).truncate(self.q_order) for d, s in self.terms.items()},
            self.x_order,
            self.q_order,
        )

    def at_x_one(self) -> FormalSeries:
        total = FormalSeries.zero(self.q_order)
        for s in self.terms.values():
            total = total + s
        return total

    def __add__(self, other: "BiSeries") -> "BiSeries":
        terms = dict(self.terms)
        for d, s in other.terms.items():
            terms[d] = terms[d] + s if d in terms else s
        return BiSeries(terms, min(self.x_order, other.x_order), min(self.q_order, other.q_order))

    def __neg__(self) -> "BiSeries":
        return BiSeries({d: -s for d, s in self.terms.items()}, self.x_order, self.q_order)

    def __sub__(self, other: "BiSeries") -> "BiSeries":
        return self + (-other)

    def first_difference(self, other: "BiSeries") -> Optional[Tuple[int, Fraction, int, int]]:
        x_order = min(self.x_order, other.x_order)
        q_order = min(self.q_order, other.q_order)
        for d in range(x_order):
            diff = self.coefficient(d).truncate(q_order).first_difference(other.coefficient(d).truncate(q_order))
            if diff is not None:
                return (d, *diff)
        return None

    def compared_terms(self, other: "BiSeries") -> int:
        x_order = min(self.x_order, other.x_order)
        return x_order * _count_below(min(self.q_order, other.q_order))

    def to_rows(self) -> List[Tuple[int, int, int, int]]:
        """(x_degree, exponent numerator, denominator, coefficient) rows."""
        return [(d, k, den, c) for d in sorted(self.terms) for k, den, c in self.terms[d].to_rows()]


# -----------------------------------------------------------------------------
# Gaussian binomials
# -----------------------------------------------------------------------------
class QBinomialTable:
    """
    Memoized triangle of Gaussian binomial polynomials.

    Row n is built from row n-1 by [n, k] = q^k [n-1, k] + [n-1, k-1].
    Reads are lock-free; growth is serialized.
    """

    def __init__(self) -> None:
        self._rows: List[List[Tuple[int, ...]]] = [[(1,)]]
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._rows)

    def coefficients(self, n: int, k: int) -> Tuple[int, ...]:
        """Coefficient tuple of [n, k]; empty when the binomial vanishes."""
        if n < 0 or k < 0 or k > n:
            return ()
        if n >= len(self._rows):
            self._grow(n)
        return self._rows[n][k]

    def _grow(self, n: int) -> None:
        with self._lock:
            while len(self._rows) <= n:
                size = len(self._rows)
                prev = self._rows[-1]
                row = [(1,)]
                for k in range(1, size):
                    row.append(self._pascal(prev[k], prev[k - 1], k))
                row.append((1,))
                self._rows.append(row)

    @staticmethod
    def _pascal(upper: Tuple[int, ...], lower: Tuple[int, ...], k: int) -> Tuple[int, ...]:
        out = [0] * max(len(upper) + k, len(lower))
        for i, c in enumerate(upper):
            out[i + k] += c
        for i, c in enumerate(lower):
            out[i] += c
        return tuple(out)


BINOMIALS = QBinomialTable()


def gauss_binomial(n: int, k: int, order: Optional[Number] = None) -> FormalSeries:
    """
    Gaussian binomial [n choose k] as a polynomial series in q.

    Returns the zero series unless n >= k >= 0. The default order is large
    enough to hold the whole polynomial.
    """
    coefficients = BINOMIALS.coefficients(n, k)
    if order is None:
        order = max(DEFAULT_ORDER, len(coefficients))
    return FormalSeries.from_coefficients(coefficients, order)


def pochhammer(
    a_sign: int,
    base_power: int,
    n: int,
    order: Number = DEFAULT_ORDER,
    offset: int = 0,
) -> FormalSeries:
    """
    prod_{k=0}^{n-1} (1 - a_sign * q^(offset + base_power*k)).

    ``pochhammer(-1, 2, n)`` is (-1; q^2)_n and ``pochhammer(1, 1, n, offset=1)``
    is (q; q)_n.
    """
    if a_sign not in (1, -1):
        raise InvalidParameterError(f"a_sign must be +1 or -1, got {a_sign}")
    if base_power < 1 or n < 0 or offset < 0:
        raise InvalidParameterError(
            f"pochhammer needs base_power >= 1, n >= 0, offset >= 0; got {base_power}, {n}, {offset}"
        )
    limit = _count_below(Fraction(order))
    product = [1] if limit else []
    for k in range(n):
        e = offset + base_power * k
        factor = [0] * (e + 1)
        factor[0] += 1
        factor[e] -= a_sign
        product = poly_mul_truncated(product, factor, limit)
    return FormalSeries.from_coefficients(product, order)


def dedekind_eta(scale: Number, order: Number = DEFAULT_ORDER) -> FormalSeries:
    """
    eta(scale * tau) = q^(scale/24) prod_{n>=1} (1 - q^(scale*n)), truncated at ``order``.
    """
    s = Fraction(scale)
    if s <= 0:
        raise InvalidParameterError(f"eta scale must be a positive rational, got {s}")
    order = Fraction(order)
    p, r = s.numerator, s.denominator
    # powers of x = q^s needed: s/24 + s*n < order
    length = _count_below((order - s / 24) / s)
    product = [1] if length else []
    for n in range(1, length):
        factor = [0] * (n + 1)
        factor[0] = 1
        factor[n] = -1
        product = poly_mul_truncated(product, factor, length)
    denom = 24 * r
    return FormalSeries({p + 24 * p * n: c for n, c in enumerate(product) if c}, denom, order).normalized()
