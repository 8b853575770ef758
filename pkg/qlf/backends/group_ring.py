from dataclasses import dataclass
from typing import Any, Dict, Sequence, Tuple, Union

import mpmath

from ..core.errors import InvalidParameterError
from ..core.numeric import working_precision
from .base import RootBackend


@dataclass(frozen=True)
class GroupRingElement:
    """sum_j coefficients[j] x^j in Z[x]/(x^L - 1), L = len(coefficients)."""

    coefficients: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise InvalidParameterError("group ring element needs a positive modulus")

    @classmethod
    def zero(cls, modulus: int) -> "GroupRingElement":
        return cls((0,) * modulus)

    @classmethod
    def monomial(cls, modulus: int, exponent: int, coefficient: int = 1) -> "GroupRingElement":
        values = [0] * modulus
        values[exponent % modulus] = coefficient
        return cls(tuple(values))

    @property
    def modulus(self) -> int:
        return len(self.coefficients)

    def _check(self, other: "GroupRingElement") -> None:
        if other.modulus != self.modulus:
            raise InvalidParameterError(f"group ring moduli differ: {self.modulus} vs {other.modulus}")

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._check(other)
        return GroupRingElement(tuple(x + y for x, y in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(tuple(-x for x in self.coefficients))

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __mul__(self, other: Union["GroupRingElement", int]) -> "GroupRingElement":
        if isinstance(other, int):
            return GroupRingElement(tuple(other * x for x in self.coefficients))
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        self._check(other)
        L = self.modulus
        out = [0] * L
        right = [(j, y) for j, y in enumerate(other.coefficients) if y]
        for i, x in enumerate(self.coefficients):
            if not x:
                continue
            for j, y in right:
                out[(i + j) % L] += x * y
        return GroupRingElement(tuple(out))

    __rmul__ = __mul__

    def evaluate(self, zeta_powers: Sequence[mpmath.mpc]) -> mpmath.mpc:
        """Substitute x -> zeta; call inside a precision context."""
        return mpmath.fsum(c * zeta_powers[j] for j, c in enumerate(self.coefficients) if c)


class GroupRingBackend(RootBackend):
    """Exact backend: values are GroupRingElement modulo x^(2N) - 1."""

    name = "exact"

    def zero(self) -> GroupRingElement:
        return GroupRingElement.zero(self.ctx.modulus)

    def monomial(self, exponent: int) -> GroupRingElement:
        return GroupRingElement.monomial(self.ctx.modulus, exponent)

    def from_folded(self, folded: Sequence[int]) -> GroupRingElement:
        return GroupRingElement(tuple(folded))

    def to_complex(self, value: GroupRingElement) -> mpmath.mpc:
        with working_precision(self.ctx.precision_bits):
            return value.evaluate(self.ctx.zeta_powers)

    def get_backend_info(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "type": "exact",
            "carrier": f"Z[x]/(x^{self.ctx.modulus} - 1)",
            "N": self.ctx.N,
        }
