from typing import Any, Dict, Sequence

import mpmath

from ..core.numeric import working_precision
from .base import RootBackend


class ComplexBackend(RootBackend):
    """Values are mpmath complex numbers at the context precision (plus guard bits)."""

    name = "complex"

    def zero(self) -> mpmath.mpc:
        return mpmath.mpc(0)

    def monomial(self, exponent: int) -> mpmath.mpc:
        return self.ctx.zeta(exponent)

    def from_folded(self, folded: Sequence[int]) -> mpmath.mpc:
        with working_precision(self.ctx.precision_bits):
            return mpmath.fsum(c * self.ctx.zeta_powers[j] for j, c in enumerate(folded) if c)

    def to_complex(self, value: mpmath.mpc) -> mpmath.mpc:
        return value

    def get_backend_info(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "type": "complex",
            "precision_bits": self.ctx.precision_bits,
            "N": self.ctx.N,
        }
