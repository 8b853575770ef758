from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import mpmath

from ..core.errors import InvalidParameterError
from ..core.numeric import DEFAULT_PRECISION_BITS, root_of_unity, tolerance, validate_precision, working_precision
from ..core.qseries import BINOMIALS


@dataclass(frozen=True)
class RootContext:
    """
    Powers of zeta = exp(i*pi/N), a primitive 2N-th root of unity.

    omega = zeta^2 = exp(2*pi*i/N). Every exponent is stored on the zeta grid,
    so half-integer powers of omega become integer powers of zeta.
    """

    N: int
    precision_bits: int
    zeta_powers: Tuple[mpmath.mpc, ...]
    exact_backend_enabled: bool = False

    @classmethod
    def build(
        cls,
        N: int,
        precision_bits: int = DEFAULT_PRECISION_BITS,
        exact_backend_enabled: bool = False,
    ) -> "RootContext":
        if not isinstance(N, int) or N < 1:
            raise InvalidParameterError(f"N must be a positive integer, got {N!r}")
        validate_precision(precision_bits)
        with working_precision(precision_bits):
            powers = tuple(root_of_unity(j, N) for j in range(2 * N))
        return cls(N, precision_bits, powers, exact_backend_enabled)

    @property
    def modulus(self) -> int:
        return 2 * self.N

    def zeta(self, exponent: int) -> mpmath.mpc:
        return self.zeta_powers[exponent % self.modulus]

    def omega(self, exponent: int) -> mpmath.mpc:
        return self.zeta(2 * exponent)

    def integrity_residual(self) -> mpmath.mpf:
        """Largest deviation of |zeta^j| from 1 and of zeta^j * zeta from zeta^(j+1)."""
        with working_precision(self.precision_bits):
            worst = mpmath.mpf(0)
            step = self.zeta_powers[1 % self.modulus]
            for j, z in enumerate(self.zeta_powers):
                worst = max(worst, abs(abs(z) - 1), abs(z * step - self.zeta(j + 1)))
            return worst

    def check_integrity(self) -> bool:
        return self.integrity_residual() < tolerance(self.precision_bits, 8)


class RootBackend(ABC):
    """
    Abstract base class for arithmetic at q = omega.

    Values support ``+`` and ``*`` among themselves; the nested sums of the
    invariants module are written once against this interface.
    """

    name: str = ""

    def __init__(self, ctx: RootContext):
        self.ctx = ctx
        self._binomials: Dict[Tuple[int, int], Any] = {}

    @abstractmethod
    def zero(self) -> Any:
        pass

    @abstractmethod
    def monomial(self, exponent: int) -> Any:
        """zeta^exponent."""
        pass

    @abstractmethod
    def from_folded(self, folded: Sequence[int]) -> Any:
        """The value sum_j folded[j] zeta^j."""
        pass

    @abstractmethod
    def to_complex(self, value: Any) -> mpmath.mpc:
        pass

    @abstractmethod
    def get_backend_info(self) -> Dict[str, Any]:
        pass

    def fold(self, coefficients: Sequence[int]) -> List[int]:
        """Reduce a polynomial in q at q = omega = zeta^2 onto the zeta grid."""
        folded = [0] * self.ctx.modulus
        for j, c in enumerate(coefficients):
            if c:
                folded[(2 * j) % self.ctx.modulus] += c
        return folded

    def binomial(self, n: int, k: int) -> Any:
        """[n choose k] at q = omega, from the memoized Pascal triangle."""
        key = (n, k)
        if key not in self._binomials:
            self._binomials[key] = self.from_folded(self.fold(BINOMIALS.coefficients(n, k)))
        return self._binomials[key]
