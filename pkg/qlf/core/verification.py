from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .errors import VerificationError


@dataclass
class VerificationReport:
    """
    Outcome of a coefficientwise or numeric check.

    A failed check is a normal outcome: ``passed`` is False and
    ``discrepancy`` locates the first mismatch. Sub-checks (one per identity
    or recurrence) are collected in ``checks``.
    """

    name: str
    passed: bool
    checked_terms: int = 0
    discrepancy: Optional[Dict[str, Any]] = None
    checks: List["VerificationReport"] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def combine(cls, name: str, checks: List["VerificationReport"], **details: Any) -> "VerificationReport":
        failed = next((c for c in checks if not c.passed), None)
        return cls(
            name=name,
            passed=failed is None,
            checked_terms=sum(c.checked_terms for c in checks),
            discrepancy=None if failed is None else {"check": failed.name, **(failed.discrepancy or {})},
            checks=list(checks),
            details=dict(details),
        )

    def raise_for_failure(self) -> None:
        if not self.passed:
            raise VerificationError(f"{self.name} failed: {self.discrepancy}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked_terms": self.checked_terms,
            "discrepancy": self.discrepancy,
            "checks": [c.to_dict() for c in self.checks],
            "details": self.details,
        }
