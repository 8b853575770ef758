"""
Run reports emitted by the command-line front end.

Numbers are serialized as decimal strings at the run's precision, and JSON
keys are sorted, so two runs with the same inputs differ only in
``wall_time_ms``.
"""

import csv
import io
import json
from dataclasses import is_dataclass
from fractions import Fraction
from math import ceil, log10
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import mpmath
from pydantic import BaseModel, Field

from .. import __version__
from ..core.qseries import BiSeries, FormalSeries
from ..core.verification import VerificationReport

SCHEMA_VERSION = "1"
SCHEMA_PATH = Path(__file__).with_name("report_schema.json")


class ComplexValue(BaseModel):
    re: str = Field(..., description="Real part as a decimal string")
    im: str = Field(..., description="Imaginary part as a decimal string")


class RunReport(BaseModel):
    command: str = Field(..., description="Subcommand path, e.g. 'qseries verify-identity'")
    parameters: Dict[str, Any] = Field(default_factory=dict, description="Full parameter echo")
    backend: str
    precision_bits: int
    wall_time_ms: float
    passed: Optional[bool] = Field(None, description="Outcome of the check; null for plain computations")
    results: Dict[str, Any] = Field(default_factory=dict)
    residuals: Dict[str, Any] = Field(default_factory=dict)
    truncation: Dict[str, Any] = Field(default_factory=dict)
    version: str = __version__
    schema_version: str = SCHEMA_VERSION

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True)


def report_schema() -> Dict[str, Any]:
    return RunReport.model_json_schema()


def published_schema() -> Dict[str, Any]:
    """The schema shipped next to this module; regenerate it whenever RunReport changes."""
    return json.loads(SCHEMA_PATH.read_text())


def digits_for(precision_bits: int) -> int:
    return max(15, ceil(precision_bits * log10(2)))


def complex_payload(value, precision_bits: int) -> Dict[str, str]:
    z = mpmath.mpc(value)
    digits = digits_for(precision_bits)
    return ComplexValue(re=mpmath.nstr(z.real, digits), im=mpmath.nstr(z.imag, digits)).model_dump()


def real_payload(value, precision_bits: int = 64) -> str:
    return mpmath.nstr(mpmath.mpf(value), digits_for(precision_bits))


def jsonable(value: Any, precision_bits: int) -> Any:
    """Convert library results (mpmath numbers, fractions, reports) into JSON-ready values."""
    if isinstance(value, VerificationReport):
        return jsonable(value.to_dict(), precision_bits)
    if isinstance(value, (mpmath.mpc, complex)):
        return complex_payload(value, precision_bits)
    if isinstance(value, mpmath.mpf):
        return real_payload(value, precision_bits)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v, precision_bits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v, precision_bits) for v in value]
    if is_dataclass(value):
        return jsonable(vars(value), precision_bits)
    return value


def csv_text(header: Sequence[str], rows: List[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


# -----------------------------------------------------------------------------
# Series dumps
# -----------------------------------------------------------------------------
SERIES_HEADER = ("exponent_numerator", "denom", "coefficient")
BI_SERIES_HEADER = ("x_degree",) + SERIES_HEADER


def series_triples(series: FormalSeries) -> List[List[Any]]:
    """[k, D, c] for each stored term c q^{k/D}; c is a decimal string so big integers stay exact."""
    return [[k, denom, str(c)] for k, denom, c in series.to_rows()]


def bi_series_rows(series: BiSeries) -> List[List[Any]]:
    return [[d, k, denom, str(c)] for d, k, denom, c in series.to_rows()]


def bi_series_payload(series: BiSeries) -> Dict[str, List[List[Any]]]:
    """x-degree (as a string key) to the [k, D, c] triples of its coefficient series."""
    return {str(d): series_triples(series.coefficient(d)) for d in sorted(series.terms)}
