from .errors import InvalidParameterError, QLFError, SeriesDivisionError, VerificationError
from .numeric import (
    DEFAULT_PRECISION_BITS,
    HPComplex,
    PeriodicChar,
    bernoulli_number,
    bernoulli_polynomial,
    chi_eval,
    distance,
    l_value,
    l_value_exact,
    tolerance,
    working_precision,
)
from .qseries import (
    BINOMIALS,
    BiSeries,
    FormalSeries,
    QBinomialTable,
    dedekind_eta,
    gauss_binomial,
    pochhammer,
)
from .characters import (
    EulerNumberTable,
    chi_generating_check,
    euler_numbers_bernoulli,
    euler_numbers_gf,
    euler_table_bernoulli,
)
from .verification import VerificationReport

__all__ = [
    "InvalidParameterError",
    "QLFError",
    "SeriesDivisionError",
    "VerificationError",
    "DEFAULT_PRECISION_BITS",
    "HPComplex",
    "PeriodicChar",
    "bernoulli_number",
    "bernoulli_polynomial",
    "chi_eval",
    "distance",
    "l_value",
    "l_value_exact",
    "tolerance",
    "working_precision",
    "BINOMIALS",
    "BiSeries",
    "FormalSeries",
    "QBinomialTable",
    "dedekind_eta",
    "gauss_binomial",
    "pochhammer",
    "EulerNumberTable",
    "chi_generating_check",
    "euler_numbers_bernoulli",
    "euler_numbers_gf",
    "euler_table_bernoulli",
    "VerificationReport",
]
