import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import mpmath

from ..backends import RootContext, get_backend
from ..core.characters import euler_numbers_gf, euler_table_bernoulli
from ..core.errors import InvalidParameterError
from ..core.numeric import tolerance, working_precision
from .. import asymptotics, identities, invariants, modular
from .config import BACKENDS, FORMATS, LOG_LEVELS, Settings, resolve_settings
from .reports import (
    BI_SERIES_HEADER,
    SERIES_HEADER,
    RunReport,
    bi_series_payload,
    bi_series_rows,
    complex_payload,
    csv_text,
    jsonable,
    real_payload,
    report_schema,
    series_triples,
)

logger = logging.getLogger("qlf.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2

SLOPE_WINDOW = 0.5
CONJECTURE2_BOUND = 1e-12


@dataclass
class Outcome:
    """What a subcommand hands back for the report."""

    results: Dict[str, Any] = field(default_factory=dict)
    passed: Optional[bool] = None
    residuals: Dict[str, Any] = field(default_factory=dict)
    truncation: Dict[str, Any] = field(default_factory=dict)
    header: Sequence[str] = ()
    rows: List[Sequence[Any]] = field(default_factory=list)


# -----------------------------------------------------------------------------
# Argument types
# -----------------------------------------------------------------------------
def int_list(raw: str) -> List[int]:
    try:
        return [int(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}")


def perturbation(raw: str):
    values = int_list(raw)
    if len(values) not in (2, 3):
        raise argparse.ArgumentTypeError(f"expected D,K or D,K,DELTA, got {raw!r}")
    return (values[0], values[1], values[2] if len(values) == 3 else 1)


# -----------------------------------------------------------------------------
# Subcommands
# -----------------------------------------------------------------------------
def _cmd_invariant(args: argparse.Namespace, settings: Settings) -> Outcome:
    prec = settings.precision_bits
    if settings.backend == "exact" and args.method == "theta":
        raise InvalidParameterError("the theta-sum method has no exact backend; use --backend complex or both")
    ctx = RootContext.build(args.N, prec, exact_backend_enabled=settings.backend != "complex")
    result = invariants.kashaev_invariant(args.m, args.N, ctx, args.method)
    primary, value_backend = result.value, "complex"
    if settings.backend == "exact" and result.exact_value is not None:
        primary, value_backend = get_backend("exact", ctx).to_complex(result.exact_value), "exact"
    outcome = Outcome(
        results={
            "m": args.m,
            "N": args.N,
            "method": args.method,
            "value": complex_payload(primary, prec),
            "value_backend": value_backend,
        }
    )
    checks = []
    if result.cross_method is not None:
        outcome.residuals["cross_method"] = real_payload(result.cross_method, prec)
        outcome.results["theta_value"] = complex_payload(result.extra["theta_value"], prec)
        checks.append(result.cross_method < tolerance(prec, 24))
    if result.cross_backend is not None:
        outcome.residuals["cross_backend"] = real_payload(result.cross_backend, prec)
        outcome.results["exact_coefficients"] = [str(c) for c in result.exact_value.coefficients]
        checks.append(result.cross_backend < tolerance(prec, 32))
    if checks:
        outcome.passed = all(checks)
    outcome.header = ("m", "N", "method", "re", "im")
    value = outcome.results["value"]
    outcome.rows = [(args.m, args.N, args.method, value["re"], value["im"])]
    return outcome


def _from_report(report, **results: Any) -> Outcome:
    return Outcome(results={"report": report.to_dict(), **results}, passed=report.passed)


def _cmd_verify_identity(args: argparse.Namespace, settings: Settings) -> Outcome:
    spec = identities.KSeriesSpec(args.m, args.a, args.q_order, args.x_order)
    report = identities.verify_main_identity(spec, perturb=args.perturb)
    outcome = _from_report(report)
    outcome.truncation = {"q_order": args.q_order, "x_order": args.x_order}
    if args.perturb is not None:
        outcome.results["perturbation"] = list(args.perturb)
    return outcome


def _cmd_verify_difference(args: argparse.Namespace, settings: Settings) -> Outcome:
    spec = identities.KSeriesSpec(args.m, args.a, args.q_order, args.x_order)
    outcome = _from_report(identities.verify_difference_equation(spec))
    outcome.truncation = {"q_order": args.q_order, "x_order": args.x_order}
    return outcome


def _cmd_verify_recurrences(args: argparse.Namespace, settings: Settings) -> Outcome:
    report = identities.verify_multivariate_recurrences(args.m, args.a, args.q_order, args.degree_cap)
    collapse = identities.multivariate_collapse_check(args.m, args.a, args.q_order, args.degree_cap)
    outcome = Outcome(
        results={"recurrences": report.to_dict(), "collapse": collapse.to_dict()},
        passed=report.passed and collapse.passed,
    )
    outcome.truncation = {"q_order": args.q_order, "degree_cap": args.degree_cap}
    return outcome


def _cmd_coeffs(args: argparse.Namespace, settings: Settings) -> Outcome:
    series = identities.k_series(identities.KSeriesSpec(args.m, args.a, args.q_order, args.x_order))
    outcome = Outcome(results={"coefficients": bi_series_payload(series)})
    outcome.truncation = {"q_order": args.q_order, "x_order": args.x_order}
    outcome.header = BI_SERIES_HEADER
    outcome.rows = bi_series_rows(series)
    return outcome


def _cmd_eichler_rational(args: argparse.Namespace, settings: Settings) -> Outcome:
    prec = settings.precision_bits
    value = modular.eichler_at_rational(args.m, args.a, args.M, args.N, prec)
    payload = complex_payload(value, prec)
    outcome = Outcome(results={"m": args.m, "a": args.a, "M": args.M, "N": args.N, "value": payload})
    outcome.truncation = {"terms": args.m * args.N + 1}
    outcome.header = ("m", "a", "M", "N", "re", "im")
    outcome.rows = [(args.m, args.a, args.M, args.N, payload["re"], payload["im"])]
    return outcome


def _cmd_euler(args: argparse.Namespace, settings: Settings) -> Outcome:
    gf = euler_numbers_gf(args.m, args.a, args.kmax)
    bern = euler_table_bernoulli(args.m, args.a, args.kmax)
    outcome = Outcome(
        results={"values": [str(v) for v in gf.values], "bernoulli_route": [str(v) for v in bern.values]},
        passed=gf.values == bern.values,
    )
    outcome.header = ("k", "E_k")
    outcome.rows = [(k, str(v)) for k, v in enumerate(gf.values)]
    return outcome


def _cmd_s_check(args: argparse.Namespace, settings: Settings) -> Outcome:
    prec = settings.precision_bits
    tau = mpmath.mpc(args.tau.real, args.tau.imag)
    residual = modular.s_transform_check(args.m, tau, prec)
    matrix = modular.modular_matrix(args.m, prec)
    with working_precision(prec):
        square = matrix.square_residual()
    return Outcome(
        results={"m": args.m, "tau": complex_payload(tau, prec), "symmetric": matrix.is_symmetric()},
        passed=bool(residual < tolerance(prec, 48) and square < tolerance(prec, 16)),
        residuals={"s_transform": real_payload(residual, prec), "matrix_square": real_payload(square, prec)},
    )


def _cmd_t_check(args: argparse.Namespace, settings: Settings) -> Outcome:
    report = modular.t_transform_check(args.m, args.q_order, precision_bits=settings.precision_bits)
    outcome = _from_report(report)
    outcome.truncation = {"q_order": args.q_order}
    return outcome


def _cmd_eta_identity(args: argparse.Namespace, settings: Settings) -> Outcome:
    outcome = _from_report(modular.eta_identity_check(args.case, args.q_order))
    outcome.truncation = {"q_order": args.q_order}
    return outcome


def _cmd_character(args: argparse.Namespace, settings: Settings) -> Outcome:
    series = modular.su2_character(args.level, args.lam, args.q_order)
    triples = series_triples(series)
    outcome = Outcome(results={"level": args.level, "lambda": args.lam, "coefficients": triples})
    outcome.truncation = {"q_order": str(series.order)}
    outcome.header = SERIES_HEADER
    outcome.rows = triples
    return outcome


def _cmd_zagier(args: argparse.Namespace, settings: Settings) -> Outcome:
    outcome = _from_report(modular.zagier_identity_check(args.q_order, args.sign))
    outcome.truncation = {"q_order": args.q_order}
    return outcome


def _cmd_asymptotic(args: argparse.Namespace, settings: Settings) -> Outcome:
    prec = settings.precision_bits
    scan = asymptotics.conjecture1_error_scan(args.m, args.a, args.K, args.N_list, prec)
    rows = []
    for row in scan.rows:
        exact = complex_payload(row.exact, prec)
        approx = complex_payload(row.approx, prec)
        rows.append((row.N, exact["re"], exact["im"], approx["re"], approx["im"], real_payload(row.abs_err, prec)))
    return Outcome(
        results={
            "m": args.m,
            "a": args.a,
            "K": args.K,
            "slope": scan.slope,
            "expected_slope": scan.expected_slope,
            "decreasing": scan.decreasing,
            "proven_case": args.a == 0,
        },
        passed=abs(scan.slope - scan.expected_slope) <= SLOPE_WINDOW,
        header=("N", "exact_re", "exact_im", "approx_re", "approx_im", "abs_err"),
        rows=rows,
    )


def _cmd_conjecture2(args: argparse.Namespace, settings: Settings) -> Outcome:
    prec = settings.precision_bits
    bound = tolerance(prec, 24) if args.a == 0 else mpmath.mpf(CONJECTURE2_BOUND)
    # "exact" evaluates Y in the group ring; "both" also compares it with the complex value
    y_backend = "exact" if settings.backend == "exact" else "complex"
    rows = []
    worst = mpmath.mpf(0)
    cross = mpmath.mpf(0)
    for N in args.N_list:
        ctx = RootContext.build(N, prec)
        if settings.backend == "both":
            with working_precision(prec):
                exact_y = invariants.y_series(args.m, args.a, ctx, backend="exact")
                complex_y = invariants.y_series(args.m, args.a, ctx)
                cross = max(cross, abs(exact_y - complex_y))
        residual = asymptotics.conjecture2_residual(args.m, args.a, N, ctx, backend=y_backend)
        worst = max(worst, residual)
        rows.append((N, real_payload(residual, prec)))
    outcome = Outcome(
        results={
            "m": args.m,
            "a": args.a,
            "proven_case": args.a == 0,
            "bound": real_payload(bound, prec),
            "y_backend": y_backend,
        },
        passed=bool(worst < bound and cross < tolerance(prec, 32)),
        residuals={"max": real_payload(worst, prec)},
        header=("N", "residual"),
        rows=rows,
    )
    if settings.backend == "both":
        outcome.residuals["cross_backend"] = real_payload(cross, prec)
    return outcome


def _cmd_volume(args: argparse.Namespace, settings: Settings) -> Outcome:
    prec = settings.precision_bits
    scan = asymptotics.volume_conjecture_check(args.m, args.N_list, prec)
    rows = [(row.N, real_payload(row.ratio, prec)) for row in scan.rows]
    return Outcome(
        results={"m": args.m, "decreasing": scan.decreasing},
        passed=scan.decreasing,
        header=("N", "ratio"),
        rows=rows,
    )


# -----------------------------------------------------------------------------
# Parser
# -----------------------------------------------------------------------------
def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=None, help="Working precision in bits (default 256)")
    common.add_argument("--backend", choices=BACKENDS, default=None, help="Root-of-unity arithmetic")
    common.add_argument("--format", dest="output_format", choices=FORMATS, default=None)
    common.add_argument("--out", default=None, help="Output path (default stdout)")
    common.add_argument("--config", default=None, help="Key-value file with prec, backend, format, out")
    common.add_argument("--log-level", choices=LOG_LEVELS, default=None)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(prog="qlf", description="Torus link invariants, q-series identities and Eichler integrals")
    sub = parser.add_subparsers(dest="command", required=True)

    def leaf(group, name: str, handler, help_text: str, command: str) -> argparse.ArgumentParser:
        p = group.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=handler, command_name=command)
        return p

    p = leaf(sub, "invariant", _cmd_invariant, "Kashaev's invariant of T(2,2m)", "invariant")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--method", choices=("nested", "theta", "both"), default="nested")

    qseries = sub.add_parser("qseries", help="q-series identities").add_subparsers(dest="action", required=True)
    for name, handler, help_text in (
        ("verify-identity", _cmd_verify_identity, "Nested sum equals the chi-sum"),
        ("verify-difference", _cmd_verify_difference, "q-difference equation of K"),
        ("coeffs", _cmd_coeffs, "Coefficients of K_m^(a)(x)"),
    ):
        p = leaf(qseries, name, handler, help_text, f"qseries {name}")
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--a", type=int, default=0)
        p.add_argument("--q-order", type=int, default=identities.DEFAULT_Q_ORDER)
        p.add_argument("--x-order", type=int, default=identities.DEFAULT_X_ORDER)
        if name == "verify-identity":
            p.add_argument("--perturb", type=perturbation, default=None, help="Negative control D,K[,DELTA]")
    p = leaf(qseries, "verify-recurrences", _cmd_verify_recurrences, "Multivariate recurrences", "qseries verify-recurrences")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--q-order", type=int, default=40)
    p.add_argument("--degree-cap", type=int, default=identities.DEFAULT_DEGREE_CAP)

    eichler = sub.add_parser("eichler", help="Eichler integrals").add_subparsers(dest="action", required=True)
    p = leaf(eichler, "rational", _cmd_eichler_rational, "Value at tau = M/N", "eichler rational")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--M", type=int, default=1)
    p.add_argument("--N", type=int, required=True)

    p = leaf(sub, "euler", _cmd_euler, "Generalized Euler numbers", "euler")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--kmax", type=int, default=6)

    modular_group = sub.add_parser("modular", help="Modular transformations").add_subparsers(dest="action", required=True)
    p = leaf(modular_group, "s-check", _cmd_s_check, "S-transformation residual", "modular s-check")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--tau", type=complex, default=1j)
    p = leaf(modular_group, "t-check", _cmd_t_check, "T-transformation phases", "modular t-check")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q-order", type=int, default=60)

    p = leaf(sub, "eta-identity", _cmd_eta_identity, "Eta-product forms of the theta series", "eta-identity")
    p.add_argument("--case", choices=modular.ETA_CASES, required=True)
    p.add_argument("--q-order", type=int, default=60)

    p = leaf(sub, "character", _cmd_character, "Affine su(2) character", "character")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--lam", type=int, default=0)
    p.add_argument("--q-order", type=int, default=30)

    p = leaf(sub, "zagier-check", _cmd_zagier, "Averaged partial sums against the Eichler integral", "zagier-check")
    p.add_argument("--q-order", type=int, default=50)
    p.add_argument("--sign", type=int, choices=(-1, 1), default=-1)

    p = leaf(sub, "asymptotic", _cmd_asymptotic, "Error decay of the asymptotic expansion", "asymptotic")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--K", type=int, default=2)
    p.add_argument("--N-list", dest="N_list", type=int_list, default=[8, 16, 32, 64])

    p = leaf(sub, "conjecture2", _cmd_conjecture2, "Eichler integral at 1/N against the omega-series", "conjecture2")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--N-list", dest="N_list", type=int_list, default=list(range(1, 16)))

    p = leaf(sub, "volume-check", _cmd_volume, "(2 pi/N) log |<T(2,2m)>_N| along N", "volume-check")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--N-list", dest="N_list", type=int_list, default=[10, 20, 40, 80])

    p = sub.add_parser("schema", help="Print the JSON schema of run reports")
    p.set_defaults(func=None, command_name="schema")
    return parser


# -----------------------------------------------------------------------------
# Entry point
# -----------------------------------------------------------------------------
def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _error(message: str) -> int:
    logger.error(f"[CLI] {message}")
    print(json.dumps({"status": "error", "error_type": "invalid_parameter", "message": message}, indent=2, sort_keys=True))
    return EXIT_INVALID


def _parameters(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"func", "command_name", "command", "action", "config", "prec", "backend", "output_format", "out", "log_level"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse ``argv``, run one subcommand and emit its report.

    Returns:
        0 on success, 1 when a check ran and failed, 2 on invalid input
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID

    if args.command_name == "schema":
        print(json.dumps(report_schema(), indent=2, sort_keys=True))
        return EXIT_OK

    try:
        settings = resolve_settings(args.prec, args.backend, args.output_format, args.out, args.log_level, args.config)
    except InvalidParameterError as e:
        return _error(str(e))

    logging.basicConfig(level=settings.log_level, stream=sys.stderr)
    logging.getLogger("qlf").setLevel(settings.log_level)
    logger.info(f"[CLI] {args.command_name} prec={settings.precision_bits} backend={settings.backend}")

    start = time.perf_counter()
    try:
        outcome = args.func(args, settings)
    except (InvalidParameterError, ValueError) as e:
        return _error(str(e))
    elapsed_ms = (time.perf_counter() - start) * 1000.0

    if settings.output_format == "csv":
        if not outcome.header:
            return _error(f"'{args.command_name}' has no CSV table; use --format json")
        _write(csv_text(outcome.header, outcome.rows), settings.out)
    else:
        report = RunReport(
            command=args.command_name,
            parameters=jsonable(_parameters(args), settings.precision_bits),
            backend=settings.backend,
            precision_bits=settings.precision_bits,
            wall_time_ms=round(elapsed_ms, 3),
            passed=outcome.passed,
            results=jsonable(outcome.results, settings.precision_bits),
            residuals=jsonable(outcome.residuals, settings.precision_bits),
            truncation=jsonable(outcome.truncation, settings.precision_bits),
        )
        _write(report.to_json(), settings.out)

    if outcome.passed is False:
        logger.warning(f"[CLI] {args.command_name} check failed")
        return EXIT_FAILED
    return EXIT_OK


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
