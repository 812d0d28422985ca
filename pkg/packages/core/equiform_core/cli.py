# Copyright (c) 2025 Equiform Core Authors.
# Licensed under the MIT License

"""
Command-line front end.

    equiform check params.json
    equiform curvature block211.json
    equiform verify --theorem cor-bound --count 10000 --seed 7
    equiform scan --family General34 --count 500 --seed 3 --output scan.csv

Exit codes: 0 when every assertion holds, 1 when a verification fails, 2 for
input errors (unreadable or invalid parameter files, degenerate metrics,
chart poles).
"""

import argparse
import contextlib
import csv
import json
import logging
import sys
from typing import Callable, Dict, List, Optional, TextIO, Tuple

from pydantic import ValidationError

from equiform_core.analysis import (
    DEFAULT_PROBES, THEOREMS, bound_scan, constancy, family_scan, fd_comparison, k_formula,
    necessity_probe, verify_k6_infeasibility, verify_theorem,
)
from equiform_core.config import CONFIG
from equiform_core.crosscheck import MODES, coefficient_crosscheck, crosscheck_instances
from equiform_core.geometry import ChartPoleError, DegenerateMetricError, metric, scalar_curvature
from equiform_core.motion import (
    FamilyKind, MotionParams, PreconditionError, check_assumption, derived_quantities,
    inert_parameters, sphere_condition_residuals, sphere_conditions_hold, theorem_constraint_residuals,
)
from equiform_core.protocol import (
    CrosscheckReportModel, ParamsFile, ProbeReportModel, RunConfig, ScanStatsModel, TheoremReportModel,
)
from equiform_core.sampling import sample_family
from equiform_core.trigpoly import ScalarModeError
from equiform_core.utils import format_scalar, parse_scalar, square_sum

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

SCAN_HEADER = ("seed_index", "s_prime", "omega_3", "omega_9", "omega_15", "omega_norm_sq",
               "b_norm_sq", "beta", "delta", "K", "constant")

COROLLARIES = ("cor-k6", "cor-bound", "necessity")
FD_TOLERANCE = 1e-5

# scan has no text table; its plain output is already CSV.
FORMATS: Dict[str, Tuple[str, ...]] = {
    "check": ("text", "json"),
    "quantities": ("text", "json"),
    "metric": ("text", "json"),
    "curvature": ("text", "json"),
    "fd-check": ("text",),
    "verify": ("text", "json"),
    "sample": ("text",),
    "scan": ("text", "csv"),
    "crosscheck": ("text", "json"),
}

READINGS: Dict[str, str] = {
    "derived": "derived alpha reading 4(2 beta + s'^2)^2 - 9(alpha8^2 + 4(alpha6^2 + alpha7^2))",
    "printed": "printed reading 4(s'^2 + 2|b'|^2) - 9(S8^2 + 4 S0^2 + 4 S4^2)",
}


class ParamsFileError(ValueError):
    """A parameter file could not be read or does not match the schema."""
    pass


def setup_logging() -> None:
    """Configure the root logger from CONFIG.logging."""
    level = getattr(logging, str(CONFIG.logging.level).upper(), logging.INFO)
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if CONFIG.logging.file:
        handlers.append(logging.FileHandler(CONFIG.logging.file))
    logging.basicConfig(level=level, format=CONFIG.logging.format, handlers=handlers, force=True)


def parse_params(path: str, mode: str = "auto") -> MotionParams:
    """Read and validate a JSON parameter file."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except OSError as e:
        raise ParamsFileError(f"{path}: cannot read file: {e}") from e
    except json.JSONDecodeError as e:
        raise ParamsFileError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    try:
        return ParamsFile.model_validate(raw).to_params(mode)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(x) for x in err['loc']) or '<root>'}: {err['msg']}" for err in e.errors()
        )
        raise ParamsFileError(f"{path}: {problems}") from e
    except (ValueError, ScalarModeError) as e:
        raise ParamsFileError(f"{path}: {e}") from e


def _k_text(k) -> str:
    """Exact rational and decimal side by side."""
    if k is None:
        return "n/a"
    text = format_scalar(k)
    decimal = f"{float(k):.12g}"
    return text if text == decimal else f"{text} ({decimal})"


def _emit_json(model, out: TextIO) -> None:
    out.write(model.model_dump_json(indent=2) if hasattr(model, "model_dump_json") else json.dumps(model, indent=2))
    out.write("\n")


# ---------------------------------------------------------------------------
# Subcommands on parameter files
# ---------------------------------------------------------------------------

def _cmd_check(config: RunConfig, p: MotionParams, out: TextIO) -> int:
    residuals = sphere_condition_residuals(p)
    spheres = sphere_conditions_hold(p, config.tolerance)
    assumption = check_assumption(p, config.tolerance)
    inert = inert_parameters(p)
    balance = None
    if spheres and assumption:
        residuals_a = theorem_constraint_residuals(p, FamilyKind.K_NEG32_A, verbatim=config.reading == "printed",
                                                   tol=config.tolerance)
        balance = residuals_a[-1]
    if config.format == "json":
        _emit_json({"residuals": [format_scalar(r) for r in residuals], "sphere_conditions": spheres,
                    "assumption": assumption, "inert": inert,
                    "kneg32a_balance": None if balance is None else format_scalar(balance),
                    "kneg32a_reading": config.reading}, out)
    else:
        for i, r in enumerate(residuals, start=1):
            print(f"r{i} = {format_scalar(r)}", file=out)
        print(f"sphere conditions: {'hold' if spheres else 'violated'}", file=out)
        print(f"assumption b'1 = b'2 = b'3 = 0: {'holds' if assumption else 'violated'}", file=out)
        if inert:
            print(f"inert parameters set: {', '.join(f'omega_{i}' for i in inert)}", file=out)
        if balance is not None:
            print(f"KNeg32A balance = {format_scalar(balance)} ({READINGS[config.reading]})", file=out)
    return EXIT_OK if spheres and assumption else EXIT_FAILED


def _cmd_quantities(config: RunConfig, p: MotionParams, out: TextIO) -> int:
    table = derived_quantities(p).as_dict()
    if config.format == "json":
        _emit_json({name: format_scalar(v) for name, v in table.items()}, out)
    else:
        for name, v in table.items():
            print(f"{name:>7} = {format_scalar(v)}", file=out)
    return EXIT_OK


def _cmd_metric(config: RunConfig, p: MotionParams, out: TextIO) -> int:
    g = metric(p)
    if config.format == "json":
        _emit_json({name: [{"i": i, "j": j, "cos": [format_scalar(v) for v in c.coeffs],
                            "sin": [format_scalar(v) for v in s.coeffs]} for (i, j), c, s in tp.items()]
                    for name, tp in g.entries().items()}, out)
        return EXIT_OK
    for name, tp in g.entries().items():
        print(f"{name}:", file=out)
        print(tp.describe() or "  0", file=out)
    return EXIT_OK


def _cmd_curvature(config: RunConfig, p: MotionParams, out: TextIO) -> int:
    cq = scalar_curvature(p, config.method)
    verdict = constancy(cq, tol=config.tolerance)
    bounds = cq.spectrum_bound()
    if config.format == "json":
        _emit_json({"method": cq.method, "P_terms": len(cq.P), "Q_terms": len(cq.Q),
                    "P_bound": bounds["P"], "Q_bound": bounds["Q"], "constant": verdict.constant,
                    "K": format_scalar(verdict.k) if verdict.constant else None,
                    "verdict": verdict.describe()}, out)
    else:
        print(f"method: {cq.method}", file=out)
        print(f"P: {len(cq.P)} harmonics, max |i|,|j| = {bounds['P']}", file=out)
        print(f"Q: {len(cq.Q)} harmonics, max |i|,|j| = {bounds['Q']}", file=out)
        print(verdict.describe(), file=out)
        if verdict.constant:
            print(f"K = {_k_text(verdict.k)}", file=out)
        try:
            print(f"k_formula = {_k_text(k_formula(p))}", file=out)
        except PreconditionError as e:
            print(f"k_formula: {e}", file=out)
    return EXIT_OK


def _cmd_fd_check(config: RunConfig, p: MotionParams, out: TextIO) -> int:
    rows = fd_comparison(p, DEFAULT_PROBES)
    worst = max(row[4] for row in rows)
    threshold = config.tolerance if config.tolerance is not None else FD_TOLERANCE
    for theta, phi, symbolic, fd, dev in rows:
        print(f"theta={theta:+.3f} phi={phi:+.3f}  symbolic={symbolic:+.12g}  fd={fd:+.12g}  rel={dev:.2e}",
              file=out)
    print(f"max relative deviation {worst:.2e} (threshold {threshold:.0e})", file=out)
    return EXIT_OK if worst <= threshold else EXIT_FAILED


def _verify_files(config: RunConfig, params: List[MotionParams], out: TextIO) -> int:
    family = THEOREMS[config.theorem]
    failed = False
    for p in params:
        report = verify_theorem(p, family, method=config.method, tol=config.tolerance)
        failed |= not report.passed
        if config.format == "json":
            _emit_json(TheoremReportModel.from_report(report), out)
            continue
        print(f"theorem {report.theorem} ({family.value}): {'PASS' if report.passed else 'FAIL'}", file=out)
        print(f"  pipeline K = {_k_text(report.pipeline_k)}, predicted K = {_k_text(report.predicted_k)}",
              file=out)
        if family is FamilyKind.K_NEG32_A:
            print(f"  alpha_balance: {READINGS['derived']}", file=out)
        for note in report.diagnostics:
            print(f"  - {note}", file=out)
    return EXIT_FAILED if failed else EXIT_OK


FileCommand = Callable[[RunConfig, MotionParams, TextIO], int]

FILE_COMMANDS: Dict[str, FileCommand] = {
    "check": _cmd_check,
    "quantities": _cmd_quantities,
    "metric": _cmd_metric,
    "curvature": _cmd_curvature,
    "fd-check": _cmd_fd_check,
}


# ---------------------------------------------------------------------------
# Sampling subcommands
# ---------------------------------------------------------------------------

def _print_stats(stats, config: RunConfig, out: TextIO) -> None:
    if config.format == "json":
        _emit_json(ScanStatsModel.from_stats(stats), out)
        return
    print(f"{stats.name}: seed {stats.seed}, {stats.requested} requested, {stats.count} evaluated, "
          f"{stats.constant_count} constant", file=out)
    if stats.min_k is not None:
        print(f"  min K = {stats.min_k!r}, max K = {stats.max_k!r}", file=out)
    for label, items in (("rejected", stats.rejected), ("failure", stats.failures),
                         ("observation", stats.observations)):
        for item in items:
            print(f"  {label}: {item}", file=out)
    print("PASS" if stats.passed else "FAIL", file=out)


def _verify_sampled(config: RunConfig, out: TextIO) -> int:
    if config.theorem == "cor-k6":
        stats = verify_k6_infeasibility(config.seed, config.count, config.method)
        _print_stats(stats, config, out)
        return EXIT_OK if stats.passed else EXIT_FAILED
    if config.theorem == "cor-bound":
        stats = bound_scan(config.seed, config.count, config.method)
        _print_stats(stats, config, out)
        return EXIT_OK if stats.passed else EXIT_FAILED
    if config.theorem == "necessity":
        report = necessity_probe(config.seed, config.count, config.method or "spectral")
        if config.format == "json":
            _emit_json(ProbeReportModel.from_report(report), out)
        else:
            print(f"necessity probe: {report.detected_by_pipeline}/{report.evaluated} detected by the curvature "
                  f"(rate {report.rate:.3f}), {report.detected} rejected by any check, "
                  f"{len(report.skipped)} skipped", file=out)
            print("PASS" if report.passed else "FAIL", file=out)
        return EXIT_OK if report.passed else EXIT_FAILED

    family = THEOREMS[config.theorem]
    sample = sample_family(family, config.seed, config.count)
    if sample.exhausted:
        if config.format == "json":
            _emit_json({"theorem": config.theorem, "family": family.value, "exhausted": True,
                        "message": sample.message}, out)
            return EXIT_OK
        print(f"theorem {config.theorem} ({family.value}): search exhausted, {sample.message}", file=out)
        return EXIT_OK
    return _verify_files(config, sample.instances, out)


def _cmd_sample(config: RunConfig, out: TextIO) -> int:
    family = FamilyKind.parse(config.family or "Unconstrained")
    sample = sample_family(family, config.seed, config.count)
    if sample.exhausted:
        print(f"{family.value}: search exhausted, {sample.message}", file=out)
        return EXIT_OK
    for p in sample.instances:
        print(ParamsFile.from_params(p).model_dump_json(), file=out)
    return EXIT_OK


def scan_rows(stats) -> List[List[str]]:
    """CSV rows for a scan, in instance order."""
    rows = []
    for rec in stats.records:
        p = rec.params
        rows.append([
            str(rec.index), format_scalar(p.s_prime), format_scalar(p.w(3)), format_scalar(p.w(9)),
            format_scalar(p.w(15)), format_scalar(square_sum(p.w(i) for i in range(3, 7))),
            format_scalar(square_sum(p.b(i) for i in range(4, 8))),
            format_scalar(rec.beta), format_scalar(rec.delta),
            repr(rec.k) if rec.k is not None else "", "true" if rec.constant else "false",
        ])
    return rows


def _cmd_scan(config: RunConfig, out: TextIO) -> int:
    family = FamilyKind.parse(config.family or "General34")
    stats = family_scan(family, config.seed, config.count, config.method)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SCAN_HEADER)
    writer.writerows(scan_rows(stats))
    logger.info("scan %s: %d rows, %d failures", family.value, len(stats.records), len(stats.failures))
    return EXIT_OK if stats.passed else EXIT_FAILED


def _cmd_crosscheck(config: RunConfig, params: List[MotionParams], out: TextIO) -> int:
    instances = params or crosscheck_instances(config.seed, config.count)
    mode = "K0" if config.k is None else "general"
    k = parse_scalar(config.k) if config.k is not None else None
    report = coefficient_crosscheck(instances, mode, k)
    if config.format == "json":
        _emit_json(CrosscheckReportModel.from_report(report), out)
    else:
        print(f"coefficient cross-check, mode {report.mode}, K = {format_scalar(report.k)}, "
              f"{report.instances} instances", file=out)
        for row in report.rows:
            line = f"  {row.name:<16} {row.status:<20}"
            if row.key is not None:
                line += f" key {row.key} reading '{row.reading}'"
            if row.normalization is not None:
                line += f" ratio {format_scalar(row.normalization)}"
            print(line, file=out)
            if row.rejected and row.status != "not applicable":
                print(f"  {'':<16} rejected: {', '.join(row.rejected)}", file=out)
        print("PASS" if report.passed else "FAIL", file=out)
    return EXIT_OK if report.passed else EXIT_FAILED


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

def run(config: RunConfig, out: Optional[TextIO] = None) -> int:
    """Execute one command and return its exit code."""
    if config.tolerance is not None:
        CONFIG.numerics.tolerance = config.tolerance
    formats = FORMATS.get(config.command, ("text",))
    if config.format not in formats:
        message = f"{config.command} does not support --format {config.format}; choose from {', '.join(formats)}"
        logger.error("%s", message)
        print(f"error: {message}", file=sys.stderr)
        return EXIT_INPUT
    with contextlib.ExitStack() as stack:
        if out is None:
            out = stack.enter_context(open(config.output, "w", encoding="utf-8", newline="")) \
                if config.output else sys.stdout
        try:
            params = [parse_params(path, config.mode) for path in config.inputs]
            if config.command in FILE_COMMANDS:
                if not params:
                    raise ParamsFileError(f"{config.command} needs at least one parameter file")
                code = EXIT_OK
                for path, p in zip(config.inputs, params):
                    if len(params) > 1:
                        print(f"== {path}", file=out)
                    code = max(code, FILE_COMMANDS[config.command](config, p, out))
                return code
            if config.command == "verify":
                if config.theorem not in THEOREMS and config.theorem not in COROLLARIES:
                    raise ValueError(f"unknown theorem {config.theorem!r}")
                if params and config.theorem in THEOREMS:
                    return _verify_files(config, params, out)
                return _verify_sampled(config, out)
            if config.command == "sample":
                return _cmd_sample(config, out)
            if config.command == "scan":
                return _cmd_scan(config, out)
            if config.command == "crosscheck":
                return _cmd_crosscheck(config, params, out)
            raise ValueError(f"unknown command {config.command!r}")
        except (ParamsFileError, PreconditionError, DegenerateMetricError, ChartPoleError,
                ScalarModeError, ValueError) as e:
            logger.error("%s", e)
            print(f"error: {e}", file=sys.stderr)
            return EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equiform",
        description="Scalar curvature of kinematic 3-surfaces generated by equiform motions of a sphere",
    )
    parser.add_argument('--config', help='Path to config.yaml (default: packaged config)')
    parser.add_argument('--mode', choices=['exact', 'float', 'auto'], default='auto',
                        help='Scalar mode for parameter files (default: auto)')
    parser.add_argument('--method', choices=['auto', 'symbolic', 'spectral'],
                        help='Curvature strategy (default: from config)')
    parser.add_argument('--format', choices=['text', 'json', 'csv'], default='text', help='Report format; csv for scan only, json for every command except fd-check and sample')
    parser.add_argument('--output', help='Write the report to this file instead of stdout')
    parser.add_argument('--tolerance', type=float, help='Float-mode zero-test tolerance (default 1e-9)')

    sub = parser.add_subparsers(dest='command', required=True)
    for name, text in (("check", "sphere conditions, assumption and inert parameters"),
                       ("quantities", "alpha1..alpha8, beta, gamma, delta"),
                       ("metric", "Fourier listing of g_ij"),
                       ("curvature", "P, Q summary, constancy verdict and K"),
                       ("fd-check", "compare the curvature with the finite-difference oracle")):
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument('inputs', nargs='+', help='Parameter JSON files')
        if name == "check":
            cmd.add_argument('--reading', choices=sorted(READINGS), default='derived',
                             help='KNeg32A balance reading to report (default: derived)')

    verify = sub.add_parser('verify', help='verify a theorem or corollary')
    verify.add_argument('--theorem', required=True, choices=sorted(THEOREMS) + list(COROLLARIES))
    verify.add_argument('--count', type=int, default=10, help='Sampled instances (default: 10)')
    verify.add_argument('--seed', type=int, default=0)
    verify.add_argument('inputs', nargs='*', help='Parameter files (theorems only; sampled when omitted)')

    sample = sub.add_parser('sample', help='print sampled family members as parameter JSON')
    sample.add_argument('--family', required=True, choices=[f.value for f in FamilyKind])
    sample.add_argument('--count', type=int, default=1)
    sample.add_argument('--seed', type=int, default=0)

    scan = sub.add_parser('scan', help='CSV of beta, delta and K over a sampled family')
    scan.add_argument('--family', default='General34', choices=[f.value for f in FamilyKind])
    scan.add_argument('--count', type=int, default=100)
    scan.add_argument('--seed', type=int, default=0)

    cross = sub.add_parser('crosscheck', help='compare extracted Fourier coefficients with closed forms')
    cross.add_argument('--k', help='K for the general mode (exact, e.g. -3/2); K0 mode when omitted')
    cross.add_argument('--count', type=int, default=6)
    cross.add_argument('--seed', type=int, default=0)
    cross.add_argument('inputs', nargs='*', help='Exact parameter files (sampled when omitted)')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.config:
        from equiform_core import init
        try:
            init(args.config)
        except FileNotFoundError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_INPUT
    setup_logging()

    try:
        config = RunConfig(
            command=args.command,
            inputs=getattr(args, 'inputs', None) or [],
            seed=getattr(args, 'seed', 0),
            count=getattr(args, 'count', 1),
            tolerance=args.tolerance,
            mode=args.mode,
            method=args.method,
            output=args.output,
            format=args.format,
            theorem=getattr(args, 'theorem', None),
            family=getattr(args, 'family', None),
            k=getattr(args, 'k', None),
            reading=getattr(args, 'reading', 'derived'),
        )
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return run(config)


if __name__ == '__main__':
    sys.exit(main())
