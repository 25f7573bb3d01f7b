"""`blowup` command line: one subcommand per computation, one canonical JSON report per run.

Exit codes: 0 success, 1 the mathematics failed (the report names the reason),
2 the input was unusable. Stdout carries the report and nothing else; logs go
to stderr. Any other error still writes an internal-error report before it propagates.
"""

import argparse
import sys
from dataclasses import fields, is_dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from blowup_kit.bounds import (
    BoundsError,
    NodeFamily,
    bound_constant,
    chebyshev_witness,
    rescale_bound,
    validate_bound,
)
from blowup_kit.config import ConfigError, RunConfig, chosen_settings, resolve_config
from blowup_kit.engine import (
    EngineError,
    NotASolution,
    OneForm,
    hypocomplex_reconstruct,
    obstruction_report,
    pullback,
    verify_solution,
)
from blowup_kit.geometry import GeometryError, flag_correspondence_check
from blowup_kit.loggers import configure_package_logging, make_standard_logger
from blowup_kit.serialization import (
    FieldDeserializeFail,
    MissingRequired,
    UnknownField,
    canonical_json,
    deserialize,
)
from blowup_kit.series import ModeMismatch, Series, SeriesError
from blowup_kit.series_io import (
    SeriesFormatError,
    read_json_document,
    read_one_form,
    read_series,
    write_series,
)
from blowup_kit.timing import timer
from blowup_kit.wedge import (
    BUILTIN_SAMPLES,
    SampledFunction,
    WedgeError,
    WedgeSpec,
    builtin_sample,
    full_eowt_demo,
)

__all__: Sequence[str] = ("main", "build_parser", "EXIT_OK", "EXIT_FAILURE", "EXIT_INPUT")

logger = make_standard_logger(__name__)

EXIT_OK: int = 0
EXIT_FAILURE: int = 1
EXIT_INPUT: int = 2

MATH_FAILURES: Tuple[type, ...] = (EngineError, GeometryError, BoundsError, WedgeError)
INPUT_FAILURES: Tuple[type, ...] = (
    SeriesFormatError,
    ConfigError,
    FieldDeserializeFail,
    MissingRequired,
    UnknownField,
    SeriesError,
    ValueError,
    OSError,
)


class _Failed(Exception):
    """A command that ran to completion but whose property does not hold."""

    def __init__(self, reason: str, payload: Dict[str, Any]) -> None:
        super().__init__(reason)
        self.reason = reason
        self.payload = payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blowup",
        description="Blow-up of R^n in C^n: solutions, reconstruction, coefficient bounds, wedges.",
    )
    parser.add_argument("--mode", choices=["exact", "float"], default=None)
    parser.add_argument("--truncation", type=int, default=None, help="Truncation degree D.")
    parser.add_argument("--config", type=Path, default=None, help="YAML or JSON RunConfig file.")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", type=Path, default=None, help="Write the report here, not stdout.")
    parser.add_argument(
        "--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR", "FATAL"]
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="Apply every frame field to a chart series.")
    verify.add_argument("input", type=Path)

    pull = commands.add_parser("pullback", help="Pull a germ back to the chart.")
    pull.add_argument("input", type=Path)
    pull.add_argument("output", type=Path)

    recon = commands.add_parser("reconstruct", help="Recover the germ behind a chart solution.")
    recon.add_argument("input", type=Path)
    recon.add_argument("output", type=Path)

    obstruct = commands.add_parser("obstruct", help="Solve L_j f = v_j for a closed one-form.")
    obstruct.add_argument("--v", dest="one_form", type=Path, required=True)
    obstruct.add_argument("--solution", type=Path, default=None)

    bounds = commands.add_parser("bounds", help="Coefficient bound constant R(m, k).")
    bounds.add_argument("--dim", type=int, required=True)
    bounds.add_argument("--degree", type=int, required=True)
    bounds.add_argument("--nodes", choices=[f.name for f in NodeFamily], default="equispaced")
    bounds.add_argument("--trials", type=int, default=0)
    bounds.add_argument("--eps", type=float, default=None)

    wedge = commands.add_parser("wedge", help="Edge-of-the-wedge extension through blow-up charts.")
    wedge.add_argument("--spec", type=Path, required=True)
    source = wedge.add_mutually_exclusive_group(required=True)
    source.add_argument("--germ", type=Path, default=None)
    source.add_argument("--sample", choices=sorted(BUILTIN_SAMPLES), default=None)
    wedge.add_argument("--germ-dir", type=Path, default=None)

    flag = commands.add_parser("flag", help="Flag-manifold realization of the blow-down.")
    flag.add_argument("--n", type=int, required=True)
    flag.add_argument("--samples", type=int, default=50)
    return parser


def _check_mode(args: argparse.Namespace, series: Series) -> None:
    if args.mode is not None and args.mode != series.mode.name:
        raise ModeMismatch(args.mode, series.mode.name)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                             Commands                              #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> Dict[str, Any]:
    f = read_series(args.input)
    _check_mode(args, f)
    report = verify_solution(f, config.residual_tolerance)
    payload = {"input": str(args.input), "solution": report}
    if not report.is_solution:
        tolerance = 0 if f.mode.name == "exact" else config.residual_tolerance
        payload["failing"] = sorted(k for k, v in report.residuals.items() if float(v) > tolerance)
        raise _Failed("NotASolution", payload)
    return payload


def cmd_pullback(args: argparse.Namespace, config: RunConfig) -> Dict[str, Any]:
    h = read_series(args.input)
    _check_mode(args, h)
    f = pullback(h, args.truncation)
    write_series(f, args.output)
    return {
        "input": str(args.input),
        "output": str(args.output),
        "truncation": f.truncation,
        "terms": len(f.terms),
    }


def cmd_reconstruct(args: argparse.Namespace, config: RunConfig) -> Dict[str, Any]:
    f = read_series(args.input)
    _check_mode(args, f)
    try:
        h = hypocomplex_reconstruct(f, config.residual_tolerance)
    except NotASolution as e:
        payload = {"input": str(args.input), "failing_layer": e.layer, "residual": e.residual}
        raise _Failed("NotASolution", payload) from e
    write_series(h, args.output)
    return {
        "input": str(args.input),
        "output": str(args.output),
        "truncation": h.truncation,
        "terms": len(h.terms),
    }


def cmd_obstruct(args: argparse.Namespace, config: RunConfig) -> Dict[str, Any]:
    v = OneForm(tuple(read_one_form(args.one_form)))
    if args.mode is not None and args.mode != v.mode.name:
        raise ModeMismatch(args.mode, v.mode.name)
    report, f = obstruction_report(v, args.truncation, config.residual_tolerance)
    payload: Dict[str, Any] = {"input": str(args.one_form), "obstruction": report}
    if args.solution is not None:
        write_series(f, args.solution)
        payload["solution"] = str(args.solution)
    if not report.recovered_exactly:
        raise _Failed("RecoveryMismatch", payload)
    return payload


def cmd_bounds(args: argparse.Namespace, config: RunConfig) -> Dict[str, Any]:
    report = bound_constant(args.dim, args.degree, NodeFamily[args.nodes])
    if args.eps is not None:
        report = rescale_bound(report, args.eps)
    payload: Dict[str, Any] = {"bound": report, "R_pow_k": report.R**report.k}
    if args.dim == 1 and args.degree >= 1:
        witness = chebyshev_witness(args.degree)
        payload["witness_lower_bound"] = witness.lower_bound
        if report.R < witness.lower_bound:
            raise _Failed("BelowWitness", payload)
    if args.trials > 0:
        summary = validate_bound(
            report, args.trials, np.random.default_rng(config.seed), config.grid_density
        )
        payload["validation"] = summary
        if summary.violations > 0:
            raise _Failed("BoundViolated", payload)
    return payload


def cmd_wedge(args: argparse.Namespace, config: RunConfig) -> Dict[str, Any]:
    spec = deserialize(WedgeSpec, read_json_document(args.spec))
    if args.germ is not None:
        h = read_series(args.germ)
        _check_mode(args, h)
        f = SampledFunction.from_germ(h, name=str(args.germ))
    else:
        f = builtin_sample(args.sample)
    report = full_eowt_demo(spec, f, config.wedge_settings())
    germ_files: List[str] = []
    if args.germ_dir is not None:
        args.germ_dir.mkdir(parents=True, exist_ok=True)
        for index, extension in enumerate(report.extensions):
            path = args.germ_dir / f"chart_{index}.json"
            write_series(extension.germ, path)
            germ_files.append(str(path))
    return {
        "spec": spec,
        "function": f.name,
        "directions": report.directions,
        "boundary_status": report.boundary_status,
        "boundary_max_disagreement": report.boundary_max_disagreement,
        "ball_radii": report.ball_radii,
        "per_chart_germ_files": germ_files,
        "overlap_max_disagreement": report.overlap_max_disagreement,
        "weak_cr_residuals": report.weak_cr_residuals,
        "fit_errors": report.fit_errors,
    }


def cmd_flag(args: argparse.Namespace, config: RunConfig) -> Dict[str, Any]:
    report = flag_correspondence_check(
        args.n, args.samples, np.random.default_rng(config.seed), config.mode
    )
    payload = {"flag": report}
    if report.max_discrepancy != 0 and config.mode.name == "exact":
        raise _Failed("FlagMismatch", payload)
    if not (report.lines_in_planes and report.planes_unique):
        raise _Failed("FlagMismatch", payload)
    return payload


COMMANDS = {
    "verify": cmd_verify,
    "pullback": cmd_pullback,
    "reconstruct": cmd_reconstruct,
    "obstruct": cmd_obstruct,
    "bounds": cmd_bounds,
    "wedge": cmd_wedge,
    "flag": cmd_flag,
}


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                          Entry point                              #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


def _error_fields(e: BaseException) -> Dict[str, Any]:
    if is_dataclass(e):
        return {f.name: getattr(e, f.name) for f in fields(e)}
    return {}


def _run(args: argparse.Namespace) -> Tuple[int, Dict[str, Any]]:
    overrides = {"mode": args.mode, "truncation": args.truncation, "seed": args.seed}
    try:
        config = resolve_config(args.config, overrides)
        explicit = chosen_settings(args.config, overrides)
    except ConfigError as e:
        logger.error(str(e))
        return EXIT_INPUT, {"status": "input-error", "reason": type(e).__name__, "detail": str(e)}
    # commands read the truncation only when the flag or the config file chose it
    args.truncation = config.truncation if "truncation" in explicit else None

    report: Dict[str, Any] = {"command": args.command, "config": config}
    try:
        with timer(logger=logger, name=args.command):
            payload = COMMANDS[args.command](args, config)
    except _Failed as failed:
        report.update(failed.payload)
        report.update({"status": "failure", "reason": failed.reason})
        return EXIT_FAILURE, report
    except MATH_FAILURES as e:
        logger.info(f"{args.command} failed: {e}")
        report.update({"status": "failure", "reason": type(e).__name__, "detail": str(e)})
        report["error"] = _error_fields(e)
        return EXIT_FAILURE, report
    except INPUT_FAILURES as e:
        logger.error(f"{args.command}: {e}")
        report.update({"status": "input-error", "reason": type(e).__name__, "detail": str(e)})
        return EXIT_INPUT, report
    report.update(payload)
    report["status"] = "ok"
    return EXIT_OK, report


def _write_report(out: Optional[Path], report: Dict[str, Any]) -> None:
    text = canonical_json(report)
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    configure_package_logging(args.log_level)

    try:
        code, report = _run(args)
    except Exception as e:
        logger.exception(f"{args.command}: internal error")
        _write_report(
            args.out,
            {
                "command": args.command,
                "status": "internal-error",
                "reason": type(e).__name__,
                "detail": str(e),
            },
        )
        raise
    _write_report(args.out, report)
    return code


if __name__ == "__main__":
    sys.exit(main())
