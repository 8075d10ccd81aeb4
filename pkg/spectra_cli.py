"""
Oblong Sphere Spectra command line
This is the main entry point - just run: python spectra_cli.py <command> ...

Commands:
    spectrum   labeled low spectrum of -Delta + alpha K on one metric
    sweep      (L, alpha) sweep as CSV or JSON
    rayleigh   cutoff-sine Rayleigh quotient against the eigensolver
    verify     run every claim check and write the JSON report

Exit codes: 0 success, 1 failed claim or flagged numerics, 2 usage error.
Data goes to stdout (or --out); logs go to stderr.
"""
import argparse
import logging
import math
import os
import sys
from pathlib import Path
from typing import List, Optional

# Add current directory to Python path
sys.path.insert(0, str(Path(__file__).parent))

from dotenv import load_dotenv
from pydantic import ValidationError

from services.claims import ClaimConfig, full_report, run_sweep
from services.eigen import global_spectrum
from services.errors import InvalidProblemError, SpectralToolkitError
from services.metric import normalized_paper_metric, paper_metric, round_sphere
from services.models import Numerics
from services.rayleigh import rayleigh_quotient, paper_test_function
from services.report_format import dumps_json, spectrum_csv, spectrum_document, sweep_csv
from utils.logging_config import setup_logging

OUTPUT_DIR_ENV = "OBLONG_SPECTRA_OUTPUT_DIR"
BOUND_TOL = 1e-6

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

logger = None


class UsageError(Exception):
    """Flag values rejected before any computation"""


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_numerics_flags(parser: argparse.ArgumentParser, defaults: bool = True):
    default = (lambda value: value) if defaults else (lambda value: None)
    parser.add_argument("--n", type=int, default=default(4000), help="Interior grid points per mode")
    parser.add_argument("--T", type=float, default=None, help="Truncation half-width (metric default when unset)")
    parser.add_argument("--bc", choices=["auto", "dirichlet", "neumann"], default=default("auto"))
    parser.add_argument("--tol", type=float, default=default(1e-8), help="Eigenvalue absolute tolerance")
    parser.add_argument("--k-max", type=int, default=None, help="Last Fourier mode (needed for alpha < 0)")
    parser.add_argument("--workers", type=int, default=default(1), help="Worker processes for sweeps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectra_cli", description="Spectra of -Delta + alpha K on oblong spheres")
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--log-dir", default=None, help="Also write a detailed log file here")
    commands = parser.add_subparsers(dest="command", required=True)

    spectrum = commands.add_parser("spectrum", help="Low spectrum of one metric")
    spectrum.add_argument("--family", choices=["paper", "sphere"], default="paper")
    spectrum.add_argument("--L", type=float, default=None, help="Oblong family parameter")
    spectrum.add_argument("--alpha", type=float, default=0.0)
    spectrum.add_argument("--num", type=int, default=2, help="Number of eigenvalues")
    spectrum.add_argument("--normalized", type=_bool, default=False, help="Rescale the metric to area 4pi")
    spectrum.add_argument("--format", choices=["json", "csv"], default="json")
    spectrum.add_argument("--out", default=None)
    _add_numerics_flags(spectrum)

    sweep = commands.add_parser("sweep", help="(L, alpha) sweep")
    sweep.add_argument("--L-list", type=_float_list, default=None)
    sweep.add_argument("--alpha-list", type=_float_list, default=None)
    sweep.add_argument("--format", choices=["json", "csv"], default="csv")
    sweep.add_argument("--out", default=None)
    _add_numerics_flags(sweep)

    rayleigh = commands.add_parser("rayleigh", help="Cutoff-sine Rayleigh quotient on one oblong metric")
    rayleigh.add_argument("--L", type=float, required=True)
    rayleigh.add_argument("--alpha", type=float, default=0.0)
    rayleigh.add_argument("--out", default=None)
    _add_numerics_flags(rayleigh)

    verify = commands.add_parser("verify", help="Run every claim check")
    verify.add_argument("--config", default=None, help="ClaimConfig JSON file")
    verify.add_argument("--out", default="verify_report.json")
    verify.add_argument("--L-list", type=_float_list, default=None)
    verify.add_argument("--alpha-list", type=_float_list, default=None)
    _add_numerics_flags(verify, defaults=False)
    return parser


def _numerics(args, base: Optional[Numerics] = None) -> Numerics:
    """Numerics from the flags; unset flags keep the base values"""
    overrides = {
        "n": args.n,
        "T": args.T,
        "bc": args.bc,
        "eigen_abs_tol": args.tol,
        "k_max": args.k_max,
        "workers": args.workers,
    }
    values = (base or Numerics()).model_dump()
    values.update({key: value for key, value in overrides.items() if value is not None})
    try:
        return Numerics(**values)
    except ValidationError as e:
        raise UsageError(f"invalid numerics: {e.errors()[0]['loc'][0]}: {e.errors()[0]['msg']}")


def _output_path(path: str) -> Path:
    target = Path(path)
    output_dir = os.getenv(OUTPUT_DIR_ENV)
    if output_dir and not target.is_absolute():
        target = Path(output_dir) / target
    return target


def _emit(text: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(text)
        return
    target = _output_path(out)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logger.info("output_written", path=str(target))


# Commands


def _check_alpha(alpha: float):
    if not math.isfinite(alpha):
        raise UsageError(f"--alpha must be finite, got {alpha}")


def cmd_spectrum(args) -> int:
    if args.num < 2:
        raise UsageError(f"--num must be at least 2, got {args.num}")
    if args.family == "paper":
        if args.L is None:
            raise UsageError("--L is required for --family paper")
        if not (math.isfinite(args.L) and args.L > 0):
            raise UsageError(f"--L must be positive and finite, got {args.L}")
    elif args.L is not None:
        raise UsageError("--L only applies to --family paper")
    _check_alpha(args.alpha)
    numerics = _numerics(args)
    if args.alpha < 0 and numerics.k_max is None:
        raise UsageError("--alpha < 0 needs --k-max")

    if args.family == "sphere":
        metric = round_sphere()
    else:
        metric = normalized_paper_metric(args.L) if args.normalized else paper_metric(args.L)

    result = global_spectrum(metric, args.alpha, args.num, numerics)
    if args.format == "csv":
        _emit(spectrum_csv(result), args.out)
    else:
        _emit(dumps_json(spectrum_document(result, args.normalized)), args.out)
    return EXIT_FAILED if result.flagged else EXIT_OK


def _sweep_config(args, base: Optional[ClaimConfig] = None) -> ClaimConfig:
    base = base or ClaimConfig()
    values = base.model_dump()
    if args.L_list is not None:
        values["L_values"] = args.L_list
    if args.alpha_list is not None:
        values["alpha_values"] = args.alpha_list
    values["numerics"] = _numerics(args, base.numerics)
    try:
        return ClaimConfig(**values)
    except ValidationError as e:
        raise UsageError(f"invalid sweep configuration: {e.errors()[0]['msg']}")


def cmd_sweep(args) -> int:
    config = _sweep_config(args)
    points = run_sweep(config)
    if args.format == "csv":
        _emit(sweep_csv(points), args.out)
    else:
        _emit(dumps_json([point.model_dump() for point in points]), args.out)
    return EXIT_FAILED if any(point.flags for point in points) else EXIT_OK


def cmd_rayleigh(args) -> int:
    if not (math.isfinite(args.L) and args.L > 0):
        raise UsageError(f"--L must be positive and finite, got {args.L}")
    _check_alpha(args.alpha)
    numerics = _numerics(args)
    if args.alpha < 0 and numerics.k_max is None:
        raise UsageError("--alpha < 0 needs --k-max")

    metric = paper_metric(args.L)
    report = rayleigh_quotient(metric, args.alpha, paper_test_function(args.L), rel_tol=numerics.quad_rel_tol)
    spectrum = global_spectrum(metric, args.alpha, 2, numerics)
    bound_holds = report.quotient >= spectrum.lambda1 - BOUND_TOL
    document = report.model_dump()
    document["lambda1"] = spectrum.lambda1
    document["quotient_minus_lambda1"] = report.quotient - spectrum.lambda1
    document["upper_bound_holds"] = bound_holds
    document["flags"] = spectrum.flags
    _emit(dumps_json(document), args.out)
    return EXIT_OK if bound_holds and not spectrum.flagged else EXIT_FAILED


def cmd_verify(args) -> int:
    base = None
    if args.config is not None:
        try:
            base = ClaimConfig.model_validate_json(Path(args.config).read_text(encoding="utf-8"))
        except OSError as e:
            raise UsageError(f"cannot read config {args.config}: {e}")
        except ValidationError as e:
            raise UsageError(f"invalid config {args.config}: {e.errors()[0]['msg']}")
    config = _sweep_config(args, base)

    report = full_report(config)
    _emit(dumps_json(report.to_document()), args.out)
    for record in report.claims:
        sys.stdout.write(f"{'PASS' if record.passed else 'FAIL'} {record.id}\n")
    sys.stdout.write(f"{sum(r.passed for r in report.claims)}/{len(report.claims)} claims passed\n")
    return EXIT_OK if report.passed else EXIT_FAILED


COMMANDS = {
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "rayleigh": cmd_rayleigh,
    "verify": cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    global logger
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    logger = setup_logging("spectra_cli", getattr(logging, args.log_level), args.log_dir)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InvalidProblemError) as e:
        logger.error("usage_error", command=args.command, error=str(e))
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"spectra_cli: error: {e}\n")
        return EXIT_USAGE
    except SpectralToolkitError as e:
        logger.error("numerical_failure", command=args.command, error=str(e))
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
