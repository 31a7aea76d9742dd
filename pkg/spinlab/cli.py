"""
Command-line entry point.

    spinlab verify {coroots,steinberg,clifford,tori,arith} [--seed N] [--dim D]
    spinlab verify --file CERTIFICATE.json
    spinlab approx unit A I | approx pair A1 A2 I [--t T] | approx spinpair A1 A2 I [--dim D]
    spinlab width {fa,fs} M [--element LABEL] [--cap N] [--dim D]
    spinlab report

JSON goes to stdout (and to --output when given), logs go to stderr.
Exit codes: 0 ok, 1 identity or verification failure, 2 usage, 3 sampled width.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from . import __version__
from .config.settings import settings
from .main import SpinLab, dumps, write_json
from .schemas.run_schemas import APPROX_KINDS, SUITES, RunConfig

# Set up logger
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_SAMPLED = 3

USAGE_ERRORS = ("precondition", "not_spin", "config")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinlab", description="Exact Spin-group arithmetic and certificates")
    parser.add_argument("--version", action="version", version=f"spinlab {__version__}")
    parser.add_argument("--log-level", default=None, help="Logging level (default: LOG_LEVEL or INFO)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    verify = sub.add_parser("verify", help="Run an identity suite or re-check a certificate file")
    verify.add_argument("suite", nargs="?", choices=SUITES)
    verify.add_argument("--file", help="Certificate to re-verify independently")
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--dim", type=int, default=None)
    verify.add_argument("--output", default=None)

    approx = sub.add_parser("approx", help="Build an approximation certificate")
    approx.add_argument("kind", choices=APPROX_KINDS)
    approx.add_argument("values", nargs="+", help="Targets followed by the odd generator of I")
    approx.add_argument("--t", type=int, default=None, help="Torus parameter for pair")
    approx.add_argument("--dim", type=int, default=None)
    approx.add_argument("--cap-primes", type=int, default=None)
    approx.add_argument("--foya-cap", type=int, default=None)
    approx.add_argument("--output", default=None)

    width = sub.add_parser("width", help="Conjugacy width in a finite quotient")
    width.add_argument("form", choices=("fa", "fs"))
    width.add_argument("modulus", type=int)
    width.add_argument("--element", default="id")
    width.add_argument("--cap", type=int, default=None)
    width.add_argument("--dim", type=int, default=4)
    width.add_argument("--seed", type=int, default=None)
    width.add_argument("--output", default=None)

    report = sub.add_parser("report", help="Re-derive the pinned numbers")
    report.add_argument("--seed", type=int, default=None)
    report.add_argument("--output", default=None)
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    fields: Dict[str, Any] = {"subcommand": args.subcommand}
    for name in ("suite", "kind", "seed", "dim", "output"):
        value = getattr(args, name, None)
        if value is not None:
            fields[name] = value
    if getattr(args, "cap", None) is not None:
        fields["cap_bfs"] = args.cap
    if getattr(args, "cap_primes", None) is not None:
        fields["cap_primes"] = args.cap_primes
    if getattr(args, "foya_cap", None) is not None:
        fields["foya_cap"] = args.foya_cap
    return RunConfig(**fields)


def exit_code(result: Dict[str, Any]) -> int:
    """Map a facade result onto the process exit code."""
    if result.get("success"):
        return EXIT_SAMPLED if result.get("sampled") else EXIT_OK
    if result.get("error_type") in USAGE_ERRORS:
        return EXIT_USAGE
    return EXIT_FAILURE


def _default_output(name: str) -> str:
    return str(Path(settings.output_dir) / f"{name}.json")


def _dispatch(args: argparse.Namespace, config: RunConfig) -> Dict[str, Any]:
    lab = SpinLab()
    if config.subcommand == "verify":
        if args.file:
            return lab.verify_file(args.file)
        if not config.suite:
            return {"success": False, "error": "verify needs a suite or --file", "error_type": "config"}
        return lab.verify_suite(config.suite, config.seed, config.dim)

    if config.subcommand == "approx":
        *targets, ideal = args.values
        try:
            generator = int(ideal)
        except ValueError:
            return {"success": False, "error": f"ideal generator {ideal!r} is not an integer", "error_type": "config"}
        result = lab.approx(config.kind, targets, generator, t=args.t, dim=config.dim)
        if result.get("success"):
            target = config.output or _default_output(f"approx_{config.kind}")
            result["file"] = write_json(target, result["certificate"])
        return result

    if config.subcommand == "width":
        result = lab.width(args.form, args.modulus, args.element, cap=config.cap_bfs,
                           dim=args.dim, seed=config.seed)
        if "report" in result:
            target = config.output or _default_output(f"width_{args.form}_{args.modulus}")
            result["file"] = write_json(target, result["report"])
        return result

    return lab.pinned_report(config.seed)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    logging.basicConfig(
        level=(args.log_level or settings.log_level).upper(),
        format="%(asctime)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )

    try:
        config = _run_config(args)
    except ValidationError as e:
        errors = [err["msg"] for err in e.errors()]
        logger.error(f"Invalid configuration: {errors}")
        sys.stdout.write(dumps({"success": False, "error": "; ".join(errors), "error_type": "config"}))
        return EXIT_USAGE

    settings.cap_primes = config.cap_primes
    settings.foya_cap = config.foya_cap

    result = _dispatch(args, config)
    if config.subcommand in ("verify", "report") and config.output:
        result["file"] = write_json(config.output, result)
    sys.stdout.write(dumps(result))
    code = exit_code(result)
    logger.info(f"spinlab {config.subcommand} finished with exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
