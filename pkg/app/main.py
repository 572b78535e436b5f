"""
Command-line entry point for the extrinsic triples toolkit.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError

from app import __version__
from app.commands import catalog, extend, geometry, verify
from app.core.config import override_settings
from app.core.exceptions import TripleError
from app.core.logging import RunLogger, configure_logging, get_logger
from app.services.report import dumps_summary, summarize

logger = get_logger(__name__)

USAGE_EXIT = 2


def run_report(args: argparse.Namespace) -> int:
    summary = summarize(args.files)
    sys.stdout.write(dumps_summary(summary))
    return summary.exit_code


def common_parser() -> argparse.ArgumentParser:
    """Flags shared by every subcommand."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--tolerance-curvature", type=float, help="Override the curvature tolerance")
    parent.add_argument("--tolerance-manifold", type=float, help="Override the manifold tolerance")
    parent.add_argument("--grid", type=int, help="Grid points per parameter for embed")
    parent.add_argument("--seed", type=int, help="Seed for random probes")
    parent.add_argument("--out", type=Path, help="Write the artifact to this path")
    parent.add_argument("--text", action="store_true", help="Print the report as text instead of JSON")
    parent.add_argument("--log-level", help="Log level (default: from TRIPLES_LOG_LEVEL)")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triples",
        description="Build and verify extrinsic symmetric triples and their embeddings",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    parents = [common_parser()]

    catalog.register(subparsers, parents)
    verify.register(subparsers, parents)
    extend.register(subparsers, parents)
    geometry.register(subparsers, parents)

    report = subparsers.add_parser("report", parents=parents, help="Summarize run reports")
    report.add_argument("files", nargs="+", type=Path, help="report.v1 JSON files")
    report.set_defaults(handler=run_report)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand; 0 all checks pass, 1 a check failed, 2 bad input or usage."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        return int(exc.code or 0)

    configure_logging(level=args.log_level)
    run_logger = RunLogger(__name__, command=args.command)
    try:
        with override_settings(
            tolerance_curvature=args.tolerance_curvature,
            tolerance_manifold=args.tolerance_manifold,
            default_grid=args.grid,
            default_seed=args.seed,
        ):
            return args.handler(args)
    except TripleError as exc:
        run_logger.log_error(exc, {"argv": list(argv) if argv is not None else sys.argv[1:]})
        sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
        return USAGE_EXIT
    except ValidationError as exc:
        # pydantic rejects out-of-range overrides
        logger.error("Invalid option", error=str(exc))
        sys.stderr.write(json.dumps({"code": "usage", "message": str(exc)}, sort_keys=True) + "\n")
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
