"""Command-line entry point of the degree lab.

Exit codes: 0 success, 2 configuration error, 3 resolution error,
4 internal consistency error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Sequence, TextIO

import voluptuous as vol

from .config import build_config
from .const import (
    COEFFICIENTS,
    DEGREE_METHODS,
    EXIT_CONFIG,
    EXIT_INTERNAL,
    EXIT_OK,
    FAMILIES,
    OUTPUT_FORMATS,
    PREDICATE_KEYS,
    SOBOLEV_SPACES,
    VERSION,
)
from .exceptions import DegreeLabError, ResolutionError
from .runner import ExperimentRunner, RunResult, wants_table

_LOGGER = logging.getLogger(__name__)

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    common.add_argument("--out", help="output file (stdout when omitted)")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="output format of tabular commands")
    common.add_argument("--seed", type=int, help="seed of randomized checks")
    common.add_argument("--catalog", help="catalog JSON replacing the shipped one")
    common.add_argument("--dry-run", action="store_true", help="print the parsed configuration and exit")

    parser = argparse.ArgumentParser(prog="degree-lab", description="Degree theory laboratory")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    commands = parser.add_subparsers(dest="subcommand", required=True)

    young = commands.add_parser("young-check", parents=[common], help="check the conditions on a Young function")
    young.add_argument("young", help="Young function, e.g. powlog:n=2,a=1")
    young.add_argument("--n", type=int, help="dimension (default 2)")

    degree = commands.add_parser("degree", parents=[common], help="mapping degree of a map")
    degree.add_argument("--map", required=True, help="map descriptor, e.g. bubble:k=8")
    degree.add_argument("--mesh", required=True, help="domain mesh, e.g. s2:512x16")
    degree.add_argument("--method", choices=DEGREE_METHODS)
    degree.add_argument("--value", help="regular value for the preimage method, phi,theta")
    degree.add_argument("--fd-check", type=int, metavar="COUNT", help="finite-difference check at COUNT nodes")

    for name, title in (("energy", "energy decay experiment"), ("paradox", "degree and energy along a family")):
        experiment = commands.add_parser(name, parents=[common], help=title)
        experiment.add_argument("--family", required=True, choices=sorted(FAMILIES))
        experiment.add_argument("--gauge", required=True, help="exponent p or Young function descriptor")
        experiment.add_argument("--k", dest="k_list", required=True, help="comma separated orders, e.g. 4,8,16,32,64")

    homology = commands.add_parser("homology", parents=[common], help="homology of a space")
    homology.add_argument("--space", required=True, help="e.g. lens:m=5,dim=3, a catalog name or file:<path>")
    homology.add_argument("--coeff", dest="coefficients", choices=COEFFICIENTS)

    verdict = commands.add_parser("verdict", parents=[common], help="evaluate a predicate on a catalog target")
    verdict.add_argument("--target", required=True)
    verdict.add_argument("--predicate", choices=PREDICATE_KEYS)
    verdict.add_argument("--n", type=int, help="domain dimension for homotopy predicates")
    verdict.add_argument("--domain", help="domain catalog entry for homotopy predicates (default S^n)")
    verdict.add_argument("--p", type=float, help="Sobolev exponent")
    verdict.add_argument("--space", dest="sobolev_space", choices=SOBOLEV_SPACES)

    commands.add_parser("catalog-list", parents=[common], help="list the manifold catalog")

    dump = commands.add_parser("mesh-dump", parents=[common], help="write mesh nodes and weights as CSV")
    dump.add_argument("--mesh", required=True)
    return parser


def configure_logging(verbosity: int) -> None:
    logging.basicConfig(
        level=LOG_LEVELS[min(verbosity, len(LOG_LEVELS) - 1)],
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def json_safe(value: Any) -> Any:
    """Replace non-finite floats by None, recursively."""
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {key: json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(item) for item in value]
    return value


def render(result: RunResult, config_json: str, table: bool) -> str:
    """CSV with config and version header lines, or sorted JSON."""
    if table:
        buffer = io.StringIO()
        buffer.write(f"# config: {config_json}\n")
        buffer.write(f"# version: {VERSION}\n")
        writer = csv.DictWriter(buffer, fieldnames=list(result.columns), extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in result.rows:
            writer.writerow(json_safe(row))
        return buffer.getvalue()
    document = dict(result.document)
    document["version"] = VERSION
    return json.dumps(json_safe(document), sort_keys=True, indent=2) + "\n"


def _emit(text: str, out: str | None, stdout: TextIO) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


def _raw_config(args: argparse.Namespace) -> dict[str, Any]:
    raw = {key: value for key, value in vars(args).items() if key not in ("verbose", "dry_run")}
    return {key: value for key, value in raw.items() if value is not None}


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    """Parse arguments, run the subcommand and write its output.

    Returns:
        Process exit code
    """
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    config = None
    try:
        config = build_config(_raw_config(args))
        runner = ExperimentRunner(config)
        runner.prepare()
        if args.dry_run:
            stdout.write(config.to_json() + "\n")
            return EXIT_OK
        result = runner.run()
        # mesh-dump writes its nodes to --out; the summary goes to stdout
        out = None if config.subcommand == "mesh-dump" else config.out
        _emit(render(result, config.to_json(), wants_table(config)), out, stdout)
        return EXIT_OK
    except vol.Invalid as err:
        _LOGGER.error("Invalid configuration: %s", err)
        return EXIT_CONFIG
    except ResolutionError as err:
        _LOGGER.error("%s", err)
        partial = getattr(err.partial, "to_dict", None)
        if partial is not None and config is not None:
            document = {"aborted": str(err), "partial": partial(), "config": config.to_dict()}
            _emit(render(RunResult(document), config.to_json(), False), config.out, stdout)
        return err.exit_code
    except DegreeLabError as err:
        _LOGGER.error("%s", err)
        return err.exit_code
    except Exception:  # noqa: BLE001
        _LOGGER.exception("Unexpected failure")
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())
