"""Command-line entry point for drentropy.

This module parses the command line, configures logging and dispatches to
the entropy and verification handlers. Exit codes: 0 ok, 1 verification
failure, 2 parse or usage error, 3 disagreement between pipelines.

Examples:
    drentropy entropy finite --builtin rose:3
    drentropy entropy rowfinite --builtin ladder --budgets 2,4,6,8
    drentropy entropy cover --builtin renewal:3 --nmax 16
    drentropy verify counterexamples
"""

import argparse
import logging
import sys
from typing import List, Optional, Sequence, Tuple

import config
from config import RunConfig
from handlers.command_handlers import (
    EXIT_USAGE,
    cmd_entropy_cover,
    cmd_entropy_finite,
    cmd_entropy_metric,
    cmd_entropy_rowfinite,
    load_subject,
)
from handlers.verify_handlers import SUITES, cmd_verify
from systems.shift_space import METRICS
from utils.errors import EntropyError, GraphParseError
from utils.formatting import format_failures, render

# Set up logging
logger = logging.getLogger(__name__)


def parse_int_list(raw: str) -> Tuple[int, ...]:
    """Parse "2,4,6" or a range "2..20" (step 2 with "2..20:2")."""
    raw = raw.strip()
    try:
        if ".." in raw:
            span, _, step = raw.partition(":")
            start, _, stop = span.partition("..")
            return tuple(range(int(start), int(stop) + 1, int(step) if step else 1))
        return tuple(int(part) for part in raw.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list or a range, got {raw!r}")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--nmax", type=int, default=config.DEFAULT_N_MAX, help="largest horizon n")
    parser.add_argument("--tol", type=float, default=config.DEFAULT_TOLERANCE, help="spectral tolerance")
    parser.add_argument("--format", choices=config.OUTPUT_FORMATS, default="table", dest="output_format")
    parser.add_argument("--out", help="write the report to FILE instead of stdout")
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    parser.add_argument("--threads", type=int, default=config.DR_ENTROPY_THREADS)


def _add_source(parser: argparse.ArgumentParser, required: bool = True) -> None:
    source = parser.add_mutually_exclusive_group(required=required)
    source.add_argument("--builtin", help="built-in spec, e.g. rose:3, ladder, renewal:2, rose:3+ladder:3")
    source.add_argument("--file", help="graph file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drentropy", description="Entropy of Deaconu-Renault systems and graph shifts")
    commands = parser.add_subparsers(dest="command", required=True)

    entropy = commands.add_parser("entropy", help="run an entropy pipeline")
    kinds = entropy.add_subparsers(dest="kind", required=True)

    finite = kinds.add_parser("finite", help="finite graph: path counting against the spectral radius")
    _add_source(finite)
    _add_common(finite)

    rowfinite = kinds.add_parser("rowfinite", help="supremum over finite subgraphs of a row-finite family")
    rowfinite.add_argument("--builtin", required=True)
    rowfinite.add_argument("--budgets", type=parse_int_list, default=tuple(range(2, 21, 2)))
    _add_common(rowfinite)

    cover = kinds.add_parser("cover", help="cover entropy from exact minimal subcover counts")
    _add_source(cover)
    cover.add_argument("--depth", type=int, default=1, help="word cover depth for finite graphs")
    _add_common(cover)

    metric = kinds.add_parser("metric", help="metric entropy from ssep counts")
    _add_source(metric)
    metric.add_argument("--metric", choices=[m for m in METRICS if m != "gurevich"], default="dX")
    metric.add_argument("--eps", type=parse_int_list, default=(1, 2, 3), help="dyadic exponents j of eps = 1/2^j")
    metric.add_argument("--depth", type=int, default=2, help="representative depth D")
    metric.add_argument("--budgets", type=parse_int_list, default=(8,), help="edge budget for infinite graphs")
    _add_common(metric)

    verify = commands.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=list(SUITES))
    _add_common(verify)
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    fields = {
        "n_max": args.nmax,
        "tolerance": args.tol,
        "output_format": args.output_format,
        "seed": args.seed,
        "threads": args.threads,
    }
    for name, attr in (("budgets", "budgets"), ("eps_exponents", "eps"), ("depth", "depth")):
        value = getattr(args, attr, None)
        if value is not None:
            fields[name] = value
    return RunConfig(**fields)


def dispatch(args: argparse.Namespace) -> Tuple[dict, int]:
    """Run the handler selected by the parsed arguments."""
    run = _run_config(args)
    if args.command == "verify":
        return cmd_verify(args.suite, run)
    if args.kind == "finite":
        return cmd_entropy_finite(load_subject(args.builtin, args.file), run)
    if args.kind == "rowfinite":
        return cmd_entropy_rowfinite(load_subject(args.builtin), run)
    if args.kind == "cover":
        return cmd_entropy_cover(args.builtin, run, path=args.file, depth=args.depth)
    return cmd_entropy_metric(load_subject(args.builtin, args.file), run, metric=args.metric)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run the command and write its report."""
    logging.basicConfig(
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        level=getattr(logging, config.LOG_LEVEL, logging.WARNING),
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        document, code = dispatch(args)
    except GraphParseError as e:
        logger.error(f"Error parsing graph: {str(e)}")
        print(f"drentropy: parse error at {str(e)}", file=sys.stderr)
        return EXIT_USAGE
    except (EntropyError, ValueError) as e:
        logger.error(f"Error running {args.command}: {str(e)}")
        print(f"drentropy: {str(e)}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"Error reading input: {str(e)}")
        print(f"drentropy: {str(e)}", file=sys.stderr)
        return EXIT_USAGE

    text = render(document, args.output_format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "verify" and code:
        failures: List[dict] = [row for row in document["rows"] if not row["passed"]]
        sys.stderr.write(format_failures(failures))
    return code


if __name__ == "__main__":
    sys.exit(main())
