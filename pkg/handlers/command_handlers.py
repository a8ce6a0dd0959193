"""Command handlers for the entropy commands.

This module contains the handler functions behind `entropy finite`,
`entropy rowfinite`, `entropy cover` and `entropy metric`. Each handler
runs its pipeline, builds a report document and returns it with the exit
code of the command.
"""

import logging
import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from config import RunConfig
from entropy.covers import cover_entropy_estimate, renewal_cover, word_cover
from entropy.graphs import (
    finite_graph_entropy_pathcount,
    finite_graph_entropy_spectral,
    oracle_agreement,
    rowfinite_entropy_sup,
)
from entropy.metric import KSpec, entropy_estimate
from graphs.builtins import RenewalUltragraph, from_spec
from graphs.model import Ultragraph
from graphs.parser import load_graph
from systems.shift_space import GraphShiftSystem
from utils.errors import UnknownFamily
from utils.formatting import make_document

# Set up logging
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_DISAGREE = 3

Report = Tuple[Dict[str, Any], int]


def load_subject(builtin: Optional[str] = None, path: Optional[str] = None) -> Ultragraph:
    """Load a presentation from a graph file or a built-in spec string.

    Args:
        builtin: Spec string such as "rose:3" or "rose:3+ladder"
        path: Path of a graph file

    Returns:
        The presentation

    Raises:
        ValueError: Neither or both sources given
        GraphParseError: The file is malformed
        UnknownFamily: The spec names no built-in family
    """
    if (builtin is None) == (path is None):
        raise ValueError("give exactly one of a built-in spec or a graph file")
    if path is not None:
        return load_graph(path)
    return from_spec(builtin)


def _require_finite(g: Ultragraph) -> None:
    if g.num_edges is None or g.emitters():
        raise ValueError(f"{g.name} is not a finite presentation")


def cmd_entropy_finite(g: Ultragraph, run: RunConfig) -> Report:
    """Entropy of a finite graph by path counting and by the spectral radius.

    Args:
        g: A finite presentation
        run: Run settings (n_max, tolerance)

    Returns:
        Report document and exit code (EXIT_DISAGREE when the two pipelines disagree)
    """
    _require_finite(g)
    counting = finite_graph_entropy_pathcount(g, run.n_max)
    spectral = finite_graph_entropy_spectral(g, run.tolerance)
    agreement = oracle_agreement(g, run.n_max, run.tolerance)
    lo, hi = spectral.entropy_interval
    rows = [
        {"n": n, "paths": count, "h_n": value}
        for n, (count, value) in enumerate(zip(counting.counts, counting.values), start=1)
    ]
    summary = {
        "pathcount_estimate": counting.estimate,
        "cesaro": counting.cesaro,
        "trend": counting.trend,
        "spectral_radius": spectral.lam,
        "spectral_entropy": spectral.entropy,
        "entropy_lo": lo,
        "entropy_hi": hi,
        "iterations": spectral.iterations,
        "converged": spectral.converged,
        "allowed_gap": agreement.bound,
        "agreement": agreement.agrees,
    }
    document = make_document("entropy finite", g.name, ["n", "paths", "h_n"], rows, summary)
    if not agreement.agrees:
        logger.error(f"Finite pipelines disagree on {g.name}: {agreement.pathcount} vs {agreement.spectral}")
        return document, EXIT_DISAGREE
    return document, EXIT_OK


def cmd_entropy_rowfinite(family: Ultragraph, run: RunConfig) -> Report:
    """Running supremum of subgraph entropies along the configured edge budgets."""
    report = rowfinite_entropy_sup(family, run.budgets, run.tolerance, run.threads)
    rows = [
        {"budget": budget, "entropy_lo": lo, "entropy_hi": hi, "running_sup": sup}
        for budget, (lo, hi), sup in zip(report.budgets, report.intervals, report.running_sup)
    ]
    summary = {
        "estimate": report.estimate,
        "monotone": report.monotone,
        "diverging": report.diverging,
        "skipped": ",".join(str(b) for b in report.skipped),
    }
    columns = ["budget", "entropy_lo", "entropy_hi", "running_sup"]
    return make_document("entropy rowfinite", family.name, columns, rows, summary), EXIT_OK


def _renewal_index(spec: str) -> Optional[int]:
    name, _, raw = spec.strip().partition(":")
    if name != "renewal":
        return None
    try:
        m = int(raw) if raw else 1
    except ValueError:
        raise UnknownFamily(f"bad parameter {raw!r} in {spec!r}")
    if m < 1:
        raise ValueError(f"renewal cover index must be positive, got {m}")
    return m


def cmd_entropy_cover(spec: Optional[str], run: RunConfig, path: Optional[str] = None, depth: int = 1) -> Report:
    """Cover entropy from the exact counts N(α_n, X_n), n ≤ n_max.

    "renewal:m" selects the cover α^m of the renewal shift; any other spec
    or a graph file selects the depth-`depth` word cover of a finite graph.

    Returns:
        Report document and exit code (EXIT_DISAGREE when a renewal count
        is not 2^n · M)
    """
    m = _renewal_index(spec) if spec is not None else None
    if m is not None:
        g = RenewalUltragraph()
        renewal = renewal_cover(m, g)
        cover, size = renewal.cover, renewal.size
    else:
        g = load_subject(spec, path)
        _require_finite(g)
        cover = word_cover(g, depth)
        size = len(cover)
    report = cover_entropy_estimate(cover, GraphShiftSystem(g), run.n_max, run.threads)
    sequence = report.sequence
    ratios: List[Optional[float]] = [None] + sequence.ratios
    running: List[Optional[float]] = [None] + sequence.running_inf
    rows = [
        {"n": n, "count": count, "ratio": ratios[n], "running_inf": running[n]}
        for n, count in enumerate(sequence.counts)
    ]
    summary: Dict[str, Any] = {
        "members": size,
        "method": report.method,
        "estimate": report.estimate,
        "slope": report.slope,
        "bound_gap": math.log(size) / run.n_max,
        "subadditive": not sequence.subadditivity_violations(),
    }
    code = EXIT_OK
    if m is not None:
        exact = all(c == 2 ** n * size for n, c in enumerate(sequence.counts))
        summary["doubling"] = report.doubling
        summary["exact_counts"] = exact
        if not (exact and report.doubling):
            logger.error(f"Renewal counts of α^{m} are not 2^n·{size}: {sequence.counts}")
            code = EXIT_DISAGREE
    document = make_document("entropy cover", report.cover, ["n", "count", "ratio", "running_inf"], rows, summary)
    return document, code


def cmd_entropy_metric(g: Ultragraph, run: RunConfig, metric: str = "dX") -> Report:
    """Metric entropy estimate from ssep counts over the dyadic radii 1/2^j of the run."""
    system = GraphShiftSystem(g, metric=metric)
    schedule = [Fraction(1, 2 ** j) for j in sorted(set(run.eps_exponents))]
    budget = None if g.num_edges is not None else max(run.budgets)
    report = entropy_estimate(system, KSpec(run.depth, budget), schedule, run.n_max, threads=run.threads)
    rows = []
    for eps in report.eps_schedule:
        for n, (count, value) in enumerate(zip(report.counts[eps], report.h[eps]), start=1):
            rows.append({"eps": eps, "n": n, "ssep": count, "h_n": value})
    summary: Dict[str, Any] = {
        "method": report.method,
        "window": f"{report.window[0]}..{report.window[1]}",
        "estimate": report.estimate,
        "exact": report.exact,
        "monotone_in_eps": report.monotone_in_eps,
    }
    for eps in report.eps_schedule:
        summary[f"slope[{eps}]"] = report.slopes[eps]
        summary[f"limsup_window[{eps}]"] = report.limsup_window[eps]
    return make_document("entropy metric", system.name, ["eps", "n", "ssep", "h_n"], rows, summary), EXIT_OK
