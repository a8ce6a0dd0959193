"""Verification suite handlers.

This module contains the property suites behind `verify SUITE`. Every
suite returns a list of check rows {"check", "passed", "detail"}; the
command handler turns them into a report document and exit code 0 when
all checks pass, 1 otherwise.
"""

import logging
import random
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Dict, List, Tuple

from config import RunConfig
from entropy.covers import (
    FeketeSequence,
    cover_entropy_estimate,
    partition_counts,
    renewal_cover,
    verify_cover_lemmas,
    word_cover,
)
from entropy.graphs import restriction_check
from entropy.metric import (
    KSpec,
    closure_chain_check,
    SepSpanInstance,
    distance_matrix,
    entropy_estimate,
    max_separated,
    min_spanning,
    ssep_count,
    verify_sep_span_chain,
)
from entropy.solvers import exhaustive_max_clique, exhaustive_min_cover
from graphs.builtins import ForwardLadderFamily, RenewalUltragraph, from_spec, rose
from graphs.model import Ultragraph, count_paths
from handlers.command_handlers import EXIT_FAILED, EXIT_OK, Report
from systems.base import iterate_distance
from systems.binary import BinaryWord, PaddedBinary
from systems.interval import IntervalDoubling
from systems.shift_space import GraphShiftSystem, extend_least, modulus_table, representatives
from utils.formatting import make_document

# Set up logging
logger = logging.getLogger(__name__)

Check = Dict[str, Any]

ZEBRA_CORPUS = ("rose:1", "rose:2", "rose:3", "cycle:3", "ladder:2", "ladder:3", "rose:3+rose:2", "golden")
ZEBRA_MARGIN = 0.05
SEP_SPAN_INSTANCES = 100
ORACLE_INSTANCES = 200
ORACLE_MAX_POINTS = 12


def _check(name: str, passed: bool, detail: str) -> Check:
    return {"check": name, "passed": bool(passed), "detail": detail}


def _random_instance(rng: random.Random) -> SepSpanInstance:
    """A random exact instance on the doubling map, padded binary words or a rose shift."""
    n = rng.randint(1, 4)
    eps = Fraction(1, 2 ** rng.randint(1, 5))
    draw = rng.random()
    if draw < 0.25:
        k = rng.choice((2, 3))
        depth = rng.randint(1, 3 if k == 2 else 2)
        system = GraphShiftSystem(rose(k), metric="dX")
        points = representatives(system, depth, k, pad=n + 2).points
        return SepSpanInstance(system, tuple(points), n, eps)
    size = rng.randint(3, 10)
    if draw < 0.6:
        points = tuple(sorted(Fraction(k, 64) for k in rng.sample(range(64), size)))
        return SepSpanInstance(IntervalDoubling(), points, n, eps)
    words = set()
    while len(words) < size:
        words.add(tuple(0 if rng.random() < 0.6 else 1 for _ in range(12)))
    return SepSpanInstance(PaddedBinary(), tuple(BinaryWord(w) for w in sorted(words)), n, eps)


def suite_sep_span(run: RunConfig) -> List[Check]:
    """span ≤ sep ≤ span(ε/2) with the ssep/sspan chain, and the solvers against exhaustive search."""
    rng = random.Random(run.seed)
    checks: List[Check] = []
    failures = 0
    for index in range(SEP_SPAN_INSTANCES):
        inst = _random_instance(rng)
        report = verify_sep_span_chain(inst)
        if not report.passed:
            failures += 1
            checks.append(_check(f"chain #{index}", False, f"{inst.system.name}: {report.counterexample}"))
    checks.append(_check("sep/span chain", failures == 0, f"{SEP_SPAN_INSTANCES - failures}/{SEP_SPAN_INSTANCES} instances"))

    mismatches = 0
    for index in range(ORACLE_INSTANCES):
        inst = _random_instance(rng)
        points = inst.active_points()[:ORACLE_MAX_POINTS]
        inst = SepSpanInstance(inst.system, tuple(points), inst.n, inst.eps, "all")
        dist = distance_matrix(inst.system, points, inst.n)
        size = len(points)
        sep = max_separated(inst).cardinality
        sep_oracle = exhaustive_max_clique(size, lambda i, j: dist[i][j] > inst.eps)
        masks = [sum(1 << j for j in range(size) if i == j or dist[i][j] <= inst.eps) for i in range(size)]
        span = min_spanning(inst).cardinality
        span_oracle = exhaustive_min_cover((1 << size) - 1, masks)
        if (sep, span) != (sep_oracle, span_oracle):
            mismatches += 1
            checks.append(_check(f"oracle #{index}", False, f"sep {sep} vs {sep_oracle}, span {span} vs {span_oracle}"))
    checks.append(_check("exhaustive oracle", mismatches == 0, f"{ORACLE_INSTANCES - mismatches}/{ORACLE_INSTANCES} instances"))

    system = GraphShiftSystem(rose(2), metric="dX")
    eps = Fraction(1, 8)
    for n in range(1, 4):
        k = KSpec(depth=n + 1)
        classes = ssep_count(system, k, n, eps, "classes").count
        reps = ssep_count(system, k, n, eps, "representatives").count
        points = list(dict.fromkeys(representatives(system, n + 1, 2, pad=n + 2).points))
        dist = distance_matrix(system, points, n)
        oracle = exhaustive_max_clique(len(points), lambda i, j: dist[i][j] > eps)
        checks.append(_check(f"ssep rose:2 n={n}", classes == reps == oracle,
                             f"classes {classes}, representatives {reps}, brute force {oracle}"))

    doubling = IntervalDoubling()
    grid = [Fraction(k, 32) for k in range(32)]
    for n in range(2, 5):
        for eps in (Fraction(1, 4), Fraction(1, 8)):
            closure = closure_chain_check(doubling, grid, n, eps)
            checks.append(_check(
                f"closure n={n} eps={eps}", closure.sep_chain,
                f"sep {closure.sep_dom} <= {closure.sep_closure} <= {closure.sep_dom_half}, "
                f"span closure {closure.span_closure} vs dom {closure.span_dom}",
            ))
    return checks


def suite_cover_lemmas(run: RunConfig) -> List[Check]:
    """The cover inequalities, Fekete subadditivity and exact renewal doubling."""
    report = verify_cover_lemmas(n_max=4)
    checks = [_check(f"lemma {c.name}", c.passed, c.detail) for c in report.checks]
    g = RenewalUltragraph()
    n_max = min(run.n_max, 16)
    for m in range(1, 6):
        renewal = renewal_cover(m, g)
        counts = partition_counts(renewal.cover, n_max)
        expected = [2 ** n * renewal.size for n in range(n_max + 1)]
        checks.append(_check(f"renewal α^{m}", counts == expected, f"M={renewal.size}, N_{n_max}={counts[-1]}"))
        violations = FeketeSequence(counts).subadditivity_violations()
        checks.append(_check(f"fekete α^{m}", not violations, f"violations {violations[:3]}"))
    return checks


def _ladder_pairs(k_max: int) -> List[Tuple[Any, Any]]:
    g = ForwardLadderFamily()
    return [(extend_least(g, (2 * (k - 1),), 3), extend_least(g, (2 * k - 1,), 3)) for k in range(1, k_max + 1)]


def suite_metrics(run: RunConfig) -> List[Check]:
    """Directionality of the metric comparisons and the metric axioms of d_X."""
    checks: List[Check] = []
    system = GraphShiftSystem(ForwardLadderFamily(), metric="dX")
    pairs = _ladder_pairs(4)
    dx = [system.distance(x, y, "dX") for x, y in pairs]
    usual = [system.distance(x, y, "first_difference") for x, y in pairs]
    checks.append(_check("forward ladder d_X → 0", all(a > b for a, b in zip(dx, dx[1:])),
                         ", ".join(str(v) for v in dx)))
    checks.append(_check("forward ladder d = 1/2", all(v == Fraction(1, 2) for v in usual),
                         ", ".join(str(v) for v in usual)))
    table = modulus_table(system, "dX", "first_difference", pairs)
    checks.append(_check("no modulus for d_X → d", table.moduli[Fraction(1, 2)] is None,
                         f"largest d below δ: {[str(v) for v in table.max_b[:5]]}"))
    reverse = modulus_table(system, "first_difference", "dX", pairs)
    checks.append(_check("modulus for d → d_X", reverse.moduli[Fraction(1, 2)] is not None,
                         f"modulus at 1/2: {reverse.moduli[Fraction(1, 2)]}"))

    r2 = GraphShiftSystem(rose(2), metric="dX")
    points = representatives(r2, 2, 2).points
    symmetric = all(r2.base_distance(x, y) == r2.base_distance(y, x) for x, y in combinations(points, 2))
    triangle = all(
        r2.base_distance(x, z) <= r2.base_distance(x, y) + r2.base_distance(y, z)
        for x in points for y in points for z in points
    )
    checks.append(_check("d_X symmetric", symmetric, f"{len(points)} representatives of rose:2"))
    checks.append(_check("d_X triangle", triangle, f"{len(points) ** 3} triples"))

    golden = from_spec("golden")
    fd = GraphShiftSystem(golden, metric="first_difference")
    for k in (2, 3, 4):
        counts = ssep_count(fd, KSpec(depth=1), 6, Fraction(1, 2 ** k), "classes").count
        paths = count_paths(golden, 6 + k - 2).count
        checks.append(_check(f"first-difference ssep k={k}", counts == paths, f"ssep {counts}, |p^{6 + k - 2}| {paths}"))

    checks.extend(_d1_checks(golden))
    checks.extend(_order_checks(golden))
    checks.extend(_order_entropy_checks(run))
    return checks


def _d1_checks(golden: Ultragraph) -> List[Check]:
    """d_1 against d_X: equal on a rose, uniformly equivalent on golden."""
    g = rose(2)
    dx = GraphShiftSystem(g, metric="dX")
    points = representatives(dx, 2, 2).points
    pairs = list(combinations(points, 2))
    same = modulus_table(dx, "dX", "d1", pairs)
    checks = [_check("d_1 = d_X on rose:2", all(a == b for a, b in same.pairs),
                     f"{len(pairs)} pairs of representatives")]
    system = GraphShiftSystem(golden, metric="dX")
    pairs = list(combinations(representatives(system, 2, 3).points, 2))
    for a, b in (("dX", "d1"), ("d1", "dX")):
        table = modulus_table(system, a, b, pairs)
        half = table.moduli[Fraction(1, 2)]
        checks.append(_check(f"golden {a} → {b} modulus", half is not None, f"modulus at 1/2: {half}"))
    return checks


def _order_checks(golden: Ultragraph) -> List[Check]:
    """d_X under the shortlex and reverse enumerations are uniformly equivalent."""
    checks: List[Check] = []
    for g in (rose(2), golden):
        shortlex = GraphShiftSystem(g, metric="dX")
        reverse = GraphShiftSystem(g, metric="dX", order="reverse")
        pairs = list(combinations(representatives(shortlex, 2, 3).points, 2))
        for a, b in ((shortlex, reverse), (reverse, shortlex)):
            table = modulus_table(a, "dX", "dX", pairs, other=b)
            half = table.moduli[Fraction(1, 2)]
            checks.append(_check(f"{g.name} {table.metric_a} → {table.metric_b} modulus", half is not None,
                                 f"modulus at 1/2: {half}"))
    return checks


def _order_entropy_checks(run: RunConfig) -> List[Check]:
    """The metric entropy estimate does not depend on the enumeration order."""
    checks: List[Check] = []
    eps = Fraction(1, 4096)
    n_max = min(run.n_max, 10)
    for spec in ("rose:2", "rose:3", "golden"):
        g = from_spec(spec)
        h = [entropy_estimate(GraphShiftSystem(g, metric="dX", order=order), KSpec(depth=1), [eps], n_max,
                              threads=run.threads).estimate
             for order in ("shortlex", "reverse")]
        checks.append(_check(f"order invariance {spec}", abs(h[0] - h[1]) <= ZEBRA_MARGIN,
                             f"shortlex {h[0]:.6f}, reverse {h[1]:.6f}"))
    return checks


def suite_zebra(run: RunConfig) -> List[Check]:
    """Cover entropy at most metric entropy on the finite corpus."""
    checks: List[Check] = []
    eps = Fraction(1, 8)
    for spec in ZEBRA_CORPUS:
        g = from_spec(spec)
        cover = cover_entropy_estimate(word_cover(g, 1), None, run.n_max, run.threads)
        system = GraphShiftSystem(g, metric="first_difference")
        metric = entropy_estimate(system, KSpec(depth=1), [eps], run.n_max, threads=run.threads)
        slope_ok = cover.slope <= metric.estimate + ZEBRA_MARGIN
        inf_ok = cover.estimate <= metric.limsup_window[eps] + ZEBRA_MARGIN
        checks.append(_check(f"zebra {spec}", slope_ok and inf_ok,
                             f"cover slope {cover.slope:.6f} / metric slope {metric.estimate:.6f}, "
                             f"cover inf {cover.estimate:.6f} / metric window {metric.limsup_window[eps]:.6f}"))
    union = restriction_check(from_spec("rose:3+ladder:3"))
    checks.append(_check("restriction rules", union.passed,
                         f"pieces {[round(h, 9) for h in union.pieces]}, whole {union.whole:.9f}"))
    return checks


def suite_counterexamples(run: RunConfig) -> List[Check]:
    """Exact d_n values where d_n is not a metric outside Dom(σ^{n-1})."""
    interval = IntervalDoubling()
    zero, quarter, far = Fraction(0), Fraction(1, 4), Fraction(6, 25)
    d_far = iterate_distance(interval, zero, far, 3)
    d_sum = iterate_distance(interval, zero, quarter, 3) + iterate_distance(interval, quarter, far, 3)
    checks = [
        _check("d_3(0, 6/25)", d_far == Fraction(24, 25), str(d_far)),
        _check("d_3(0, 1/4) + d_3(1/4, 6/25)", d_sum == Fraction(13, 25), str(d_sum)),
        _check("triangle fails on the doubling map", d_far > d_sum, f"{d_far} > {d_sum}"),
    ]
    padded = PaddedBinary()
    x, y, z = (BinaryWord.parse(w) for w in ("000111111111", "000011111111", "001111111111"))
    expected = {"d_2(x, y)": ((x, y), Fraction(1)), "d_2(x, z)": ((x, z), Fraction(1, 4)),
                "d_2(z, y)": ((z, y), Fraction(1, 4))}
    for name, ((a, b), value) in expected.items():
        got = iterate_distance(padded, a, b, 2)
        checks.append(_check(name, got == value, str(got)))
    return checks


SUITES: Dict[str, Callable[[RunConfig], List[Check]]] = {
    "sep-span": suite_sep_span,
    "cover-lemmas": suite_cover_lemmas,
    "metrics": suite_metrics,
    "zebra": suite_zebra,
    "counterexamples": suite_counterexamples,
}


def cmd_verify(suite: str, run: RunConfig) -> Report:
    """Run a verification suite.

    Args:
        suite: One of SUITES
        run: Run settings (seed, n_max, threads)

    Returns:
        Report document and exit code (EXIT_FAILED when any check fails)

    Raises:
        ValueError: Unknown suite
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
    checks = SUITES[suite](run)
    failed = [c for c in checks if not c["passed"]]
    summary = {"checks": len(checks), "failed": len(failed), "passed": not failed}
    document = make_document("verify", suite, ["check", "passed", "detail"], checks, summary)
    if failed:
        logger.error(f"Suite {suite}: {len(failed)} of {len(checks)} checks failed")
        return document, EXIT_FAILED
    logger.info(f"Suite {suite}: all {len(checks)} checks passed")
    return document, EXIT_OK
