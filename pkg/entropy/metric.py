"""Metric entropy of Deaconu-Renault systems.

This module provides separated and spanning set cardinalities over finite
point sets, the ssep/sspan reductions, exact class counting for the
ultrametric graph-shift metrics, and the entropy estimation pipeline that
turns ssep counts into per-ε growth rates.
"""

import logging
import math
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple, Union

import config
from entropy.solvers import SolverResult, max_clique, min_closed_domination, relation_graph
from systems.base import DRSystem, iterate_distance
from systems.interval import IntervalDoubling
from systems.shift_space import (
    GraphShiftSystem,
    Ultrapath,
    admissible_words,
    density,
    representatives,
    segment_status,
)
from utils.errors import BudgetExceeded, DensityInsufficient

# Set up logging
logger = logging.getLogger(__name__)

RESTRICTIONS = ("dom", "all")


@dataclass(frozen=True)
class SepSpanInstance:
    """A finite point set with a horizon n and a radius eps.

    With restriction "dom" only the points of Dom(σ^{n-1}) take part,
    which is where d_n is a metric.
    """

    system: DRSystem
    points: Tuple[Any, ...]
    n: int
    eps: Fraction
    restriction: str = "dom"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"horizon must be positive, got {self.n}")
        if self.eps <= 0:
            raise ValueError(f"radius must be positive, got {self.eps}")
        if self.restriction not in RESTRICTIONS:
            raise ValueError(f"unknown restriction {self.restriction}")
        if len(set(self.points)) != len(self.points):
            raise ValueError("instance points must be pairwise distinct")

    def active_points(self) -> List[Any]:
        if self.restriction == "all":
            return list(self.points)
        return [x for x in self.points if self.system.in_domain(x, self.n - 1)]

    def with_eps(self, eps: Fraction) -> "SepSpanInstance":
        return replace(self, eps=Fraction(eps))


class KSpec(NamedTuple):
    """K given by one representative per depth-D cylinder over the first edge_budget edges.

    An edge_budget of None takes every edge of a finite presentation.
    """

    depth: int
    edge_budget: Optional[int] = None
    pad: int = 2


class SsepCount(NamedTuple):
    count: int
    exact: bool
    method: str


def distance_matrix(system: DRSystem, points: Sequence[Any], n: int) -> List[List[Fraction]]:
    """All pairwise d_n values, computed once per unordered pair."""
    size = len(points)
    matrix = [[Fraction(0)] * size for _ in range(size)]
    for i, j in combinations(range(size), 2):
        matrix[i][j] = matrix[j][i] = iterate_distance(system, points[i], points[j], n)
    return matrix


def _map_witness(result: SolverResult, points: Sequence[Any]) -> SolverResult:
    return replace(result, witness=tuple(points[i] for i in result.witness))


def max_separated(inst: SepSpanInstance) -> SolverResult:
    """Largest subset with pairwise d_n > eps (maximum clique of the separation graph).

    Returns:
        SolverResult whose witness holds the chosen points
    """
    points = inst.active_points()
    dist = distance_matrix(inst.system, points, inst.n)
    graph = relation_graph(len(points), lambda i, j: dist[i][j] > inst.eps)
    return _map_witness(max_clique(graph), points)


def min_spanning(inst: SepSpanInstance) -> SolverResult:
    """Smallest subset B with every point within d_n ≤ eps of B (closed domination)."""
    points = inst.active_points()
    dist = distance_matrix(inst.system, points, inst.n)
    graph = relation_graph(len(points), lambda i, j: dist[i][j] <= inst.eps)
    return _map_witness(min_closed_domination(graph), points)


def _span_on(points: Sequence[Any], dist: List[List[Fraction]], members: Sequence[int], eps: Fraction) -> int:
    graph = relation_graph(len(members), lambda i, j: dist[members[i]][members[j]] <= eps)
    return min_closed_domination(graph).cardinality


def sspan_exact(inst: SepSpanInstance, limit: int = config.EXACT_SSPAN_LIMIT) -> SolverResult:
    """sspan on a finite sample: the largest span over subsets of the points in Dom(σ^{n-1}).

    Above `limit` points the value is reported as the interval
    [span(2·eps), sep(eps)] on the whole sample, flagged inexact.
    """
    points = [x for x in inst.points if inst.system.in_domain(x, inst.n - 1)]
    dist = distance_matrix(inst.system, points, inst.n)
    size = len(points)
    if size == 0:
        return SolverResult(0, (), True, 0, 0)
    if size > limit:
        dom = replace(inst, points=tuple(points), restriction="dom")
        lower = min_spanning(dom.with_eps(2 * inst.eps)).cardinality
        upper = max_separated(dom).cardinality
        logger.warning(f"sspan on {size} points reported as the bound [{lower}, {upper}]")
        return SolverResult(lower, (), False, lower, upper)
    best, best_subset = 0, ()
    for k in range(1, size + 1):
        for subset in combinations(range(size), k):
            value = _span_on(points, dist, subset, inst.eps)
            if value > best:
                best, best_subset = value, subset
    return SolverResult(best, tuple(points[i] for i in best_subset), True, best, best)


def dyadic_level(eps: Fraction) -> int:
    """Smallest k ≥ 1 with 1/2^k ≤ eps."""
    k = 1
    while Fraction(1, 2 ** k) > eps:
        k += 1
    return k


def _window_labeller(system: GraphShiftSystem, k: int) -> Tuple[int, Callable[[Tuple[int, ...]], Tuple]]:
    """Window length r and the label whose equality on a window means d ≤ 1/2^k."""
    if system.metric == "first_difference":
        return max(1, k - 1), lambda w: w[:k - 1]
    g = system.graph
    items = system.enumeration.items(k - 1)
    width = max((len(item.word) for item in items), default=0) + 1
    return width, lambda w: tuple(segment_status(g, item, Ultrapath(w)) for item in items)


def class_counts(system: GraphShiftSystem, n_max: int, eps: Fraction) -> List[int]:
    """Exact ssep(n, eps, X) for n = 1..n_max on a finite presentation.

    For the ultrametric metrics "d_n ≤ eps" is an equivalence relation on
    Dom(σ^{n-1}), so sep and span both equal the number of classes. A class
    is the sequence of window labels along the first n shifts; distinct
    sequences are counted through the subset construction over windows.

    Args:
        system: Shift space of a finite presentation under dX, d1 or first_difference
        n_max: Largest horizon
        eps: Radius

    Returns:
        Counts indexed by n - 1
    """
    g = system.graph
    if g.num_edges is None or g.emitters():
        raise ValueError(f"class counting needs a finite presentation, {g.name} is infinite")
    if system.metric == "gurevich":
        raise ValueError("class counting needs an ultrametric; the Gurevich metric is not one")
    k = dyadic_level(eps)
    width, label = _window_labeller(system, k)
    groups: Dict[Tuple, set] = defaultdict(set)
    for window in admissible_words(g, width, g.num_edges):
        groups[label(window)].add(window)
    states: Counter = Counter(frozenset(group) for group in groups.values())
    transitions: Dict[FrozenSet, List[FrozenSet]] = {}

    def step(state: FrozenSet) -> List[FrozenSet]:
        if state not in transitions:
            nxt: Dict[Tuple, set] = defaultdict(set)
            for window in state:
                for e in g.successors(window[-1]):
                    moved = window[1:] + (e,)
                    nxt[label(moved)].add(moved)
            transitions[state] = [frozenset(group) for group in nxt.values()]
        return transitions[state]

    counts = [sum(states.values())]
    for _ in range(n_max - 1):
        following: Counter = Counter()
        for state, count in states.items():
            for target in step(state):
                following[target] += count
        states = following
        counts.append(sum(states.values()))
    logger.debug(f"Class counts of {system.name} at eps={eps}: {len(transitions)} window states")
    return counts


def _representative_instance(system: GraphShiftSystem, k: KSpec, n: int, eps: Fraction) -> SepSpanInstance:
    g = system.graph
    budget = k.edge_budget if k.edge_budget is not None else g.num_edges
    if budget is None:
        raise ValueError(f"{g.name} is infinite, an edge budget is required")
    delta = density(system, k.depth - n + 1)
    if delta > eps / 4:
        logger.warning(f"Depth {k.depth} too shallow for n={n}, eps={eps}: density {delta}")
        raise DensityInsufficient(delta, eps)
    reps = representatives(system, k.depth, budget, pad=max(k.pad, n + budget))
    return SepSpanInstance(system, tuple(dict.fromkeys(reps.points)), n, Fraction(eps), "dom")


def _uses_classes(system: DRSystem, k: Union[KSpec, Sequence[Any]]) -> bool:
    if not isinstance(system, GraphShiftSystem) or not isinstance(k, KSpec):
        return False
    g = system.graph
    if g.num_edges is None or g.emitters() or system.metric == "gurevich":
        return False
    return k.edge_budget is None or k.edge_budget >= g.num_edges


def ssep_count(system: DRSystem, k: Union[KSpec, Sequence[Any]], n: int, eps: Fraction,
               method: str = "auto") -> SsepCount:
    """ssep(n, eps, σ, K) = sep(n, eps, σ, K ∩ Dom(σ^{n-1})).

    Args:
        system: The system
        k: A KSpec for graph shifts, or an explicit list of points
        n: Horizon
        eps: Radius
        method: "auto", "classes" or "representatives"

    Returns:
        SsepCount with the count, its exactness and the route taken

    Raises:
        DensityInsufficient: The representatives are not dense enough for an exact count
    """
    eps = Fraction(eps)
    if not isinstance(k, KSpec):
        result = max_separated(SepSpanInstance(system, tuple(k), n, eps, "dom"))
        return SsepCount(result.cardinality, result.exact, "explicit")
    if not isinstance(system, GraphShiftSystem):
        raise ValueError("cylinder representatives need a graph shift")
    if method == "classes" or (method == "auto" and _uses_classes(system, k)):
        return SsepCount(class_counts(system, n, eps)[-1], True, "classes")
    result = max_separated(_representative_instance(system, k, n, eps))
    return SsepCount(result.cardinality, result.exact, "representatives")


@dataclass
class EntropyReport:
    """ssep counts and growth rates over an ε schedule.

    `limsup_window` is the largest h_ε(n) over the window; `slopes` is the
    growth rate (log c(n_max) - log c(n_lo)) / (n_max - n_lo) over the same
    window. The estimate is the slope at the smallest ε.
    """

    system: str
    n_max: int
    eps_schedule: List[Fraction]
    window: Tuple[int, int]
    method: str
    counts: Dict[Fraction, List[int]] = field(default_factory=dict)
    h: Dict[Fraction, List[float]] = field(default_factory=dict)
    limsup_window: Dict[Fraction, float] = field(default_factory=dict)
    slopes: Dict[Fraction, float] = field(default_factory=dict)
    monotone_in_n: Dict[Fraction, bool] = field(default_factory=dict)
    monotone_in_eps: bool = True
    exact: bool = True

    @property
    def estimate(self) -> float:
        return self.slopes[self.eps_schedule[-1]]

    @property
    def trend(self) -> List[float]:
        return [self.slopes[eps] for eps in self.eps_schedule]


def window_bounds(n_max: int) -> Tuple[int, int]:
    return max(1, math.ceil(n_max / 2)), n_max


def growth_slope(counts: Sequence[int], n_lo: int, n_hi: int) -> float:
    """(log c(n_hi) - log c(n_lo)) / (n_hi - n_lo), or log c(1) when the window is a single point."""
    if n_hi == n_lo:
        return math.log(counts[n_hi - 1]) / n_hi
    return (math.log(counts[n_hi - 1]) - math.log(counts[n_lo - 1])) / (n_hi - n_lo)


def entropy_estimate(system: DRSystem, k: Union[KSpec, Sequence[Any]], eps_schedule: Sequence[Fraction],
                     n_max: int, method: str = "auto", threads: int = config.DR_ENTROPY_THREADS) -> EntropyReport:
    """Estimate h_d(σ, K) from ssep counts.

    Args:
        system: The system
        k: KSpec or explicit points
        eps_schedule: Strictly descending radii
        n_max: Largest horizon
        method: Route passed to ssep_count
        threads: Worker count; cells are merged in schedule order

    Returns:
        EntropyReport

    Raises:
        DensityInsufficient: Propagated from ssep_count
    """
    schedule = [Fraction(e) for e in eps_schedule]
    if not schedule or n_max < 1:
        raise ValueError("the ε schedule must be nonempty and n_max positive")
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("the ε schedule must be strictly descending")
    by_classes = method == "classes" or (method == "auto" and _uses_classes(system, k))
    if isinstance(system, GraphShiftSystem) and system.metric != "first_difference":
        system.enumeration.items(max(dyadic_level(e) for e in schedule))

    def run(eps: Fraction) -> Tuple[List[int], bool]:
        if by_classes:
            return class_counts(system, n_max, eps), True
        cells = [ssep_count(system, k, n, eps, method) for n in range(1, n_max + 1)]
        return [c.count for c in cells], all(c.exact for c in cells)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(run, schedule))

    if by_classes:
        route = "classes"
    else:
        route = "representatives" if isinstance(k, KSpec) else "explicit"
    n_lo, n_hi = window_bounds(n_max)
    report = EntropyReport(system.name, n_max, schedule, (n_lo, n_hi), route)
    for eps, (counts, exact) in zip(schedule, results):
        logger.debug(f"ssep counts of {report.system} at eps={eps}: {counts}")
        report.counts[eps] = counts
        report.h[eps] = [math.log(c) / n for n, c in enumerate(counts, start=1)]
        report.limsup_window[eps] = max(report.h[eps][n_lo - 1:n_hi])
        report.slopes[eps] = growth_slope(counts, n_lo, n_hi)
        report.monotone_in_n[eps] = all(a <= b for a, b in zip(counts, counts[1:]))
        report.exact = report.exact and exact
    for coarse, fine in zip(schedule, schedule[1:]):
        if any(a > b for a, b in zip(report.counts[coarse], report.counts[fine])):
            report.monotone_in_eps = False
    if not all(report.monotone_in_n.values()):
        logger.warning(f"ssep counts of {report.system} are not monotone in n")
    logger.info(f"Metric entropy of {report.system}: estimate {report.estimate:.6f} over window {n_lo}..{n_hi}")
    return report


@dataclass
class SepSpanReport:
    """Exact sep/span counts on one instance and the inequalities checked on them."""

    n: int
    eps: Fraction
    size: int
    sep: int
    span: int
    span_half: int
    ssep: Optional[int] = None
    sspan: Optional[int] = None
    sspan_half: Optional[int] = None
    checks: Dict[str, bool] = field(default_factory=dict)
    counterexample: Optional[Dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def verify_sep_span_chain(inst: SepSpanInstance) -> SepSpanReport:
    """Check span ≤ sep ≤ span(ε/2) and the matching ssep/sspan chain with exact solvers.

    The right-hand inequality uses the triangle inequality, so it is only
    asserted on domain-restricted instances.

    Raises:
        BudgetExceeded: The instance is too large for the exact solvers
    """
    points = inst.active_points()
    if len(points) > config.EXACT_SPANNING_LIMIT:
        raise BudgetExceeded(len(points), config.EXACT_SPANNING_LIMIT, "sep/span points")
    sep = max_separated(inst)
    span = min_spanning(inst)
    span_half = min_spanning(inst.with_eps(inst.eps / 2))
    report = SepSpanReport(inst.n, inst.eps, len(points), sep.cardinality, span.cardinality, span_half.cardinality)
    report.checks["span <= sep"] = span.cardinality <= sep.cardinality
    if inst.restriction == "dom":
        report.checks["sep <= span(eps/2)"] = sep.cardinality <= span_half.cardinality
    dom_points = [x for x in inst.points if inst.system.in_domain(x, inst.n - 1)]
    if len(dom_points) <= config.EXACT_SSPAN_LIMIT:
        dom = replace(inst, restriction="dom")
        report.ssep = max_separated(dom).cardinality
        report.sspan = sspan_exact(dom).cardinality
        report.sspan_half = sspan_exact(dom.with_eps(inst.eps / 2)).cardinality
        report.checks["sspan <= ssep"] = report.sspan <= report.ssep
        report.checks["ssep <= sspan(eps/2)"] = report.ssep <= report.sspan_half
        report.checks["span(dom) <= sspan(eps/2)"] = min_spanning(dom).cardinality <= report.sspan_half
    if not report.passed:
        report.counterexample = {
            "points": [str(x) for x in points],
            "n": inst.n,
            "eps": str(inst.eps),
            "separated": [str(x) for x in sep.witness],
            "spanning": [str(x) for x in span.witness],
        }
        logger.error(f"Sep/span chain failed: {report.counterexample}")
    return report


@dataclass
class ClosureChainReport:
    """Counts on K ∩ Dom(σ^{n-1}) against K ∩ cl Dom(σ^{n-1}).

    The separated side always orders; the spanning side need not and is
    reported on its own.
    """

    n: int
    eps: Fraction
    sep_dom: int
    sep_closure: int
    sep_dom_half: int
    span_closure: int
    span_dom: int

    @property
    def sep_chain(self) -> bool:
        return self.sep_dom <= self.sep_closure <= self.sep_dom_half

    @property
    def span_ordered(self) -> bool:
        return self.span_closure <= self.span_dom

    @property
    def passed(self) -> bool:
        return self.sep_chain and self.span_ordered


def closure_chain_check(system: IntervalDoubling, grid: Sequence[Fraction], n: int, eps: Fraction) -> ClosureChainReport:
    """Compare counts on K ∩ Dom(σ^{n-1}) and K ∩ cl Dom(σ^{n-1}) for K = [0, 1).

    The closed sample adds the boundary point 1/2^{n-1}; the open sample
    adds a point of Dom(σ^{n-1}) inside the ε/4 dynamical ball of it.
    """
    eps = Fraction(eps)
    grid = sorted({Fraction(x) for x in grid})
    dom = [x for x in grid if system.in_domain(x, n - 1)]
    closure = list(dom)
    boundary = Fraction(1, 2 ** (n - 1))
    approximant = boundary - eps / 2 ** (n + 1)
    if n > 1 and approximant >= 0:
        if approximant not in dom:
            dom.append(approximant)
            closure.append(approximant)
        closure.append(boundary)
    dom_inst = SepSpanInstance(system, tuple(dom), n, eps, "all")
    closure_inst = SepSpanInstance(system, tuple(closure), n, eps, "all")
    return ClosureChainReport(
        n, eps,
        sep_dom=max_separated(dom_inst).cardinality,
        sep_closure=max_separated(closure_inst).cardinality,
        sep_dom_half=max_separated(dom_inst.with_eps(eps / 2)).cardinality,
        span_closure=min_spanning(closure_inst).cardinality,
        span_dom=min_spanning(dom_inst).cardinality,
    )
