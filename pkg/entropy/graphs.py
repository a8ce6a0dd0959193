"""Entropy of graph shifts.

This module provides the finite-graph entropy two ways (exact path counts
and certified power iteration on the edge-adjacency operator), the
supremum over finite subgraphs of a row-finite family, the max rule for
disjoint unions and the restriction checks on their invariant pieces.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

import config
from graphs.model import Ultragraph, count_paths, edge_adjacency, finite_subgraph
from utils.errors import EmptySubgraph, NonConvergence

# Set up logging
logger = logging.getLogger(__name__)

FALLBACK_POWER = 64


@dataclass
class PathCountEstimate:
    """(1/n) log |𝔭^n| for n = 1..n_max."""

    counts: List[int]

    @property
    def n_max(self) -> int:
        return len(self.counts)

    @property
    def values(self) -> List[float]:
        return [math.log(c) / n for n, c in enumerate(self.counts, start=1)]

    @property
    def estimate(self) -> float:
        return self.values[-1]

    @property
    def cesaro(self) -> float:
        """Mean of the sequence, a trend diagnostic."""
        values = self.values
        return sum(values) / len(values)

    @property
    def trend(self) -> float:
        """Last increment of the sequence; negative while it still decreases."""
        values = self.values
        return values[-1] - values[-2] if len(values) > 1 else 0.0


def finite_graph_entropy_pathcount(g: Ultragraph, n_max: int) -> PathCountEstimate:
    """Exact path counts |𝔭^n|, n ≤ n_max, of a finite presentation."""
    if n_max < 1:
        raise ValueError(f"n_max must be positive, got {n_max}")
    matrix = edge_adjacency(g)
    vector = np.ones(matrix.shape[0], dtype=object)
    counts = [int(sum(vector))]
    for _ in range(n_max - 1):
        vector = matrix.dot(vector)
        counts.append(int(sum(vector)))
    logger.debug(f"Path counts of {g.name}: {counts}")
    return PathCountEstimate(counts)


@dataclass
class SpectralEstimate:
    """Spectral radius λ of the edge-adjacency operator with a certified interval [lo, hi]."""

    lam: float
    lo: float
    hi: float
    iterations: int
    residual: float
    converged: bool

    @property
    def entropy(self) -> float:
        return math.log(self.lam) if self.lam > 0 else -math.inf

    @property
    def entropy_interval(self) -> Tuple[float, float]:
        lo = math.log(self.lo) if self.lo > 0 else -math.inf
        hi = math.log(self.hi) if self.hi > 0 else -math.inf
        return lo, hi


def _collatz_wielandt(block: np.ndarray, tol: float, max_iterations: int) -> Tuple[float, float, float, int, float, bool]:
    """Power iteration on an irreducible block with min/max ratio bounds.

    Iterates B = A + I, which averages consecutive iterates of A and
    removes any periodicity; ρ(A) = ρ(B) - 1.
    """
    size = block.shape[0]
    shifted = block + np.eye(size)
    x = np.ones(size)
    lo, hi = 0.0, math.inf
    for iteration in range(1, max_iterations + 1):
        y = shifted @ x
        ratios = y / x
        lo, hi = max(lo, float(ratios.min())), min(hi, float(ratios.max()))
        x = y / y.max()
        if hi - lo <= tol * max(lo - 1.0, tol):
            break
    else:
        lam = (lo + hi) / 2 - 1.0
        return lam, lo - 1.0, hi - 1.0, max_iterations, float(np.abs(block @ x - lam * x).max()), False
    lam = (lo + hi) / 2 - 1.0
    residual = float(np.abs(block @ x - lam * x).max() / np.abs(x).max())
    return lam, lo - 1.0, hi - 1.0, iteration, residual, True


def _row_sum_bounds(block: np.ndarray, power: int = FALLBACK_POWER) -> Tuple[float, float]:
    """min and max row sums of block^power, to the 1/power, by repeated squaring in log scale."""
    matrix = block / max(float(block.max()), 1.0)
    scale = math.log(max(float(block.max()), 1.0))
    log_scale = 0.0
    steps = 0
    while (1 << steps) < power:
        matrix = matrix @ matrix
        top = float(matrix.max())
        if top == 0:
            return 0.0, 0.0
        matrix /= top
        log_scale = 2 * log_scale + math.log(top)
        steps += 1
    sums = matrix.sum(axis=1)
    exponent = 1 << steps
    lo = math.exp(scale + (log_scale + math.log(sums.min())) / exponent) if sums.min() > 0 else 0.0
    hi = math.exp(scale + (log_scale + math.log(sums.max())) / exponent)
    return lo, hi


def finite_graph_entropy_spectral(g: Ultragraph, tol: float = config.DEFAULT_TOLERANCE,
                                  max_iterations: int = config.SPECTRAL_MAX_ITERATIONS,
                                  strict: bool = False) -> SpectralEstimate:
    """Spectral radius of the edge-adjacency operator of a finite presentation.

    Each strongly connected component is iterated separately and the
    largest radius wins. A component that misses the tolerance within the
    iteration cap falls back to row-sum bounds of a high matrix power.

    Args:
        g: A finite presentation
        tol: Target width of the log-radius interval
        max_iterations: Power-iteration cap per component
        strict: Raise NonConvergence instead of returning the fallback interval

    Returns:
        SpectralEstimate with log(lam) the entropy
    """
    matrix = edge_adjacency(g, exact=False)
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(matrix.shape[0]))
    digraph.add_edges_from(zip(*np.nonzero(matrix)))
    best = SpectralEstimate(0.0, 0.0, 0.0, 0, 0.0, True)
    for component in nx.strongly_connected_components(digraph):
        nodes = sorted(component)
        block = matrix[np.ix_(nodes, nodes)]
        if not block.any():
            continue
        lam, lo, hi, iterations, residual, converged = _collatz_wielandt(block, tol, max_iterations)
        if not converged:
            if strict:
                raise NonConvergence(f"power iteration on {g.name} missed {tol} after {max_iterations} iterations")
            lo, hi = _row_sum_bounds(block)
            lam = (lo + hi) / 2
            logger.warning(f"Power iteration on {g.name} did not converge; row-sum interval [{lo}, {hi}]")
        leading = lam > best.lam
        best = SpectralEstimate(
            max(lam, best.lam),
            max(lo, best.lo),
            max(hi, best.hi),
            iterations if leading else best.iterations,
            residual if leading else best.residual,
            converged and best.converged,
        )
    logger.debug(f"Spectral radius of {g.name}: {best.lam} in [{best.lo}, {best.hi}]")
    return best


@dataclass
class AgreementReport:
    pathcount: float
    spectral: float
    bound: float

    @property
    def agrees(self) -> bool:
        return abs(self.pathcount - self.spectral) <= self.bound


def oracle_agreement(g: Ultragraph, n_max: int, tol: float = config.DEFAULT_TOLERANCE) -> AgreementReport:
    """Compare the path-count estimate with log λ; allowed gap log(#edges)/n_max + tol + interval width."""
    counting = finite_graph_entropy_pathcount(g, n_max)
    spectral = finite_graph_entropy_spectral(g, tol)
    lo, hi = spectral.entropy_interval
    bound = math.log(g.num_edges) / n_max + tol + (hi - lo)
    return AgreementReport(counting.estimate, spectral.entropy, bound)


@dataclass
class FiltrationReport:
    """Entropies of the finite subgraphs generated by ascending edge budgets."""

    family: str
    budgets: List[int] = field(default_factory=list)
    values: List[float] = field(default_factory=list)
    intervals: List[Tuple[float, float]] = field(default_factory=list)
    running_sup: List[float] = field(default_factory=list)
    skipped: List[int] = field(default_factory=list)
    monotone: bool = True
    diverging: bool = False

    @property
    def estimate(self) -> Optional[float]:
        """The supremum so far, a lower bound for the entropy."""
        return self.running_sup[-1] if self.running_sup else None


def rowfinite_entropy_sup(family: Ultragraph, budgets: Sequence[int], tol: float = config.DEFAULT_TOLERANCE,
                          threads: int = config.DR_ENTROPY_THREADS) -> FiltrationReport:
    """Supremum of subgraph entropies along an ascending chain of edge budgets.

    Args:
        family: A graph presentation with singleton ranges
        budgets: Ascending edge budgets
        tol: Spectral tolerance per subgraph
        threads: Worker threads for the per-budget cells

    Returns:
        FiltrationReport; `diverging` is set when the last two increments
        both exceed the divergence threshold
    """
    budgets = list(budgets)
    if any(b >= c for b, c in zip(budgets, budgets[1:])):
        raise ValueError(f"budgets must be strictly ascending, got {budgets}")

    def run(budget: int) -> Optional[SpectralEstimate]:
        try:
            sub = finite_subgraph(family, budget)
        except EmptySubgraph as e:
            logger.warning(f"Skipping budget {budget} of {family.name}: {str(e)}")
            return None
        return finite_graph_entropy_spectral(sub, tol)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(run, budgets))

    report = FiltrationReport(family.name)
    best = -math.inf
    for budget, result in zip(budgets, results):
        if result is None:
            report.skipped.append(budget)
            continue
        value = result.entropy
        if report.values and value < report.values[-1] - tol:
            report.monotone = False
            logger.error(f"Filtration of {family.name} decreased at budget {budget}: {value} < {report.values[-1]}")
        best = max(best, value)
        report.budgets.append(budget)
        report.values.append(value)
        report.intervals.append(result.entropy_interval)
        report.running_sup.append(best)
    sup = report.running_sup
    if len(sup) >= 3:
        increments = (sup[-1] - sup[-2], sup[-2] - sup[-3])
        report.diverging = all(step > config.DIVERGENCE_THRESHOLD for step in increments)
    if report.diverging:
        logger.warning(f"Filtration of {family.name} is still growing: last increments exceed {config.DIVERGENCE_THRESHOLD}")
    logger.info(f"Filtration of {family.name}: sup {report.estimate} over {len(report.budgets)} budgets")
    return report


@dataclass(frozen=True)
class EntropyInterval:
    value: float
    lo: float
    hi: float

    @classmethod
    def exact(cls, value: float) -> "EntropyInterval":
        return cls(value, value, value)

    @classmethod
    def from_spectral(cls, estimate: SpectralEstimate) -> "EntropyInterval":
        lo, hi = estimate.entropy_interval
        return cls(estimate.entropy, lo, hi)


def disjoint_union_entropy(components: Sequence[Union[float, EntropyInterval]]) -> EntropyInterval:
    """Entropy of a disjoint union: the max of the component values and of their interval ends."""
    if not components:
        raise ValueError("a disjoint union needs at least one component")
    intervals = [c if isinstance(c, EntropyInterval) else EntropyInterval.exact(float(c)) for c in components]
    return EntropyInterval(
        max(c.value for c in intervals),
        max(c.lo for c in intervals),
        max(c.hi for c in intervals),
    )


@dataclass
class RestrictionReport:
    """Entropies of the pieces of a disjoint union and of the whole."""

    pieces: List[float]
    whole: float
    pairs: List[Tuple[int, int, float]]
    combined: EntropyInterval
    tol: float

    @property
    def pieces_below_whole(self) -> bool:
        return all(h <= self.whole + self.tol for h in self.pieces)

    @property
    def pairs_are_max(self) -> bool:
        return all(abs(h - max(self.pieces[i], self.pieces[j])) <= self.tol for i, j, h in self.pairs)

    @property
    def max_rule(self) -> bool:
        return abs(self.combined.value - self.whole) <= self.tol

    @property
    def passed(self) -> bool:
        return self.pieces_below_whole and self.pairs_are_max and self.max_rule


def restriction_check(g: Ultragraph, tol: float = 1e-6) -> RestrictionReport:
    """Check the restriction rules on a finite disjoint union.

    A piece has entropy at most that of the whole, the union of two pieces
    has the larger of their entropies, and the whole is the max over pieces.
    """
    from graphs.builtins import disjoint_union

    components = getattr(g, "components", None)
    if not components:
        raise ValueError(f"{g.name} is not a disjoint union")
    pieces = [finite_graph_entropy_spectral(c).entropy for c in components]
    whole = finite_graph_entropy_spectral(g).entropy
    pairs = [
        (i, j, finite_graph_entropy_spectral(disjoint_union([components[i], components[j]])).entropy)
        for i, j in combinations(range(len(components)), 2)
    ]
    combined = disjoint_union_entropy(pieces)
    return RestrictionReport(pieces, whole, pairs, combined, tol)


def cover_agreement(g: Ultragraph, n_max: int, depth: int = 1) -> Tuple[float, float]:
    """Window slope of the depth-`depth` word cover against log λ on a finite graph."""
    from entropy.covers import cover_entropy_estimate, word_cover

    report = cover_entropy_estimate(word_cover(g, depth), None, n_max)
    return report.slope, finite_graph_entropy_spectral(g).entropy
