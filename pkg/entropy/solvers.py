"""Exact combinatorial kernels for the entropy pipelines.

This module provides the maximum clique (separated sets), closed
domination (spanning sets) and minimum set cover (subcover counts) solvers,
with greedy bounds above the exact size limits and exhaustive oracles for
small instances.
"""

import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, List, Optional, Sequence, Tuple

import networkx as nx

import config

# Set up logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverResult:
    """Optimum (or bound) of a combinatorial problem over indexed points.

    `witness` holds point indices. When `exact` is False the cardinality is
    the best value found and the optimum lies in [lower_bound, upper_bound].
    """

    cardinality: int
    witness: Tuple[int, ...]
    exact: bool
    lower_bound: int
    upper_bound: int


def relation_graph(size: int, related: Callable[[int, int], bool]) -> nx.Graph:
    """Graph on range(size) with an edge {i, j} whenever related(i, j)."""
    graph = nx.Graph()
    graph.add_nodes_from(range(size))
    graph.add_edges_from((i, j) for i, j in combinations(range(size), 2) if related(i, j))
    return graph


def greedy_clique(graph: nx.Graph) -> List[int]:
    """Grow a clique from every vertex by highest remaining degree and keep the largest."""
    best: List[int] = []
    for start in sorted(graph.nodes):
        clique = [start]
        candidates = set(graph.neighbors(start))
        while candidates:
            nxt = max(sorted(candidates), key=lambda v: len(candidates & set(graph.neighbors(v))))
            clique.append(nxt)
            candidates &= set(graph.neighbors(nxt))
        if len(clique) > len(best):
            best = clique
    return sorted(best)


def max_clique(graph: nx.Graph, exact_limit: int = config.EXACT_CLIQUE_LIMIT) -> SolverResult:
    """Maximum clique of `graph`.

    Args:
        graph: Undirected graph on integer nodes
        exact_limit: Largest node count solved exactly

    Returns:
        SolverResult; above the limit a greedy clique with a colouring upper bound
    """
    size = graph.number_of_nodes()
    if size == 0:
        return SolverResult(0, (), True, 0, 0)
    if size <= exact_limit:
        clique, weight = nx.max_weight_clique(graph, weight=None)
        witness = tuple(sorted(clique))
        return SolverResult(len(witness), witness, True, len(witness), len(witness))
    clique = greedy_clique(graph)
    colouring = nx.greedy_color(graph, strategy="largest_first")
    upper = max(colouring.values()) + 1
    logger.warning(f"Clique on {size} points solved greedily: {len(clique)} ≤ optimum ≤ {upper}")
    return SolverResult(len(clique), tuple(clique), len(clique) == upper, len(clique), upper)


def _min_frequency_element(remaining: int, masks: Sequence[int]) -> Tuple[Optional[int], int]:
    elem, best = None, None
    r = remaining
    while r:
        lsb = r & -r
        idx = lsb.bit_length() - 1
        freq = sum(1 for m in masks if (m >> idx) & 1)
        if best is None or freq < best:
            elem, best = idx, freq
        r &= r - 1
    return elem, best or 0


def remove_dominated(masks: Sequence[int]) -> List[int]:
    """Indices of the masks that are nonempty, not repeated and not inside another mask."""
    order = sorted(range(len(masks)), key=lambda i: (-masks[i].bit_count(), i))
    kept: List[int] = []
    for i in order:
        m = masks[i]
        if m == 0 or any((m | masks[k]) == masks[k] for k in kept):
            continue
        kept.append(i)
    return sorted(kept)


def greedy_set_cover(universe: int, masks: Sequence[int]) -> List[int]:
    """Greedy cover: repeatedly take the mask covering most uncovered elements."""
    chosen: List[int] = []
    covered = 0
    while covered != universe:
        best_idx, best_gain = None, 0
        for i, m in enumerate(masks):
            gain = (m & universe & ~covered).bit_count()
            if gain > best_gain:
                best_idx, best_gain = i, gain
        if best_idx is None:
            raise ValueError("the masks do not cover the universe")
        chosen.append(best_idx)
        covered |= masks[best_idx]
    return chosen


def exact_set_cover(universe: int, masks: Sequence[int]) -> List[int]:
    """Minimum set cover by branch and bound over bitmasks.

    Branches on the uncovered element with the fewest covering masks and
    prunes with the greedy incumbent and the ceil(remaining / best gain)
    lower bound.

    Args:
        universe: Bitmask of the elements to cover
        masks: Candidate sets as bitmasks

    Returns:
        Indices (into `masks`) of a minimum cover, sorted

    Raises:
        ValueError: Some element of the universe lies in no mask
    """
    if universe == 0:
        return []
    candidates = remove_dominated([m & universe for m in masks])
    reduced = [masks[i] & universe for i in candidates]
    best = greedy_set_cover(universe, reduced)

    def search(covered: int, chosen: List[int]) -> None:
        nonlocal best
        if covered == universe:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + 1 >= len(best):
            return
        remaining = universe & ~covered
        gain = max((m & remaining).bit_count() for m in reduced)
        if gain == 0 or len(chosen) + math.ceil(remaining.bit_count() / gain) >= len(best):
            return
        elem, freq = _min_frequency_element(remaining, reduced)
        if freq == 0:
            return
        options = [i for i, m in enumerate(reduced) if (m >> elem) & 1]
        options.sort(key=lambda i: -(reduced[i] & remaining).bit_count())
        for i in options:
            chosen.append(i)
            search(covered | reduced[i], chosen)
            chosen.pop()
            if len(chosen) + 1 >= len(best):
                break

    search(0, [])
    return sorted(candidates[i] for i in best)


def min_closed_domination(graph: nx.Graph, exact_limit: int = config.EXACT_SPANNING_LIMIT) -> SolverResult:
    """Minimum dominating set where every vertex dominates itself and its neighbours."""
    nodes = sorted(graph.nodes)
    size = len(nodes)
    if size == 0:
        return SolverResult(0, (), True, 0, 0)
    position = {v: i for i, v in enumerate(nodes)}
    masks = []
    for v in nodes:
        mask = 1 << position[v]
        for u in graph.neighbors(v):
            mask |= 1 << position[u]
        masks.append(mask)
    universe = (1 << size) - 1
    if size <= exact_limit:
        chosen = exact_set_cover(universe, masks)
        witness = tuple(nodes[i] for i in chosen)
        return SolverResult(len(witness), witness, True, len(witness), len(witness))
    chosen = greedy_set_cover(universe, masks)
    lower = math.ceil(size / max(m.bit_count() for m in masks))
    logger.warning(f"Domination on {size} points solved greedily: {lower} ≤ optimum ≤ {len(chosen)}")
    witness = tuple(sorted(nodes[i] for i in chosen))
    return SolverResult(len(witness), witness, len(witness) == lower, lower, len(witness))


def exhaustive_max_clique(size: int, related: Callable[[int, int], bool]) -> int:
    """Largest subset of range(size) that is pairwise related, by trying every subset."""
    for k in range(size, 0, -1):
        for subset in combinations(range(size), k):
            if all(related(i, j) for i, j in combinations(subset, 2)):
                return k
    return 0


def exhaustive_min_cover(universe: int, masks: Sequence[int]) -> int:
    """Size of the smallest family of masks whose union contains `universe`, by trying every family."""
    if universe == 0:
        return 0
    for k in range(1, len(masks) + 1):
        for family in combinations(masks, k):
            union = 0
            for m in family:
                union |= m
            if union & universe == universe:
                return k
    raise ValueError("the masks do not cover the universe")
