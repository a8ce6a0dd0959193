"""Tests for the combinatorial solvers.

This module contains unit tests for maximum clique, closed domination and
minimum set cover, checked against exhaustive search on random instances.
"""

import unittest
import sys
import os

import networkx as nx
from hypothesis import given, settings, strategies as st

# Add the parent directory to the path so we can import the modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from entropy.solvers import (
    exact_set_cover,
    exhaustive_max_clique,
    exhaustive_min_cover,
    greedy_set_cover,
    max_clique,
    min_closed_domination,
    relation_graph,
    remove_dominated,
)


def _pairs(size):
    return [(i, j) for i in range(size) for j in range(i + 1, size)]


class TestMaxClique(unittest.TestCase):
    """Test cases for the maximum clique solver."""

    def test_empty_graph(self):
        """Test that an empty graph has clique number 0."""
        self.assertEqual(max_clique(nx.Graph()).cardinality, 0)

    def test_cycle(self):
        """Test that C5 has clique number 2 and C5's complement too."""
        self.assertEqual(max_clique(nx.cycle_graph(5)).cardinality, 2)
        self.assertEqual(max_clique(nx.complement(nx.cycle_graph(5))).cardinality, 2)

    def test_complete(self):
        """Test that K6 is its own maximum clique."""
        result = max_clique(nx.complete_graph(6))
        self.assertEqual(result.cardinality, 6)
        self.assertEqual(result.witness, tuple(range(6)))
        self.assertTrue(result.exact)

    def test_greedy_above_limit(self):
        """Test the greedy clique and colouring bound above the exact limit."""
        result = max_clique(nx.complete_graph(5), exact_limit=3)
        self.assertEqual(result.cardinality, 5)
        self.assertEqual((result.lower_bound, result.upper_bound), (5, 5))
        self.assertTrue(result.exact)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 9).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))))
    def test_against_exhaustive(self, case):
        """Test the clique number against exhaustive search."""
        size, bits = case
        edges = {pair for pair, bit in zip(_pairs(size), bits) if bit}
        related = lambda i, j: (min(i, j), max(i, j)) in edges
        graph = relation_graph(size, related)
        self.assertEqual(max_clique(graph).cardinality, exhaustive_max_clique(size, related))


class TestDomination(unittest.TestCase):
    """Test cases for closed domination."""

    def test_path(self):
        """Test that a path on 6 vertices needs 2 dominators."""
        self.assertEqual(min_closed_domination(nx.path_graph(6)).cardinality, 2)

    def test_isolated(self):
        """Test that isolated vertices dominate only themselves."""
        graph = nx.Graph()
        graph.add_nodes_from(range(4))
        self.assertEqual(min_closed_domination(graph).cardinality, 4)

    def test_star(self):
        """Test that a star is dominated by its centre."""
        result = min_closed_domination(nx.star_graph(5))
        self.assertEqual(result.cardinality, 1)
        self.assertEqual(result.witness, (0,))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 9).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))))
    def test_against_exhaustive(self, case):
        """Test the domination number against exhaustive cover search."""
        size, bits = case
        edges = {pair for pair, bit in zip(_pairs(size), bits) if bit}
        graph = relation_graph(size, lambda i, j: (i, j) in edges)
        masks = [sum(1 << j for j in range(size) if j == i or graph.has_edge(i, j)) for i in range(size)]
        self.assertEqual(min_closed_domination(graph).cardinality, exhaustive_min_cover((1 << size) - 1, masks))


class TestSetCover(unittest.TestCase):
    """Test cases for minimum set cover."""

    def test_remove_dominated(self):
        """Test that empty, repeated and contained masks are dropped."""
        self.assertEqual(remove_dominated([0b011, 0b001, 0b011, 0, 0b100]), [0, 4])

    def test_greedy_can_lose(self):
        """Test an instance where greedy uses one set too many."""
        universe = 0b111111
        masks = [0b000111, 0b111000, 0b110011]
        self.assertEqual(len(greedy_set_cover(universe, masks)), 3)
        self.assertEqual(exact_set_cover(universe, masks), [0, 1])

    def test_uncoverable(self):
        """Test that an element in no mask raises ValueError."""
        with self.assertRaises(ValueError):
            exact_set_cover(0b111, [0b001, 0b010])

    def test_empty_universe(self):
        """Test that the empty universe needs no sets."""
        self.assertEqual(exact_set_cover(0, [0b1]), [])

    @settings(max_examples=80, deadline=None)
    @given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(1, (1 << n) - 1), min_size=1, max_size=8))))
    def test_against_exhaustive(self, case):
        """Test the branch and bound cover against exhaustive search."""
        size, masks = case
        universe = 0
        for m in masks:
            universe |= m
        chosen = exact_set_cover(universe, masks)
        union = 0
        for i in chosen:
            union |= masks[i]
        self.assertEqual(union & universe, universe)
        self.assertEqual(len(chosen), exhaustive_min_cover(universe, masks))


if __name__ == '__main__':
    unittest.main()
