"""Tests for shift spaces of graphs and ultragraphs.

This module contains unit tests for ultrapath points, cylinder sets, the
staged enumeration of ultrapaths and the metrics built on it.
"""

import unittest
from fractions import Fraction
import sys
import os

from hypothesis import given, settings, strategies as st

# Add the parent directory to the path so we can import the modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from graphs.builtins import RenewalUltragraph, rose
from graphs.model import RangeSet
from systems.shift_space import (
    CylinderSet,
    GraphShiftSystem,
    PathEnumeration,
    PathItem,
    Ultrapath,
    density,
    extend_least,
    finite_points,
    metric_dX,
    metric_first_difference,
    metric_gurevich,
    modulus_table,
    representatives,
    shift_apply,
)
from utils.errors import InsufficientBudget, InsufficientDepth, LengthZero


class TestUltrapaths(unittest.TestCase):
    """Test cases for points and the shift."""

    def setUp(self):
        self.renewal = RenewalUltragraph()

    def test_extend_least(self):
        """Test least-indexed continuation on the renewal ultragraph."""
        self.assertEqual(extend_least(self.renewal, (2,), 4).word, (2, 1, 0, 0))
        self.assertEqual(extend_least(rose(2), (1,), 3).word, (1, 0, 0))

    def test_shift_drops_first_edge(self):
        """Test that the shift drops the first edge and keeps the tail."""
        g = self.renewal
        self.assertEqual(shift_apply(g, Ultrapath((2, 1, 0))), Ultrapath((1, 0)))
        self.assertEqual(shift_apply(g, Ultrapath((0,), "V")), Ultrapath((), "V"))

    def test_shift_rejects_length_zero(self):
        """Test that a zero-length point is outside the domain."""
        with self.assertRaises(LengthZero):
            shift_apply(self.renewal, Ultrapath((), "V"))

    def test_shift_rejects_short_truncation(self):
        """Test that a truncation with one known edge cannot be shifted."""
        with self.assertRaises(InsufficientDepth):
            shift_apply(self.renewal, Ultrapath((0,)))

    def test_finite_points(self):
        """Test the finite points of the renewal ultragraph."""
        g = self.renewal
        self.assertEqual(finite_points(g, 1, 3), [Ultrapath((), "V"), Ultrapath((0,), "V")])
        self.assertEqual(len(finite_points(g, 2, 3)), 4)
        self.assertEqual(finite_points(rose(2), 3, 2), [])

    def test_domain_horizon(self):
        """Test that finite points leave the domain after their length."""
        system = GraphShiftSystem(self.renewal)
        self.assertEqual(system.domain_horizon(Ultrapath((0, 0, 0)), 5), 4)
        self.assertEqual(system.domain_horizon(Ultrapath((0,), "V"), 5), 1)

    def test_neighbourhood(self):
        """Test that a finite point is approached through its emitter's edges."""
        system = GraphShiftSystem(self.renewal)
        self.assertEqual(list(system.neighbourhood(Ultrapath((0,), "V"), 0)), [Ultrapath((0, 0, 0, 0))])
        self.assertEqual(list(system.neighbourhood(Ultrapath((0,), "V"), 2)), [Ultrapath((0, 2, 1, 0))])
        x = Ultrapath((1, 0, 0))
        self.assertEqual(list(system.neighbourhood(x, 3)), [x])


class TestCylinders(unittest.TestCase):
    """Test cases for cylinder sets."""

    def setUp(self):
        self.g = RenewalUltragraph()

    def test_membership(self):
        """Test membership of finite and infinite points."""
        cyl = CylinderSet.make(self.g, (0,))
        self.assertTrue(cyl.contains(self.g, Ultrapath((0,), "V")))
        self.assertTrue(cyl.contains(self.g, Ultrapath((0, 1, 0))))
        self.assertFalse(cyl.contains(self.g, Ultrapath((1, 0, 0))))
        self.assertIsNone(cyl.contains(self.g, Ultrapath((0,))))

    def test_open_cylinder_excludes_finite_point(self):
        """Test that an open cylinder drops the finite point at its base."""
        cyl = CylinderSet.make(self.g, (0,), includes_base=False)
        self.assertFalse(cyl.contains(self.g, Ultrapath((0,), "V")))

    def test_intersection(self):
        """Test nested and disjoint intersections."""
        short = CylinderSet.make(self.g, (0,))
        long_ = CylinderSet.make(self.g, (0, 1))
        self.assertEqual(short.intersect(long_, self.g), long_)
        self.assertIsNone(short.intersect(CylinderSet.make(self.g, (1,)), self.g))

    def test_forced_extension(self):
        """Test that a single continuation is followed until the emitter."""
        cyl = CylinderSet.make(self.g, (1,)).forced(self.g, 5)
        self.assertEqual(cyl.word, (1, 0))
        self.assertEqual(cyl.base, RangeSet.of_emitter("V"))

    def test_empty_after_exclusion(self):
        """Test that excluding the only continuation empties a cylinder."""
        self.assertTrue(CylinderSet.make(self.g, (1,), excluded=(0,)).is_empty(self.g))
        self.assertFalse(CylinderSet.make(self.g, (1,)).is_empty(self.g))

    def test_zero_length_needs_base(self):
        """Test that a zero-length cylinder requires a base."""
        with self.assertRaises(ValueError):
            CylinderSet.make(self.g, ())


class TestPathEnumeration(unittest.TestCase):
    """Test cases for the staged enumeration of ultrapaths."""

    def test_rose_prefix(self):
        """Test the first ultrapaths of rose(2)."""
        v = RangeSet.of_vertices("v")
        enumeration = PathEnumeration(rose(2))
        words = [item.word for item in enumeration.items(7)]
        self.assertEqual(words, [(), (0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)])
        self.assertTrue(all(item.rset == v for item in enumeration.items(7)))

    def test_renewal_prefix(self):
        """Test that stage 1 of the renewal ultragraph uses the emitter."""
        enumeration = PathEnumeration(RenewalUltragraph())
        V = RangeSet.of_emitter("V")
        self.assertEqual(enumeration.item(1), PathItem((), V))
        self.assertEqual(enumeration.item(2), PathItem((0,), V))
        self.assertEqual(enumeration.index_of(PathItem((0,), V), 10), 2)

    def test_no_repeats(self):
        """Test that no ultrapath is listed twice."""
        items = PathEnumeration(RenewalUltragraph()).items(60)
        self.assertEqual(len(items), len(set(items)))

    def test_bad_arguments(self):
        """Test that unknown kinds, orders and indices are rejected."""
        with self.assertRaises(ValueError):
            PathEnumeration(rose(2), kind="Q")
        with self.assertRaises(ValueError):
            PathEnumeration(rose(2), order="random")
        with self.assertRaises(IndexError):
            PathEnumeration(rose(2)).item(0)


class TestMetrics(unittest.TestCase):
    """Test cases for d_X, the first-difference and the Gurevich metrics."""

    def setUp(self):
        self.g = rose(2)
        self.system = GraphShiftSystem(self.g)

    def test_dX_values(self):
        """Test d_X on points of rose(2)."""
        x = Ultrapath((0, 0, 0, 0))
        self.assertEqual(metric_dX(self.system, x, Ultrapath((1, 0, 0, 0))), Fraction(1, 4))
        self.assertEqual(metric_dX(self.system, x, Ultrapath((0, 1, 0, 0))), Fraction(1, 16))
        self.assertEqual(metric_dX(self.system, x, x), 0)

    def test_dX_budget(self):
        """Test that a short enumeration budget reports an upper bound."""
        with self.assertRaises(InsufficientBudget) as ctx:
            metric_dX(self.system, Ultrapath((0, 0, 0, 0)), Ultrapath((0, 1, 0, 0)), enum_budget=3)
        self.assertEqual(ctx.exception.upper_bound, Fraction(1, 16))

    def test_first_difference(self):
        """Test the first-difference metric and its failure modes."""
        x = Ultrapath((0, 0, 0))
        self.assertEqual(metric_first_difference(x, Ultrapath((1, 0, 0))), Fraction(1, 2))
        self.assertEqual(metric_first_difference(x, Ultrapath((0, 1, 0))), Fraction(1, 4))
        with self.assertRaises(InsufficientDepth):
            metric_first_difference(Ultrapath((0, 0)), Ultrapath((0, 0, 1)))
        with self.assertRaises(ValueError):
            metric_first_difference(x, Ultrapath((0,), "V"))

    def test_gurevich_interval(self):
        """Test the Gurevich metric interval."""
        lo, hi = metric_gurevich(Ultrapath((0, 0)), Ultrapath((1, 0)), 2)
        self.assertEqual((lo, hi), (Fraction(1, 4), Fraction(1, 2)))
        with self.assertRaises(InsufficientDepth):
            metric_gurevich(Ultrapath((0,)), Ultrapath((1,)), 2)

    def test_unknown_metric(self):
        """Test that unknown metrics are rejected."""
        with self.assertRaises(ValueError):
            GraphShiftSystem(self.g, metric="hamming")
        with self.assertRaises(ValueError):
            GraphShiftSystem(self.g, metric="gurevich").base_distance(Ultrapath((0, 0)), Ultrapath((1, 0)))

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(0, 1), min_size=6, max_size=6), st.lists(st.integers(0, 1), min_size=6, max_size=6))
    def test_dX_symmetric(self, a, b):
        """Test that d_X is symmetric on depth-6 points of rose(2)."""
        x, y = Ultrapath(tuple(a)), Ultrapath(tuple(b))
        try:
            forward = metric_dX(self.system, x, y)
        except InsufficientDepth:
            return
        self.assertEqual(forward, metric_dX(self.system, y, x))


class TestRepresentatives(unittest.TestCase):
    """Test cases for density and representative sampling."""

    def test_density(self):
        """Test δ(D) under d_X and the first-difference metric."""
        g = rose(2)
        self.assertEqual(density(GraphShiftSystem(g), 0), Fraction(1, 2))
        self.assertEqual(density(GraphShiftSystem(g), 1), Fraction(1, 16))
        self.assertEqual(density(GraphShiftSystem(g, metric="first_difference"), 2), Fraction(1, 8))

    def test_representatives(self):
        """Test one representative per depth-2 cylinder of rose(2)."""
        reps = representatives(GraphShiftSystem(rose(2)), 2, 2)
        self.assertEqual(len(reps.points), 4)
        self.assertEqual(reps.points[0], Ultrapath((0, 0, 0, 0)))
        self.assertEqual(reps.delta, Fraction(1, 256))

    def test_depth_zero(self):
        """Test that depth 0 gives one point per vertex."""
        reps = representatives(GraphShiftSystem(rose(2)), 0, 2)
        self.assertEqual(reps.points, [Ultrapath((0, 0))])

    def test_renewal_representatives(self):
        """Test that finite points are added to the infinite representatives."""
        reps = representatives(GraphShiftSystem(RenewalUltragraph()), 1, 3)
        self.assertEqual(len(reps.points), 5)
        self.assertIn(Ultrapath((0,), "V"), reps.points)


class TestModulusTable(unittest.TestCase):
    """Test cases for empirical moduli of continuity."""

    def test_single_pair(self):
        """Test the modulus of first_difference -> d_X on a single pair."""
        system = GraphShiftSystem(rose(2))
        pair = (Ultrapath((0, 0, 0, 0)), Ultrapath((1, 0, 0, 0)))
        table = modulus_table(system, "first_difference", "dX", [pair], range(0, 4))
        self.assertEqual(table.pairs, [(Fraction(1, 2), Fraction(1, 4))])
        self.assertEqual(table.max_b, [Fraction(1, 4), None, None, None])
        self.assertEqual(table.moduli[Fraction(1)], Fraction(1))
        self.assertEqual(table.moduli[Fraction(1, 2)], Fraction(1))
        self.assertIsNone(table.moduli[Fraction(1, 4)])

    def test_d1_matches_dx_on_rose(self):
        """Test that d_1 and d_X agree on the representatives of rose(2)."""
        system = GraphShiftSystem(rose(2))
        points = representatives(system, 2, 2).points
        pairs = [(x, y) for i, x in enumerate(points) for y in points[i + 1:]]
        table = modulus_table(system, "dX", "d1", pairs)
        self.assertEqual(len(table.pairs), 6)
        self.assertTrue(all(a == b for a, b in table.pairs))

    def test_enumeration_orders(self):
        """Test the moduli between the shortlex and reverse enumerations of rose(2)."""
        g = rose(2)
        shortlex = GraphShiftSystem(g)
        reverse = GraphShiftSystem(g, order="reverse")
        points = representatives(shortlex, 2, 2).points
        pairs = [(x, y) for i, x in enumerate(points) for y in points[i + 1:]]
        forward = modulus_table(shortlex, "dX", "dX", pairs, other=reverse)
        self.assertEqual(forward.metric_a, "dX/shortlex")
        self.assertEqual(forward.metric_b, "dX/reverse")
        self.assertEqual(forward.pairs[0], (Fraction(1, 16), Fraction(1, 8)))
        self.assertEqual(forward.moduli[Fraction(1, 2)], Fraction(1, 4))
        backward = modulus_table(reverse, "dX", "dX", pairs, other=shortlex)
        self.assertEqual(backward.moduli[Fraction(1, 2)], Fraction(1))
        self.assertEqual(backward.moduli[Fraction(1, 4)], Fraction(1, 2))

    def test_other_graph_rejected(self):
        """Test that the two systems must share a graph."""
        with self.assertRaises(ValueError):
            modulus_table(GraphShiftSystem(rose(2)), "dX", "dX", [], other=GraphShiftSystem(rose(3)))


if __name__ == '__main__':
    unittest.main()
