"""Tests for the system contract and the two exact systems.

This module contains unit tests for index sets, the pseudo-metric d_n,
dynamical balls and the sampled density check.
"""

import unittest
from fractions import Fraction
import sys
import os

from hypothesis import given, settings, strategies as st

# Add the parent directory to the path so we can import the modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from graphs.builtins import rose
from systems.base import check_hypothesis_niceone_sampled, in_dynamical_ball, index_set, iterate_distance
from systems.binary import BinaryWord, PaddedBinary
from systems.interval import IntervalDoubling
from systems.shift_space import GraphShiftSystem, extend_least
from utils.errors import InsufficientDepth, OutsideDomain


class TestIntervalDoubling(unittest.TestCase):
    """Test cases for the doubling map on [0, 1)."""

    def setUp(self):
        self.system = IntervalDoubling()

    def test_index_set_quarter(self):
        """Test that I_3(1/4) is {0, 1}."""
        self.assertEqual(index_set(self.system, Fraction(1, 4), 3), frozenset({0, 1}))

    def test_index_set_horizon_one(self):
        """Test that I_1(x) is {0} for any x."""
        for x in (Fraction(0), Fraction(1, 3), Fraction(9, 10)):
            self.assertEqual(index_set(self.system, x, 1), frozenset({0}))

    def test_index_set_zero(self):
        """Test that 0 lies in every domain."""
        self.assertEqual(index_set(self.system, Fraction(0), 5), frozenset(range(5)))

    def test_index_set_rejects_zero_horizon(self):
        """Test that a horizon of 0 is rejected."""
        with self.assertRaises(ValueError):
            index_set(self.system, Fraction(0), 0)

    def test_triangle_failure(self):
        """Test the exact values where d_3 breaks the triangle inequality."""
        zero, quarter, far = Fraction(0), Fraction(1, 4), Fraction(6, 25)
        self.assertEqual(iterate_distance(self.system, zero, far, 3), Fraction(24, 25))
        total = iterate_distance(self.system, zero, quarter, 3) + iterate_distance(self.system, quarter, far, 3)
        self.assertEqual(total, Fraction(13, 25))
        self.assertGreater(iterate_distance(self.system, zero, far, 3), total)

    def test_distance_single_index(self):
        """Test that d_n equals the base distance when only index 0 is shared."""
        x, y = Fraction(3, 4), Fraction(1, 10)
        self.assertEqual(iterate_distance(self.system, x, y, 4), abs(x - y))

    def test_dynamical_ball(self):
        """Test membership in dynamical balls around 0."""
        far = Fraction(6, 25)
        self.assertFalse(in_dynamical_ball(self.system, Fraction(0), far, 3, Fraction(24, 25)))
        self.assertTrue(in_dynamical_ball(self.system, Fraction(0), far, 1, Fraction(1, 2)))
        self.assertTrue(in_dynamical_ball(self.system, far, far, 3, Fraction(1, 100)))

    def test_shift_outside_domain(self):
        """Test that the shift refuses points outside [0, 1/2)."""
        with self.assertRaises(OutsideDomain):
            self.system.shift(Fraction(1, 2))

    def test_shift_composition(self):
        """Test that iterating the shift agrees with doubling."""
        x = Fraction(3, 64)
        self.assertEqual(self.system.iterate(x, 3), Fraction(3, 8))
        self.assertEqual(self.system.iterate(self.system.iterate(x, 1), 2), self.system.iterate(x, 3))

    def test_niceone_at_zero(self):
        """Test that the density check passes at 0."""
        report = check_hypothesis_niceone_sampled(self.system, [Fraction(0)], 4)
        self.assertTrue(report.passed)

    def test_niceone_near_boundary(self):
        """Test that the density check is inconclusive just below 1/4."""
        report = check_hypothesis_niceone_sampled(self.system, [Fraction(6, 25)], 3)
        self.assertFalse(report.passed)
        self.assertEqual(report.results[0].status, "inconclusive")
        self.assertEqual(report.results[0].failed_at[0], 3)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 5), st.integers(0, 999), st.integers(0, 999), st.integers(0, 999))
    def test_restricted_triangle(self, n, a, b, c):
        """Test the triangle inequality on Dom(σ^{n-1})."""
        scale = 1000 * 2 ** (n - 1)
        x, y, z = Fraction(a, scale), Fraction(b, scale), Fraction(c, scale)
        d = lambda p, q: iterate_distance(self.system, p, q, n)
        self.assertLessEqual(d(x, z), d(x, y) + d(y, z))

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 1023), st.integers(0, 1023))
    def test_symmetry_and_monotonicity(self, n, a, b):
        """Test symmetry, d_n(x, x) = 0 and d_n ≤ d_{n+1}."""
        x, y = Fraction(a, 1024), Fraction(b, 1024)
        self.assertEqual(iterate_distance(self.system, x, y, n), iterate_distance(self.system, y, x, n))
        self.assertEqual(iterate_distance(self.system, x, x, n), 0)
        self.assertLessEqual(iterate_distance(self.system, x, y, n), iterate_distance(self.system, x, y, n + 1))

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 1023), st.integers(1, 8))
    def test_index_set_is_initial_segment(self, a, n):
        """Test that I_n(x) is always {0, ..., m}."""
        indices = index_set(self.system, Fraction(a, 1024), n)
        self.assertEqual(indices, frozenset(range(max(indices) + 1)))
        self.assertIn(0, indices)


class TestPaddedBinary(unittest.TestCase):
    """Test cases for the padded binary system."""

    def setUp(self):
        self.system = PaddedBinary()
        self.x = BinaryWord.parse("000111111111")
        self.y = BinaryWord.parse("000011111111")
        self.z = BinaryWord.parse("001111111111")

    def test_distances(self):
        """Test d_2 on the three padded words."""
        self.assertEqual(iterate_distance(self.system, self.x, self.y, 2), Fraction(1))
        self.assertEqual(iterate_distance(self.system, self.x, self.z, 2), Fraction(1, 4))
        self.assertEqual(iterate_distance(self.system, self.z, self.y, 2), Fraction(1, 4))

    def test_domain(self):
        """Test that Dom(σ^n) is the cylinder of 3n zeros."""
        self.assertEqual(self.system.domain_horizon(self.x, 3), 1)
        self.assertEqual(self.system.domain_horizon(BinaryWord.parse("000000100"), 4), 2)
        self.assertEqual(self.system.domain_horizon(self.z, 2), 0)

    def test_shift_outside_domain(self):
        """Test that the shift refuses words not starting with 000."""
        with self.assertRaises(OutsideDomain):
            self.system.shift(self.z)

    def test_insufficient_depth(self):
        """Test that short truncations raise InsufficientDepth."""
        with self.assertRaises(InsufficientDepth):
            self.system.shift(BinaryWord.parse("00"))
        with self.assertRaises(InsufficientDepth):
            self.system.domain_horizon(BinaryWord.parse("0000"), 3)
        with self.assertRaises(InsufficientDepth):
            self.system.base_distance(BinaryWord.parse("01"), BinaryWord.parse("011"))

    def test_parse_rejects_garbage(self):
        """Test that only binary words parse."""
        with self.assertRaises(ValueError):
            BinaryWord.parse("012")


class TestGraphShiftDensity(unittest.TestCase):
    """Test cases for the density check on a graph shift."""

    def test_no_sinks_passes(self):
        """Test that infinite paths of a rose always have witnesses."""
        g = rose(2)
        system = GraphShiftSystem(g)
        sample = [extend_least(g, (0,), 6), extend_least(g, (1, 0), 6)]
        self.assertTrue(check_hypothesis_niceone_sampled(system, sample, 4).passed)


if __name__ == '__main__':
    unittest.main()
