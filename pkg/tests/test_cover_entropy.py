"""Tests for cover entropy.

This module contains unit tests for cylinder covers, joins and pullbacks,
exact minimal subcover counts, Fekete sequences and the renewal covers.
"""

import math
import unittest
from fractions import Fraction
import sys
import os

# Add the parent directory to the path so we can import the modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from entropy.covers import (
    Cover,
    FeketeSequence,
    cover_diameter,
    cover_entropy_estimate,
    covers_carrier,
    join,
    make_cover,
    minimal_subcover_count,
    overlapping_cover,
    partition_counts,
    pullback,
    pullback_cylinder,
    refined_cover,
    renewal_cover,
    trivial_cover,
    verify_cover_lemmas,
    whole_space,
    word_cover,
)
from graphs.builtins import LadderFamily, RenewalUltragraph, rose
from graphs.model import RangeSet
from systems.shift_space import CylinderSet, GraphShiftSystem


class TestCovers(unittest.TestCase):
    """Test cases for building covers."""

    def setUp(self):
        self.g = rose(2)

    def test_word_cover(self):
        """Test that word covers are partitions into word cylinders."""
        cover = word_cover(rose(3), 2)
        self.assertEqual(len(cover), 9)
        self.assertTrue(cover.is_partition())
        self.assertEqual(cover.name, "words:2")

    def test_word_cover_errors(self):
        """Test that word covers need a finite graph and positive depth."""
        with self.assertRaises(ValueError):
            word_cover(LadderFamily(), 1)
        with self.assertRaises(ValueError):
            word_cover(self.g, 0)

    def test_overlap_is_not_partition(self):
        """Test the overlapping three-member cover."""
        cover = overlapping_cover(self.g)
        self.assertEqual(len(cover), 3)
        self.assertFalse(cover.is_partition())
        self.assertEqual(minimal_subcover_count(cover), 2)

    def test_empty_member_rejected(self):
        """Test that a cover member must be nonempty."""
        with self.assertRaises(ValueError):
            Cover(self.g, ((),))

    def test_whole_space(self):
        """Test the whole space of the renewal shift and a non-compact family."""
        self.assertEqual(whole_space(RenewalUltragraph()), (CylinderSet((), RangeSet.of_emitter("V")),))
        with self.assertRaises(ValueError):
            whole_space(LadderFamily())

    def test_covers_carrier(self):
        """Test the symbolic covering check."""
        self.assertTrue(covers_carrier(word_cover(self.g, 2)))
        partial = make_cover(self.g, [(CylinderSet.make(self.g, (0,)),)])
        self.assertFalse(covers_carrier(partial))

    def test_pullback_and_join(self):
        """Test that joining with a pullback refines words by one edge."""
        words = word_cover(self.g, 1)
        pulled = pullback(words)
        self.assertEqual(len(pulled), 2)
        self.assertEqual(sorted(c.word for c in pulled.members[0]), [(0, 0), (1, 0)])
        self.assertEqual(len(join(words, pulled)), 4)
        self.assertEqual(len(refined_cover(words, 2)), 8)

    def test_diameter(self):
        """Test the d_X diameter bound of the depth-1 word cover of rose(2)."""
        system = GraphShiftSystem(self.g)
        self.assertEqual(cover_diameter(word_cover(self.g, 1), system), Fraction(1, 16))


class TestSubcoverCounts(unittest.TestCase):
    """Test cases for N(α_n, K_n)."""

    def test_rose_word_cover(self):
        """Test that the depth-1 cover of rose(3) gives 3^(n+1)."""
        self.assertEqual(partition_counts(word_cover(rose(3), 1), 4), [3, 9, 27, 81, 243])

    def test_trivial_cover(self):
        """Test that the trivial cover always needs one member."""
        self.assertEqual(partition_counts(trivial_cover(rose(2)), 3), [1, 1, 1, 1])

    def test_carrier_restriction(self):
        """Test that a partition counts only the members meeting the carrier."""
        g = rose(3)
        cover = word_cover(g, 1)
        self.assertEqual(minimal_subcover_count(cover, [CylinderSet.make(g, (0,))]), 1)
        self.assertEqual(minimal_subcover_count(cover), 3)

    def test_renewal_sizes(self):
        """Test M = 1 + |Q| + |R| for the first renewal covers."""
        first = renewal_cover(1)
        self.assertEqual((first.size, first.q_words, first.r_words), (3, (), ((0,), (1,))))
        second = renewal_cover(2)
        self.assertEqual(second.size, 7)
        self.assertEqual(second.q_words, ((0,),))
        self.assertTrue(second.cover.is_partition())

    def test_renewal_doubling(self):
        """Test that renewal counts double exactly."""
        for m in (1, 2, 3):
            renewal = renewal_cover(m)
            counts = partition_counts(renewal.cover, 6)
            self.assertEqual(counts, [2 ** n * renewal.size for n in range(7)])

    def test_renewal_doubling_long_horizon(self):
        """Test that renewal counts double exactly up to n = 16 for every m ≤ 5."""
        for m in (1, 3, 5):
            renewal = renewal_cover(m)
            counts = partition_counts(renewal.cover, 16)
            self.assertEqual(counts, [2 ** n * renewal.size for n in range(17)], msg=f"m={m}")

    def test_pullback_past_fold_window(self):
        """Test that the emitter fold widens for large excluded sets."""
        g = RenewalUltragraph()
        tail = CylinderSet((), RangeSet.of_emitter("V"), frozenset(range(1, 40)), includes_base=False)
        pieces = pullback_cylinder(g, tail)
        self.assertIn(frozenset(range(41)), [c.excluded for c in pieces if not c.word])

    def test_renewal_index(self):
        """Test that the cover index must be positive."""
        with self.assertRaises(ValueError):
            renewal_cover(0)


class TestFekete(unittest.TestCase):
    """Test cases for Fekete sequences and the cover estimate."""

    def test_ratios(self):
        """Test a_n / n and the running infimum."""
        sequence = FeketeSequence([3, 9, 27])
        self.assertAlmostEqual(sequence.ratios[0], math.log(9))
        self.assertAlmostEqual(sequence.ratios[1], math.log(27) / 2)
        self.assertAlmostEqual(sequence.running_inf[-1], math.log(27) / 2)

    def test_violations(self):
        """Test that a superadditive jump is reported."""
        self.assertEqual(FeketeSequence([1, 2, 5]).subadditivity_violations(), [(1, 1)])
        self.assertEqual(FeketeSequence([1, 3, 9, 27]).subadditivity_violations(), [])

    def test_estimate(self):
        """Test the slope and running infimum on rose(3)."""
        report = cover_entropy_estimate(word_cover(rose(3), 1), None, 4)
        self.assertEqual(report.method, "partition")
        self.assertEqual(report.window, (2, 4))
        self.assertAlmostEqual(report.slope, math.log(3))
        self.assertAlmostEqual(report.estimate, 5 * math.log(3) / 4)
        self.assertFalse(report.doubling)

    def test_renewal_estimate(self):
        """Test that the renewal cover estimate has slope log 2."""
        report = cover_entropy_estimate(renewal_cover(2).cover, None, 6)
        self.assertTrue(report.doubling)
        self.assertAlmostEqual(report.slope, math.log(2))

    def test_rejects_zero_horizon(self):
        """Test that n_max must be positive."""
        with self.assertRaises(ValueError):
            cover_entropy_estimate(word_cover(rose(2), 1), None, 0)


class TestCoverLemmas(unittest.TestCase):
    """Test cases for the cover lemma checks."""

    def test_selected_checks(self):
        """Test the overlap and renewal checks."""
        report = verify_cover_lemmas(["overlap", "renewal"], n_max=3)
        self.assertTrue(report.passed)
        self.assertEqual({c.name for c in report.checks}, {"overlap", "renewal"})

    def test_unknown_check(self):
        """Test that unknown check names are rejected."""
        with self.assertRaises(ValueError):
            verify_cover_lemmas(["triangle"])


if __name__ == '__main__':
    unittest.main()
