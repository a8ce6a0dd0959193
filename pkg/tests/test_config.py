"""Tests for configuration settings.

This module contains unit tests for environment validation and the
per-run settings.
"""

import unittest
from unittest.mock import patch
import sys
import os

# Add the parent directory to the path so we can import the modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import RunConfig, validate_positive, validate_seed, validate_thread_count


class TestValidation(unittest.TestCase):
    """Test cases for the environment validators."""

    def test_positive_values(self):
        """Test that well-formed values are kept."""
        self.assertEqual(validate_positive("X", "12", "4"), 12)
        self.assertEqual(validate_positive("X", "1e-6", "1e-9", float), 1e-6)

    def test_fallback(self):
        """Test that malformed and non-positive values fall back to the default."""
        with self.assertLogs("config", level="WARNING"):
            self.assertEqual(validate_positive("X", "many", "4"), 4)
        with self.assertLogs("config", level="WARNING"):
            self.assertEqual(validate_positive("X", "-3", "4"), 4)

    def test_seed(self):
        """Test that zero is a valid seed and malformed seeds fall back to 0."""
        self.assertEqual(validate_seed("0"), 0)
        self.assertEqual(validate_seed("42"), 42)
        with self.assertLogs("config", level="WARNING"):
            self.assertEqual(validate_seed("abc"), 0)
        with self.assertLogs("config", level="WARNING"):
            self.assertEqual(validate_seed("-5"), 0)

    def test_thread_count_capped(self):
        """Test that the thread count is capped at the CPU count."""
        with patch("config.os.cpu_count", return_value=2):
            self.assertEqual(validate_thread_count("8"), 2)
            self.assertEqual(validate_thread_count("1"), 1)
        with patch("config.os.cpu_count", return_value=None):
            self.assertEqual(validate_thread_count("8"), 1)


class TestRunConfig(unittest.TestCase):
    """Test cases for per-run settings."""

    def test_defaults(self):
        """Test the default budgets and format."""
        run = RunConfig()
        self.assertEqual(run.budgets, tuple(range(2, 21, 2)))
        self.assertEqual(run.output_format, "table")

    def test_rejects_bad_values(self):
        """Test that bad horizons, schedules and formats raise ValueError."""
        for fields in ({"n_max": 0}, {"eps_exponents": ()}, {"depth": -1}, {"budgets": (0,)},
                       {"tolerance": 0.0}, {"output_format": "xml"}, {"threads": 0}):
            with self.assertRaises(ValueError, msg=str(fields)):
                RunConfig(**fields)


if __name__ == '__main__':
    unittest.main()
