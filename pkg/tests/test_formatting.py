"""Tests for report formatting.

This module contains unit tests for number rendering and the table, csv
and json report formats.
"""

import json
import math
import unittest
from fractions import Fraction
import sys
import os

# Add the parent directory to the path so we can import the modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from utils.formatting import (
    format_csv,
    format_failures,
    format_json,
    format_number,
    format_table,
    make_document,
    render,
)


def _document():
    rows = [{"n": 1, "paths": 2}, {"n": 2, "paths": 4}]
    return make_document("entropy finite", "rose:2", ["n", "paths"], rows, {"estimate": math.log(2), "exact": True})


class TestFormatNumber(unittest.TestCase):
    """Test cases for number rendering."""

    def test_floats(self):
        """Test 12 significant digits and the special values."""
        self.assertEqual(format_number(0.1 + 0.2), "0.3")
        self.assertEqual(format_number(1.0), "1")
        self.assertEqual(format_number(math.log(2)), "0.69314718056")
        self.assertEqual(format_number(math.inf), "inf")
        self.assertEqual(format_number(-math.inf), "-inf")

    def test_other_values(self):
        """Test rationals, booleans, integers and missing values."""
        self.assertEqual(format_number(Fraction(1, 4)), "1/4")
        self.assertEqual(format_number(True), "true")
        self.assertEqual(format_number(12345678901234567890), "12345678901234567890")
        self.assertEqual(format_number(None), "")


class TestFormats(unittest.TestCase):
    """Test cases for the three output formats."""

    def test_document(self):
        """Test the versioned document layout."""
        document = _document()
        self.assertEqual(document["schema"], 1)
        self.assertEqual(document["columns"], ["n", "paths"])
        self.assertEqual(len(document["rows"]), 2)

    def test_table(self):
        """Test the aligned table and its summary."""
        lines = format_table(_document()).splitlines()
        self.assertEqual(lines[0], "entropy finite: rose:2")
        self.assertEqual(lines[1], "n  paths")
        self.assertEqual(lines[2], "-  -----")
        self.assertEqual(lines[3], "1      2")
        self.assertIn("estimate  0.69314718056", lines)
        self.assertIn("exact     true", lines)

    def test_csv(self):
        """Test the csv rows."""
        self.assertEqual(format_csv(_document()), "n,paths\n1,2\n2,4\n")

    def test_json(self):
        """Test the json document."""
        parsed = json.loads(format_json(_document()))
        self.assertEqual(parsed["schema"], 1)
        self.assertEqual(parsed["rows"][1], {"n": 2, "paths": 4})
        self.assertEqual(parsed["summary"]["estimate"], 0.69314718056)
        self.assertIs(parsed["summary"]["exact"], True)

    def test_json_rationals(self):
        """Test that rationals become exact strings in json."""
        document = make_document("verify", "metrics", ["eps"], [{"eps": Fraction(1, 8)}])
        self.assertEqual(json.loads(format_json(document))["rows"][0]["eps"], "1/8")

    def test_render(self):
        """Test dispatch by format name."""
        self.assertEqual(render(_document(), "csv"), format_csv(_document()))
        with self.assertRaises(ValueError):
            render(_document(), "xml")

    def test_failures(self):
        """Test the failure dump."""
        self.assertEqual(format_failures([]), "")
        text = format_failures([{"check": "ssep", "passed": False, "detail": "2 vs 3"}])
        self.assertEqual(text, "Failed checks:\n  ssep: passed=false, detail=2 vs 3\n")


if __name__ == '__main__':
    unittest.main()
