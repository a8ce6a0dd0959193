"""Tests for the report service.

This module contains tests for the Flask endpoints, using the Flask test
client.
"""

import math
import unittest
from unittest.mock import patch
import sys
import os

# Add the parent directory to the path so we can import the modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from main import app


class TestService(unittest.TestCase):
    """Test cases for the report service endpoints."""

    def setUp(self):
        app.config["TESTING"] = True
        self.client = app.test_client()

    def test_home(self):
        """Test the home endpoint."""
        response = self.client.get("/")
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.get_json()["status"], "ok")

    def test_health(self):
        """Test the health check."""
        self.assertEqual(self.client.get("/health").get_json(), {"status": "healthy"})

    def test_finite(self):
        """Test the finite report for rose:2."""
        response = self.client.get("/entropy/finite/rose:2?nmax=6")
        self.assertEqual(response.status_code, 200)
        body = response.get_json()
        self.assertEqual(body["status"], "ok")
        self.assertEqual(body["exit_code"], 0)
        self.assertEqual([row["paths"] for row in body["rows"]], [2, 4, 8, 16, 32, 64])
        self.assertAlmostEqual(body["summary"]["spectral_entropy"], math.log(2))

    def test_cover(self):
        """Test the renewal cover report."""
        body = self.client.get("/entropy/cover/renewal:1?nmax=4").get_json()
        self.assertEqual([row["count"] for row in body["rows"]], [3, 6, 12, 24, 48])
        self.assertTrue(body["summary"]["doubling"])

    def test_horizon_capped(self):
        """Test that a huge nmax is capped at the service limit."""
        with patch("main.config.SERVICE_N_MAX", 5):
            body = self.client.get("/entropy/finite/rose:2?nmax=100000").get_json()
            cover = self.client.get("/entropy/cover/renewal:1?nmax=100000").get_json()
        self.assertEqual(len(body["rows"]), 5)
        self.assertEqual([row["count"] for row in cover["rows"]], [3 * 2 ** n for n in range(6)])

    def test_bad_spec(self):
        """Test that an unknown family is a 400 error."""
        response = self.client.get("/entropy/finite/petersen")
        self.assertEqual(response.status_code, 400)
        self.assertEqual(response.get_json()["status"], "error")

    def test_infinite_rejected(self):
        """Test that the finite endpoint refuses an infinite family."""
        self.assertEqual(self.client.get("/entropy/finite/ladder").status_code, 400)


if __name__ == '__main__':
    unittest.main()
