"""The doubling map on the unit interval.

This module provides the system σ(x) = 2x with Dom(σ^n) = [0, 1/2^n),
the smallest example where d_n fails the triangle inequality off
Dom(σ^{n-1}). All arithmetic is exact (Fraction).
"""

import logging
from fractions import Fraction
from typing import Iterator

from systems.base import DRSystem
from utils.errors import OutsideDomain

# Set up logging
logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


class IntervalDoubling(DRSystem):
    """σ(x) = 2x on [0, 1) with Dom(σ^n) = [0, 1/2^n)."""

    def __init__(self):
        self.name = "interval_doubling"

    @staticmethod
    def point(value) -> Fraction:
        x = Fraction(value)
        if not 0 <= x < 1:
            raise ValueError(f"{value} is outside [0, 1)")
        return x

    def domain_horizon(self, x: Fraction, n: int) -> int:
        i = 0
        while i + 1 < n and x < HALF ** (i + 1):
            i += 1
        return i

    def shift(self, x: Fraction) -> Fraction:
        if not x < HALF:
            raise OutsideDomain(f"{x} is not in Dom(σ) = [0, 1/2)")
        return 2 * x

    def base_distance(self, x: Fraction, y: Fraction) -> Fraction:
        return abs(Fraction(x) - Fraction(y))

    def in_closed_domain(self, x: Fraction, i: int) -> bool:
        """x ∈ cl Dom(σ^i) = [0, 1/2^i]."""
        return x <= HALF ** i

    def neighbourhood(self, x: Fraction, level: int) -> Iterator[Fraction]:
        """Points within 1/2^level of x, stepping down towards 0."""
        radius = HALF ** level
        yield x
        for j in range(1, 64):
            yield max(Fraction(0), x - radius * (1 - HALF ** j))
        if x < radius:
            yield Fraction(0)
