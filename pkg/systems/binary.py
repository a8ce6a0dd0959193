"""Padded binary sequences.

This module provides the system on one-sided binary sequences whose n-th
iterate is only defined on the cylinder [0^{3n}] and drops 3n symbols.
Points are finite truncations that carry their depth; anything that needs
a symbol beyond the depth raises InsufficientDepth.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Tuple

from systems.base import DRSystem
from utils.errors import InsufficientDepth, OutsideDomain

# Set up logging
logger = logging.getLogger(__name__)

BLOCK = 3


@dataclass(frozen=True)
class BinaryWord:
    """A truncated binary sequence; `bits` holds the first len(bits) symbols."""

    bits: Tuple[int, ...]

    @classmethod
    def parse(cls, text: str) -> "BinaryWord":
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a binary word: {text!r}")
        return cls(tuple(int(c) for c in text))

    @property
    def depth(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits)) + "…"


class PaddedBinary(DRSystem):
    """Dom(σ^n) = [0^{3n}], σ^n drops 3n symbols, d(x, y) = 1/2^i at the first disagreement i."""

    def __init__(self):
        self.name = "padded_binary"

    def domain_horizon(self, x: BinaryWord, n: int) -> int:
        i = 0
        while i + 1 < n:
            block = x.bits[BLOCK * i:BLOCK * (i + 1)]
            if len(block) < BLOCK:
                if any(block):
                    break
                raise InsufficientDepth(f"{x} has depth {x.depth}, cannot decide Dom(σ^{i + 1})")
            if any(block):
                break
            i += 1
        return i

    def shift(self, x: BinaryWord) -> BinaryWord:
        if x.depth < BLOCK:
            raise InsufficientDepth(f"{x} is too short to shift")
        if any(x.bits[:BLOCK]):
            raise OutsideDomain(f"{x} is not in Dom(σ) = [000]")
        return BinaryWord(x.bits[BLOCK:])

    def base_distance(self, x: BinaryWord, y: BinaryWord) -> Fraction:
        for i, (a, b) in enumerate(zip(x.bits, y.bits)):
            if a != b:
                return Fraction(1, 2 ** i)
        if x.bits == y.bits:
            return Fraction(0)
        raise InsufficientDepth(f"{x} and {y} agree on their common depth")

    def neighbourhood(self, x: BinaryWord, level: int) -> Iterator[BinaryWord]:
        """Words agreeing with x on the first `level` symbols."""
        keep = x.bits[:level]
        yield x
        yield BinaryWord(keep + (0,) * max(0, x.depth - len(keep)))
