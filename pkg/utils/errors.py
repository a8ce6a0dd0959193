"""Error types for the entropy toolkit.

This module provides the exception hierarchy raised by the library code.
Command handlers translate these into exit codes and the web service into
JSON error responses.
"""

from fractions import Fraction
from typing import Optional


class EntropyError(Exception):
    """Base class for every failure raised by the toolkit."""


class InsufficientDepth(EntropyError):
    """A truncated point is too short to decide the requested quantity."""


class OutsideDomain(EntropyError):
    """The shift was applied to a point outside Dom(σ)."""


class LengthZero(OutsideDomain):
    """The shift was applied to a zero-length point, which is outside Dom(σ)."""


class InsufficientBudget(EntropyError):
    """The enumeration budget ran out before a deciding index was found."""

    def __init__(self, message: str, upper_bound: Optional[Fraction] = None):
        super().__init__(message)
        self.upper_bound = upper_bound


class SinkFound(EntropyError):
    """A vertex emits no edge."""

    def __init__(self, vertex: str):
        super().__init__(f"vertex {vertex} is a sink")
        self.vertex = vertex


class RfumViolation(EntropyError):
    """An edge range has no finite-emitter/minimal-emitter decomposition."""

    def __init__(self, edge: str, reason: str = ""):
        super().__init__(f"range of edge {edge} cannot be decomposed{': ' + reason if reason else ''}")
        self.edge = edge


class EmptySubgraph(EntropyError):
    """Sink pruning removed every edge of a finite truncation."""


class UnknownFamily(EntropyError):
    """A built-in family name was not recognised."""


class DensityInsufficient(EntropyError):
    """Representatives are too sparse for an exact separated-set count."""

    def __init__(self, density: Fraction, eps: Fraction):
        super().__init__(f"representative density {density} exceeds eps/4 = {eps / 4}")
        self.density = density
        self.eps = eps


class BudgetExceeded(EntropyError):
    """An exact computation would exceed its configured size budget."""

    def __init__(self, size: int, budget: int, what: str = "atoms"):
        super().__init__(f"{what}: {size} exceeds budget {budget}")
        self.size = size
        self.budget = budget


class UnboundedPreimage(EntropyError):
    """A symbolic preimage needs infinitely many cylinders."""


class NonConvergence(EntropyError):
    """An iteration hit its cap before meeting the tolerance."""


class GraphParseError(EntropyError):
    """A graph file could not be parsed."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
