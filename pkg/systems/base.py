"""Deaconu-Renault system contract.

This module provides the abstract system every concrete system implements
(domain queries, the partial shift, an exact base distance) together with
the derived notions shared by all of them: the index sets I_n, the
pseudo-metric d_n, dynamical balls and the sampled density check used to
sanity-check separated-set monotonicity.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

# Set up logging
logger = logging.getLogger(__name__)


class DRSystem(ABC):
    """A partial local homeomorphism with shrinking open domains Dom(σ^n).

    Points are opaque to this class. Implementations must keep
    `domain_horizon(x, n)` consistent with `shift`: `shift(x)` is defined
    exactly when `domain_horizon(x, 2) >= 1`.
    """

    name: str = "system"

    @abstractmethod
    def domain_horizon(self, x: Any, n: int) -> int:
        """Return the largest i < n with x ∈ Dom(σ^i)."""

    @abstractmethod
    def shift(self, x: Any) -> Any:
        """Apply σ once; raises OutsideDomain when x ∉ Dom(σ)."""

    @abstractmethod
    def base_distance(self, x: Any, y: Any) -> Fraction:
        """Exact distance between two points."""

    def iterate(self, x: Any, times: int) -> Any:
        for _ in range(times):
            x = self.shift(x)
        return x

    def in_domain(self, x: Any, i: int) -> bool:
        """Return True when x ∈ Dom(σ^i)."""
        return i == 0 or self.domain_horizon(x, i + 1) >= i

    def neighbourhood(self, x: Any, level: int) -> Iterator[Any]:
        """Candidate points of a basic neighbourhood of x that shrinks as `level` grows."""
        yield x


def index_set(system: DRSystem, x: Any, n: int) -> FrozenSet[int]:
    """I_n(x): the iterate indices below n at which x lies in Dom(σ^i).

    Args:
        system: The system
        x: A point of the system
        n: Horizon, at least 1

    Returns:
        frozenset {0, ..., m} with m = domain_horizon(x, n)
    """
    if n < 1:
        raise ValueError(f"horizon must be positive, got {n}")
    return frozenset(range(system.domain_horizon(x, n) + 1))


def iterate_distance(system: DRSystem, x: Any, y: Any, n: int) -> Fraction:
    """d_n(x, y): the maximum base distance over shared iterates below n."""
    if n < 1:
        raise ValueError(f"horizon must be positive, got {n}")
    shared = min(system.domain_horizon(x, n), system.domain_horizon(y, n))
    best = Fraction(0)
    for i in range(shared + 1):
        if i:
            x, y = system.shift(x), system.shift(y)
        best = max(best, Fraction(system.base_distance(x, y)))
    return best


def in_dynamical_ball(system: DRSystem, center: Any, candidate: Any, n: int, eps: Fraction) -> bool:
    """Membership in U(center, n, eps) = ⋂_{i ∈ I_n(center)} σ^{-i}(B(σ^i(center), eps))."""
    if n < 1 or eps <= 0:
        raise ValueError("horizon and radius must be positive")
    reach = system.domain_horizon(center, n)
    if system.domain_horizon(candidate, reach + 1) < reach:
        return False
    for i in range(reach + 1):
        if i:
            center, candidate = system.shift(center), system.shift(candidate)
        if system.base_distance(center, candidate) >= eps:
            return False
    return True


@dataclass
class NiceoneResult:
    point: Any
    status: str
    checked: List[int] = field(default_factory=list)
    witnesses: Dict[int, Any] = field(default_factory=dict)
    failed_at: Optional[Tuple[int, int]] = None


@dataclass
class NiceoneReport:
    system: str
    max_level: int
    results: List[NiceoneResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.status == "pass" for r in self.results)


def check_hypothesis_niceone_sampled(system: DRSystem, sample: Sequence[Any], n_max: int,
                                     max_level: int = 8) -> NiceoneReport:
    """Sampled check of the density hypothesis behind ssep monotonicity.

    For every sampled x and every n ≤ n_max with I_n(x) full, every
    neighbourhood level up to `max_level` must contain a candidate y with
    I_{n+1}(y) full. A sample passes when all of them do; otherwise it is
    reported inconclusive with the first (n, level) that lacked a witness.

    Args:
        system: The system to check
        sample: Points to check
        n_max: Largest horizon checked
        max_level: Number of shrinking neighbourhoods tried per horizon

    Returns:
        NiceoneReport with one result per sampled point
    """
    report = NiceoneReport(system.name, max_level)
    for x in sample:
        result = NiceoneResult(x, "pass")
        for n in range(1, n_max + 1):
            if system.domain_horizon(x, n) != n - 1:
                continue
            result.checked.append(n)
            for level in range(1, max_level + 1):
                witness = next((y for y in system.neighbourhood(x, level)
                                if system.domain_horizon(y, n + 1) == n), None)
                if witness is None:
                    result.status = "inconclusive"
                    result.failed_at = (n, level)
                    break
                result.witnesses[n] = witness
            if result.failed_at is not None:
                break
        if result.status != "pass":
            logger.warning(f"No witness for {x!r} in {system.name} at horizon/level {result.failed_at}")
        report.results.append(result)
    logger.info(f"Density check on {system.name}: {len(sample)} samples, passed={report.passed}")
    return report
