"""Shift spaces of graphs and ultragraphs.

This module provides the Deaconu-Renault system of an ultragraph: ultrapath
points (truncated infinite paths and the finite points ending in a minimal
infinite emitter), cylinder sets, the staged enumeration of ultrapaths that
defines the metrics d_X and d_1, the first-difference and Gurevich metrics
of the row-finite case, ε-dense representative sampling and empirical
modulus-of-continuity tables.
"""

import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Any, Dict, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

import config
from graphs.model import RangeSet, Ultragraph
from systems.base import DRSystem
from utils.errors import InsufficientBudget, InsufficientDepth, LengthZero

# Set up logging
logger = logging.getLogger(__name__)

METRICS = ("dX", "d1", "first_difference", "gurevich")
ORDERS = ("shortlex", "reverse")


@dataclass(frozen=True)
class Ultrapath:
    """A point of the shift space.

    `tail` is None for an infinite path, of which `word` holds the first
    `depth` edges. Otherwise the point is the finite ultrapath (word, tail)
    with `tail` the identifier of a minimal infinite emitter.
    """

    word: Tuple[int, ...]
    tail: Optional[str] = None

    @property
    def is_finite(self) -> bool:
        return self.tail is not None

    @property
    def depth(self) -> Optional[int]:
        return None if self.is_finite else len(self.word)

    def label(self, g: Ultragraph) -> str:
        body = g.word_label(self.word)
        if self.is_finite:
            return f"({body},{{{self.tail}}})"
        return body + "…"


class PathItem(NamedTuple):
    """An ultrapath (β, B) used as an index of the enumeration."""

    word: Tuple[int, ...]
    rset: RangeSet

    def label(self, g: Ultragraph) -> str:
        return f"({g.word_label(self.word)},{self.rset.label()})"


def word_range(g: Ultragraph, word: Sequence[int]) -> Optional[RangeSet]:
    return g.range_of(word[-1]) if word else None


def extend_least(g: Ultragraph, word: Sequence[int], depth: int) -> Ultrapath:
    """Truncated infinite point continuing `word` by least-indexed admissible edges."""
    path = list(word)
    while len(path) < depth:
        path.append(g.least_successor(path[-1]))
    return Ultrapath(tuple(path))


def segment_status(g: Ultragraph, item: PathItem, x: Ultrapath) -> Optional[bool]:
    """Whether `item` is an initial segment of x; None when x is too short to tell."""
    beta, rset = item
    word = x.word
    if x.is_finite:
        if len(beta) > len(word) or word[:len(beta)] != beta:
            return False
        if len(beta) < len(word):
            return rset.contains(g, g.source(word[len(beta)]))
        return rset.covers(g, RangeSet.of_emitter(x.tail))
    if word[:len(beta)] != beta[:len(word)]:
        return False
    if len(word) <= len(beta):
        return None
    return rset.contains(g, g.source(word[len(beta)]))


@dataclass(frozen=True)
class CylinderSet:
    """D_{(word, base), excluded}: points extending `word` whose next edge starts in
    `base` and is not excluded, plus, when `includes_base` is set, the finite
    points (word, A) with A a minimal infinite emitter inside `base`.
    """

    word: Tuple[int, ...]
    base: RangeSet
    excluded: frozenset = frozenset()
    includes_base: bool = True

    @classmethod
    def make(cls, g: Ultragraph, word: Sequence[int], base: Optional[RangeSet] = None,
             excluded: Sequence[int] = (), includes_base: bool = True) -> "CylinderSet":
        word = tuple(word)
        rng = word_range(g, word)
        if base is None:
            if rng is None:
                raise ValueError("a zero-length cylinder needs an explicit base")
            base = rng
        elif rng is not None:
            base = base.intersection(g, rng)
        return cls(word, base, frozenset(excluded), includes_base)

    def allows(self, g: Ultragraph, edge: int) -> bool:
        return edge not in self.excluded and self.base.contains(g, g.source(edge))

    def finite_points(self) -> Tuple[Ultrapath, ...]:
        if not self.includes_base:
            return ()
        return tuple(Ultrapath(self.word, eid) for eid in self.base.emitter_parts)

    def is_empty(self, g: Ultragraph) -> bool:
        if self.finite_points() or self.base.emitter_parts:
            return False
        return not any(h not in self.excluded for v in self.base.finite_part for h in g.out_edges(v))

    def contains(self, g: Ultragraph, x: Ultrapath) -> Optional[bool]:
        w = self.word
        if x.word[:len(w)] != w[:len(x.word)]:
            return False
        if x.is_finite:
            if len(x.word) < len(w):
                return False
            if len(x.word) == len(w):
                return self.includes_base and self.base.covers(g, RangeSet.of_emitter(x.tail))
            return self.allows(g, x.word[len(w)])
        if len(x.word) <= len(w):
            return None
        return self.allows(g, x.word[len(w)])

    def intersect(self, other: "CylinderSet", g: Ultragraph) -> Optional["CylinderSet"]:
        """Intersection of two cylinders, or None when it is empty."""
        short, long_ = (self, other) if len(self.word) <= len(other.word) else (other, self)
        if long_.word[:len(short.word)] != short.word:
            return None
        if len(short.word) == len(long_.word):
            merged = CylinderSet(short.word, short.base.intersection(g, long_.base),
                                 short.excluded | long_.excluded,
                                 short.includes_base and long_.includes_base)
            return None if merged.is_empty(g) else merged
        if short.allows(g, long_.word[len(short.word)]):
            return long_
        return None

    def forced(self, g: Ultragraph, limit: int) -> "CylinderSet":
        """Extend the word while the cylinder has a single continuation and no finite points."""
        cyl = self
        while len(cyl.word) < limit and not cyl.base.emitter_parts:
            allowed = [h for v in sorted(cyl.base.finite_part) for h in g.out_edges(v) if h not in cyl.excluded]
            if len(allowed) != 1:
                break
            cyl = CylinderSet(cyl.word + (allowed[0],), g.range_of(allowed[0]))
        return cyl

    def label(self, g: Ultragraph) -> str:
        text = f"D[{g.word_label(self.word)},{self.base.label()}"
        if self.excluded:
            text += ",F=" + "".join(g.edge(i).name for i in sorted(self.excluded))
        if not self.includes_base:
            text += ",open"
        return text + "]"


def cylinder_status(g: Ultragraph, item: PathItem, cyl: CylinderSet) -> Optional[bool]:
    """Common status of `item` on every point of `cyl`, None when it varies (or is not known)."""
    cyl = cyl.forced(g, len(item.word))
    w, beta = cyl.word, item.word
    if len(beta) < len(w):
        if w[:len(beta)] != beta:
            return False
        return item.rset.contains(g, g.source(w[len(beta)]))
    if beta[:len(w)] != w:
        return False
    if len(beta) == len(w):
        if item.rset.covers(g, cyl.base):
            return True
        if item.rset.disjoint_from(g, cyl.base):
            return False
        return _next_edge_status(g, item.rset, cyl)
    if not cyl.allows(g, beta[len(w)]):
        return False
    return None


def _next_edge_status(g: Ultragraph, rset: RangeSet, cyl: CylinderSet) -> Optional[bool]:
    """Status of (cyl.word, rset) on a cylinder whose base rset neither covers nor avoids.

    Decided by where the allowed next edges start, taking the excluded
    edges into account, and by the finite points the cylinder holds.
    """
    statuses = {rset.covers(g, RangeSet.of_emitter(eid)) for eid in cyl.base.emitter_parts} if cyl.includes_base else set()
    inside = bool(set(rset.emitter_parts) & set(cyl.base.emitter_parts)) or any(
        h not in cyl.excluded for v in rset.finite_part if cyl.base.contains(g, v) for h in g.out_edges(v)
    )
    outside = any(eid not in rset.emitter_parts for eid in cyl.base.emitter_parts) or any(
        h not in cyl.excluded for v in cyl.base.finite_part if not rset.contains(g, v) for h in g.out_edges(v)
    )
    if inside:
        statuses.add(True)
    if outside:
        statuses.add(False)
    return statuses.pop() if len(statuses) == 1 else None


class PathEnumeration:
    """The staged enumeration p_1, p_2, ... of ultrapaths.

    Stage k lists, without repeats, the ultrapaths whose word has length at
    most k over the first k edges and whose range part is built from the
    first k generators (minimal infinite emitters first, then vertices).
    Kind "S" uses single generators as range parts; kind "P" uses every
    nonempty union of them. Within a stage items are shortlex ordered, or
    longest-first for the "reverse" order. Stages are produced lazily, so
    only the prefix that is actually asked for gets built.
    """

    def __init__(self, g: Ultragraph, kind: str = "P", order: str = "shortlex"):
        if kind not in ("P", "S"):
            raise ValueError(f"unknown enumeration kind {kind}")
        if order not in ORDERS:
            raise ValueError(f"unknown enumeration order {order}")
        self.graph = g
        self.kind = kind
        self.order = order
        self._items: List[PathItem] = []
        self._seen: Set[PathItem] = set()
        self._index: Dict[PathItem, int] = {}
        self._stage = 0
        self._stream: Optional[Iterator[PathItem]] = None
        self._generators: List[RangeSet] = [RangeSet.of_emitter(em.identifier) for em in g.emitters()]
        self._emitter_vertices = {v for em in g.emitters() if em.vertices for v in em.vertices}
        self._vertex_cursor = 0
        self._lock = threading.RLock()

    def generators(self, k: int) -> List[RangeSet]:
        g = self.graph
        while len(self._generators) < k:
            if g.num_vertices is not None and self._vertex_cursor >= g.num_vertices:
                break
            v = g.vertex(self._vertex_cursor)
            self._vertex_cursor += 1
            if v not in self._emitter_vertices:
                self._generators.append(RangeSet.of_vertices(v))
        return self._generators[:k]

    def _range_options(self, candidates: List[RangeSet]) -> List[RangeSet]:
        if self.kind == "S":
            options = list(candidates)
        else:
            options = []
            for size in range(1, len(candidates) + 1):
                for combo in combinations(candidates, size):
                    union = combo[0]
                    for part in combo[1:]:
                        union = union.union(self.graph, part)
                    if union not in options:
                        options.append(union)
        return sorted(options, key=lambda rset: rset.sort_key(self.graph))

    def _words(self, k: int) -> List[List[Tuple[int, ...]]]:
        g = self.graph
        limit = k if g.num_edges is None else min(k, g.num_edges)
        edges = range(limit)
        layers = [[()]]
        while len(layers) <= k:
            if len(layers) == 1:
                nxt = [(e,) for e in edges]
            else:
                nxt = [w + (e,) for w in layers[-1] for e in edges if g.follows(w[-1], e)]
            if not nxt:
                break
            layers.append(nxt)
        return layers

    def _stage_stream(self, k: int) -> Iterator[PathItem]:
        g = self.graph
        gens = self.generators(k)
        layers = self._words(k)
        lengths = range(len(layers)) if self.order == "shortlex" else reversed(range(len(layers)))
        for length in lengths:
            for word in layers[length]:
                if word:
                    rng = g.range_of(word[-1])
                    candidates = [b for b in gens if rng.covers(g, b)]
                else:
                    candidates = gens
                for rset in self._range_options(candidates):
                    item = PathItem(word, rset)
                    if item not in self._seen:
                        yield item

    def item(self, i: int) -> PathItem:
        """The i-th ultrapath (1-based)."""
        if i < 1:
            raise IndexError(i)
        if i <= len(self._items):
            return self._items[i - 1]
        with self._lock:
            return self._extend_to(i)

    def _extend_to(self, i: int) -> PathItem:
        idle = 0
        while len(self._items) < i:
            if self._stream is None:
                self._stage += 1
                self._stream = self._stage_stream(self._stage)
            item = next(self._stream, None)
            if item is None:
                self._stream = None
                idle += 1
                if idle > 64:
                    raise InsufficientBudget(f"enumeration of {self.graph.name} stopped growing at stage {self._stage}")
                continue
            idle = 0
            self._seen.add(item)
            self._items.append(item)
            self._index[item] = len(self._items)
        return self._items[i - 1]

    def items(self, count: int) -> List[PathItem]:
        if count > 0:
            self.item(count)
        return self._items[:count]

    def index_of(self, item: PathItem, budget: int) -> Optional[int]:
        self.items(budget)
        position = self._index.get(item)
        return position if position is not None and position <= budget else None

    def __iter__(self) -> Iterator[PathItem]:
        i = 1
        while True:
            yield self.item(i)
            i += 1


def shift_apply(g: Ultragraph, x: Ultrapath) -> Ultrapath:
    """σ(x): drop the first edge; (γ1, A) maps to (A, A).

    Raises:
        LengthZero: x has length zero and is outside Dom(σ)
        InsufficientDepth: x is a truncated infinite path with a single known edge
    """
    if not x.word:
        raise LengthZero(f"{x.label(g)} has length zero")
    if not x.is_finite and len(x.word) < 2:
        raise InsufficientDepth(f"{x.label(g)} is truncated at depth {len(x.word)}")
    return Ultrapath(x.word[1:], x.tail)


def metric_enumerated(enumeration: PathEnumeration, x: Ultrapath, y: Ultrapath, enum_budget: int) -> Fraction:
    """1/2^i for the least i ≤ enum_budget with p_i an initial segment of exactly one point.

    Raises:
        InsufficientDepth: A truncated point cannot decide some p_i before the deciding index
        InsufficientBudget: No deciding index within the budget (carries the upper bound)
    """
    if x == y:
        return Fraction(0)
    g = enumeration.graph
    for i in range(1, enum_budget + 1):
        item = enumeration.item(i)
        sx, sy = segment_status(g, item, x), segment_status(g, item, y)
        if sx is None or sy is None:
            raise InsufficientDepth(f"cannot decide {item.label(g)} on {x.label(g)} / {y.label(g)}")
        if sx != sy:
            return Fraction(1, 2 ** i)
    raise InsufficientBudget(f"no deciding index within {enum_budget} ultrapaths",
                             upper_bound=Fraction(1, 2 ** (enum_budget + 1)))


def metric_first_difference(x: Ultrapath, y: Ultrapath) -> Fraction:
    """d(x, y) = 1/2^i with i the first (1-based) position where the edges differ."""
    if x.is_finite or y.is_finite:
        raise ValueError("the first-difference metric is defined on infinite paths only")
    if x == y:
        return Fraction(0)
    for i, (a, b) in enumerate(zip(x.word, y.word), start=1):
        if a != b:
            return Fraction(1, 2 ** i)
    raise InsufficientDepth(f"paths agree on their common depth {min(len(x.word), len(y.word))}")


def metric_gurevich(x: Ultrapath, y: Ultrapath, precision: int) -> Tuple[Fraction, Fraction]:
    """Σ |1/h(x_i) − 1/h(y_i)| / 2^i with h(e) = canonical index + 1, as an interval of width 1/2^precision."""
    if x.is_finite or y.is_finite:
        raise ValueError("the Gurevich metric is defined on infinite paths only")
    if len(x.word) < precision or len(y.word) < precision:
        raise InsufficientDepth(f"precision {precision} needs depth {precision}")
    total = Fraction(0)
    for i in range(precision):
        total += abs(Fraction(1, x.word[i] + 1) - Fraction(1, y.word[i] + 1)) / 2 ** (i + 1)
    return total, total + Fraction(1, 2 ** precision)


class GraphShiftSystem(DRSystem):
    """The shift space of an ultragraph as a Deaconu-Renault system.

    Dom(σ^i) holds the infinite paths and the finite points of length ≥ i.
    The base distance is selected by `metric`; "gurevich" is interval valued
    and only available through `distance` for comparison tables.
    """

    def __init__(self, g: Ultragraph, metric: str = "dX", order: str = "shortlex",
                 enum_budget: int = config.ENUMERATION_BUDGET):
        if metric not in METRICS:
            raise ValueError(f"unknown metric {metric}; expected one of {', '.join(METRICS)}")
        self.graph = g
        self.metric = metric
        self.name = f"shift({g.name},{metric})"
        self.enum_budget = enum_budget
        self.enumeration = PathEnumeration(g, "S" if metric == "d1" else "P", order)

    def domain_horizon(self, x: Ultrapath, n: int) -> int:
        if not x.is_finite:
            return n - 1
        return min(n - 1, len(x.word))

    def shift(self, x: Ultrapath) -> Ultrapath:
        return shift_apply(self.graph, x)

    def base_distance(self, x: Ultrapath, y: Ultrapath) -> Fraction:
        if self.metric == "gurevich":
            raise ValueError("the Gurevich metric is interval valued; use distance()")
        return self.distance(x, y, self.metric)

    def distance(self, x: Ultrapath, y: Ultrapath, metric: Optional[str] = None) -> Fraction:
        """Distance under any metric; the Gurevich value is its interval's upper end."""
        metric = metric or self.metric
        if metric == "first_difference":
            return metric_first_difference(x, y)
        if metric == "gurevich":
            return metric_gurevich(x, y, min(len(x.word), len(y.word)))[1] if x != y else Fraction(0)
        if metric == self.metric or (metric == "dX" and self.enumeration.kind == "P"):
            enumeration = self.enumeration
        else:
            enumeration = _shared_enumeration(self.graph, "S" if metric == "d1" else "P", self.enumeration.order)
        return metric_enumerated(enumeration, x, y, self.enum_budget)

    def neighbourhood(self, x: Ultrapath, level: int) -> Iterator[Ultrapath]:
        if not x.is_finite:
            yield x
            return
        stream = self.graph.emitter(x.tail).emitted()
        for _ in range(level):
            next(stream)
        g = next(stream)
        yield extend_least(self.graph, x.word + (g,), len(x.word) + 3)


@lru_cache(maxsize=32)
def _shared_enumeration(g: Ultragraph, kind: str, order: str) -> PathEnumeration:
    return PathEnumeration(g, kind, order)


def metric_dX(system: GraphShiftSystem, x: Ultrapath, y: Ultrapath, enum_budget: Optional[int] = None) -> Fraction:
    """d_X(x, y) under the system's enumeration of ultrapaths."""
    return metric_enumerated(system.enumeration, x, y, enum_budget or system.enum_budget)


@dataclass
class RepresentativeSet:
    points: List[Ultrapath]
    delta: Fraction
    depth: int
    edge_budget: int


def admissible_words(g: Ultragraph, length: int, edge_budget: int) -> List[Tuple[int, ...]]:
    edges = [e.index for e in g.edges(edge_budget)]
    words = [(e,) for e in edges] if length >= 1 else [()]
    for _ in range(length - 1):
        words = [w + (e,) for w in words for e in edges if g.follows(w[-1], e)]
    return words


def finite_points(g: Ultragraph, max_len: int, edge_budget: int) -> List[Ultrapath]:
    """The points of X_fin of length ≤ max_len over the first edge_budget edges."""
    points = [Ultrapath((), em.identifier) for em in g.emitters()]
    for length in range(1, max_len + 1):
        for word in admissible_words(g, length, edge_budget):
            points.extend(Ultrapath(word, eid) for eid in g.range_of(word[-1]).emitter_parts)
    return points


def density(system: GraphShiftSystem, depth: int) -> Fraction:
    """δ(depth): a bound on the diameter of a depth-`depth` cylinder under the system's metric."""
    if depth <= 0:
        return Fraction(1, 2) if system.metric != "gurevich" else Fraction(1)
    if system.metric == "first_difference":
        return Fraction(1, 2 ** (depth + 1))
    if system.metric == "gurevich":
        return Fraction(1, 2 ** depth)
    g = system.graph
    for i in range(1, system.enum_budget + 1):
        beta, rset = system.enumeration.item(i)
        if len(beta) > depth:
            return Fraction(1, 2 ** i)
        if len(beta) == depth and not rset.covers(g, g.range_of(beta[-1])):
            return Fraction(1, 2 ** i)
    return Fraction(1, 2 ** (system.enum_budget + 1))


def representatives(system: GraphShiftSystem, depth: int, edge_budget: int, pad: int = 2) -> RepresentativeSet:
    """One point per nonempty depth-D cylinder plus the finite points of length ≤ D.

    Word cylinders are represented by their least-indexed extension to
    depth D + pad; at D = 0 there is one cylinder per vertex met by the
    budget.

    Args:
        system: The shift space
        depth: Cylinder depth D
        edge_budget: Number of edges (canonical order) the words may use
        pad: Extra edges stored on every infinite representative

    Returns:
        RepresentativeSet with the points and the density δ(D)
    """
    g = system.graph
    points: List[Ultrapath] = []
    if depth == 0:
        starts = {}
        for e in g.edges(edge_budget):
            starts.setdefault(e.source, e.index)
        for _, first in sorted(starts.items(), key=lambda kv: kv[1]):
            points.append(extend_least(g, (first,), pad))
    else:
        points.extend(extend_least(g, w, depth + pad) for w in admissible_words(g, depth, edge_budget))
    points.extend(finite_points(g, depth, edge_budget))
    delta = density(system, depth)
    logger.debug(f"Representatives of {g.name} at depth {depth}: {len(points)} points, density {delta}")
    return RepresentativeSet(points, delta, depth, edge_budget)


@dataclass
class ModulusTable:
    """Largest observed d_b among pairs with d_a < δ, for a descending dyadic δ grid."""

    metric_a: str
    metric_b: str
    deltas: List[Fraction]
    max_b: List[Optional[Fraction]]
    moduli: Dict[Fraction, Optional[Fraction]] = field(default_factory=dict)
    pairs: List[Tuple[Fraction, Fraction]] = field(default_factory=list)


def modulus_table(system: GraphShiftSystem, metric_a: str, metric_b: str,
                  samples: Sequence[Tuple[Ultrapath, Ultrapath]], exponents: Sequence[int] = range(0, 11),
                  other: Optional[GraphShiftSystem] = None) -> ModulusTable:
    """Empirical modulus of continuity of the identity (X, d_a) -> (X, d_b).

    For each ε = 1/2^j the modulus is the largest grid δ that has sampled
    pairs below it and whose observed d_b values all stay below ε, or None
    when no grid δ works. d_b is measured on `other` when given, which
    compares two enumeration orders of the same graph.
    """
    target = other or system
    if target.graph.name != system.graph.name:
        raise ValueError(f"cannot compare {system.name} with {target.name}: different graphs")
    pairs = [(system.distance(x, y, metric_a), target.distance(x, y, metric_b)) for x, y in samples]
    deltas = [Fraction(1, 2 ** j) for j in exponents]
    max_b = []
    for delta in deltas:
        inside = [b for a, b in pairs if a < delta]
        max_b.append(max(inside) if inside else None)
    moduli = {}
    for j in exponents:
        eps = Fraction(1, 2 ** j)
        moduli[eps] = next((d for d, m in zip(deltas, max_b) if m is not None and m < eps), None)
    if other is not None:
        metric_a = f"{metric_a}/{system.enumeration.order}"
        metric_b = f"{metric_b}/{other.enumeration.order}"
    return ModulusTable(metric_a, metric_b, deltas, max_b, moduli, pairs)
