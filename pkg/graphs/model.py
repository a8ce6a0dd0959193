"""Graph and ultragraph presentations.

This module provides the finitely presented directed graphs and ultragraphs
the shift spaces are built on: range sets with their finite/emitter
decomposition, minimal infinite emitters, validation, exact path counting,
path enumeration and finite-subgraph truncation.

Edges are addressed by their index in the presentation's canonical edge
order; vertices by name.
"""

import heapq
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from utils.errors import EmptySubgraph, RfumViolation, SinkFound, UnboundedPreimage

# Set up logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MinimalInfiniteEmitter:
    """A minimal infinite emitter of the range algebra.

    `emitted` yields the indices of the edges with source in the set, in
    increasing order. `feeding` lists the edges whose range has this emitter
    as a part, or is None when there are infinitely many of them.
    `vertices` is set when the emitter is a finite vertex set that emits
    infinitely many edges.
    """

    identifier: str
    first_edge: int
    contains: Callable[[str], bool] = field(compare=False, repr=False)
    emitted: Callable[[], Iterator[int]] = field(compare=False, repr=False)
    feeding: Optional[Tuple[int, ...]] = None
    vertices: Optional[FrozenSet[str]] = None


@dataclass(frozen=True)
class RangeSet:
    """An element of the range algebra in its unique decomposition.

    `finite_part` holds vertices of finite emission; `emitter_parts` holds
    identifiers of minimal infinite emitters, sorted. The two parts are
    disjoint.
    """

    finite_part: FrozenSet[str] = frozenset()
    emitter_parts: Tuple[str, ...] = ()

    @classmethod
    def of_vertices(cls, *vertices: str) -> "RangeSet":
        return cls(frozenset(vertices), ())

    @classmethod
    def of_emitter(cls, identifier: str) -> "RangeSet":
        return cls(frozenset(), (identifier,))

    def is_empty(self) -> bool:
        return not self.finite_part and not self.emitter_parts

    def contains(self, graph: "Ultragraph", vertex: str) -> bool:
        if vertex in self.finite_part:
            return True
        return any(graph.emitter(eid).contains(vertex) for eid in self.emitter_parts)

    def union(self, graph: "Ultragraph", other: "RangeSet") -> "RangeSet":
        emitters = tuple(sorted(set(self.emitter_parts) | set(other.emitter_parts)))
        vertices = frozenset(
            v for v in self.finite_part | other.finite_part
            if not any(graph.emitter(eid).contains(v) for eid in emitters)
        )
        return RangeSet(vertices, emitters)

    def intersection(self, graph: "Ultragraph", other: "RangeSet") -> "RangeSet":
        shared = set(self.emitter_parts) & set(other.emitter_parts)
        if set(self.emitter_parts) - shared and set(other.emitter_parts) - shared:
            raise RfumViolation("<range algebra>", "intersection of distinct minimal emitters")
        vertices = {v for v in self.finite_part if other.contains(graph, v)}
        vertices |= {v for v in other.finite_part if self.contains(graph, v)}
        return RangeSet(frozenset(vertices), tuple(sorted(shared)))

    def covers(self, graph: "Ultragraph", other: "RangeSet") -> bool:
        """Return True when `other` is a subset of this set."""
        if not set(other.emitter_parts) <= set(self.emitter_parts):
            return False
        return all(self.contains(graph, v) for v in other.finite_part)

    def disjoint_from(self, graph: "Ultragraph", other: "RangeSet") -> bool:
        if set(self.emitter_parts) & set(other.emitter_parts):
            return False
        if self.emitter_parts and other.emitter_parts:
            return False
        if any(other.contains(graph, v) for v in self.finite_part):
            return False
        return not any(self.contains(graph, v) for v in other.finite_part)

    def sort_key(self, graph: "Ultragraph") -> Tuple:
        return (
            tuple(graph.emitter(eid).first_edge for eid in self.emitter_parts),
            tuple(sorted(graph.vertex_index(v) for v in self.finite_part)),
        )

    def label(self) -> str:
        parts = list(self.emitter_parts) + sorted(self.finite_part)
        return "{" + ",".join(parts) + "}"


@dataclass(frozen=True)
class Edge:
    index: int
    name: str
    source: str
    range: RangeSet


class PathCount(NamedTuple):
    length: int
    count: int


class GraphPath(NamedTuple):
    """A finite path; zero-length paths carry only their vertex."""

    edges: Tuple[int, ...]
    source: str


class Ultragraph(ABC):
    """Base class for graph and ultragraph presentations.

    Subclasses provide the canonical edge and vertex orders and the local
    queries (out-edges, predecessors). Presentations are immutable.
    """

    name: str = "ultragraph"
    presentation: str = "explicit"

    @property
    def num_edges(self) -> Optional[int]:
        """Number of edges, or None for an infinite presentation."""
        return None

    @property
    def num_vertices(self) -> Optional[int]:
        return None

    @property
    def row_finite(self) -> bool:
        return not self.emitters()

    @abstractmethod
    def edge(self, index: int) -> Edge:
        """Return the edge at `index` in canonical order (IndexError beyond the end)."""

    @abstractmethod
    def vertex(self, index: int) -> str:
        """Return the vertex at `index` in canonical order."""

    @abstractmethod
    def vertex_index(self, name: str) -> int:
        """Return the canonical position of a vertex name."""

    @abstractmethod
    def edge_index(self, name: str) -> int:
        """Return the canonical position of an edge name."""

    @abstractmethod
    def out_degree(self, vertex: str) -> Optional[int]:
        """Number of edges emitted by `vertex`, None when infinite."""

    @abstractmethod
    def out_edges(self, vertex: str) -> Tuple[int, ...]:
        """Edges with source `vertex`; raises UnboundedPreimage when infinite."""

    @abstractmethod
    def predecessors(self, index: int) -> Tuple[int, ...]:
        """Edges g with s(edge) ∈ r(g); raises UnboundedPreimage when infinite."""

    def emitters(self) -> Tuple[MinimalInfiniteEmitter, ...]:
        return ()

    def emitter(self, identifier: str) -> MinimalInfiniteEmitter:
        for emitter in self.emitters():
            if emitter.identifier == identifier:
                return emitter
        raise KeyError(identifier)

    def edges(self, budget: Optional[int] = None) -> List[Edge]:
        """The first `budget` edges (all edges of a finite presentation when None)."""
        if budget is None:
            if self.num_edges is None:
                raise ValueError(f"{self.name} is infinite, an edge budget is required")
            budget = self.num_edges
        if self.num_edges is not None:
            budget = min(budget, self.num_edges)
        return [self.edge(i) for i in range(budget)]

    def vertices(self) -> List[str]:
        if self.num_vertices is None:
            raise ValueError(f"{self.name} has infinitely many vertices")
        return [self.vertex(i) for i in range(self.num_vertices)]

    def source(self, index: int) -> str:
        return self.edge(index).source

    def range_of(self, index: int) -> RangeSet:
        return self.edge(index).range

    def range_vertices(self, index: int) -> Optional[FrozenSet[str]]:
        """The range as an explicit vertex set, None when it is infinite."""
        rng = self.range_of(index)
        vertices = set(rng.finite_part)
        for eid in rng.emitter_parts:
            emitter = self.emitter(eid)
            if emitter.vertices is None:
                return None
            vertices |= emitter.vertices
        return frozenset(vertices)

    def follows(self, first: int, second: int) -> bool:
        """Adjacency rule: `second` may follow `first` when s(second) ∈ r(first)."""
        return self.range_of(first).contains(self, self.source(second))

    def is_admissible(self, word: Sequence[int]) -> bool:
        return all(self.follows(a, b) for a, b in zip(word, word[1:]))

    def emitted_by(self, rng: RangeSet) -> Iterator[int]:
        """Edges with source in `rng`, in increasing index order."""
        streams = []
        finite = sorted(i for v in rng.finite_part for i in self.out_edges(v))
        streams.append(iter(finite))
        for eid in rng.emitter_parts:
            streams.append(self.emitter(eid).emitted())
        last = None
        for index in heapq.merge(*streams):
            if index != last:
                yield index
                last = index

    def successors(self, index: int) -> Tuple[int, ...]:
        """All edges that may follow `index`; raises UnboundedPreimage for emitter ranges."""
        rng = self.range_of(index)
        if rng.emitter_parts:
            raise UnboundedPreimage(f"edge {self.edge(index).name} is followed by infinitely many edges")
        return tuple(sorted(i for v in rng.finite_part for i in self.out_edges(v)))

    def least_successor(self, index: int) -> int:
        """The least-indexed edge that may follow `index`."""
        return next(self.emitted_by(self.range_of(index)))

    def word_label(self, word: Sequence[int]) -> str:
        return "".join(self.edge(i).name for i in word) if word else "()"


class ExplicitUltragraph(Ultragraph):
    """A finite ultragraph given by explicit vertex and edge lists."""

    def __init__(self, name: str, vertices: Sequence[str], edges: Sequence[Tuple[str, str, Sequence[str]]]):
        self.name = name
        self.presentation = "explicit"
        self._vertices = tuple(vertices)
        self._vertex_pos = {v: i for i, v in enumerate(self._vertices)}
        built = []
        for i, (edge_name, src, rng) in enumerate(edges):
            built.append(Edge(i, edge_name, src, RangeSet.of_vertices(*rng)))
        self._edges = tuple(built)
        self._edge_pos = {e.name: e.index for e in self._edges}
        self._out = {v: [] for v in self._vertices}
        for e in self._edges:
            self._out.setdefault(e.source, []).append(e.index)
        self._pred = {}

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def num_vertices(self) -> int:
        return len(self._vertices)

    def edge(self, index: int) -> Edge:
        if index < 0:
            raise IndexError(index)
        return self._edges[index]

    def vertex(self, index: int) -> str:
        return self._vertices[index]

    def vertex_index(self, name: str) -> int:
        return self._vertex_pos[name]

    def edge_index(self, name: str) -> int:
        return self._edge_pos[name]

    def out_degree(self, vertex: str) -> int:
        return len(self._out.get(vertex, ()))

    def out_edges(self, vertex: str) -> Tuple[int, ...]:
        return tuple(self._out.get(vertex, ()))

    def predecessors(self, index: int) -> Tuple[int, ...]:
        if index not in self._pred:
            src = self._edges[index].source
            self._pred[index] = tuple(e.index for e in self._edges if src in e.range.finite_part)
        return self._pred[index]

    def range_vertices(self, index: int) -> FrozenSet[str]:
        return self._edges[index].range.finite_part


class FiniteGraph(ExplicitUltragraph):
    """A finite directed graph: an explicit ultragraph with singleton ranges."""

    def __init__(self, name: str, vertices: Sequence[str], edges: Sequence[Tuple[str, str, str]]):
        super().__init__(name, vertices, [(n, s, (r,)) for n, s, r in edges])

    def target(self, index: int) -> str:
        return next(iter(self.edge(index).range.finite_part))

    def edge_triples(self) -> List[Tuple[str, str, str]]:
        return [(e.name, e.source, self.target(e.index)) for e in self.edges()]


@dataclass
class ValidationReport:
    valid: bool
    edges_checked: int
    vertices_checked: int
    decompositions: Dict[str, Tuple[Tuple[str, ...], Tuple[str, ...]]] = field(default_factory=dict)


def validate(g: Ultragraph, budget: Optional[int] = None) -> ValidationReport:
    """Check the no-sinks and RFUM assumptions within an exploration budget.

    Args:
        g: The presentation to check
        budget: Number of edges to explore; all edges of a finite presentation when None

    Returns:
        ValidationReport listing each explored edge's range decomposition

    Raises:
        SinkFound: A vertex met during exploration emits no edge
        RfumViolation: A range part has infinite emission but is not a registered emitter
    """
    if budget is None:
        budget = g.num_edges if g.num_edges is not None else 64
    seen_vertices = set()
    decompositions = {}

    def check_vertex(v: str) -> None:
        if v in seen_vertices:
            return
        seen_vertices.add(v)
        if g.out_degree(v) == 0:
            logger.warning(f"Validation of {g.name} found sink {v}")
            raise SinkFound(v)

    if g.num_vertices is not None:
        for v in g.vertices():
            check_vertex(v)

    for e in g.edges(budget):
        check_vertex(e.source)
        rng = e.range
        if rng.is_empty():
            raise RfumViolation(e.name, "empty range")
        for v in rng.finite_part:
            check_vertex(v)
            if g.out_degree(v) is None:
                raise RfumViolation(e.name, f"vertex {v} emits infinitely many edges")
            if any(g.emitter(eid).contains(v) for eid in rng.emitter_parts):
                raise RfumViolation(e.name, f"vertex {v} lies in an emitter part")
        for eid in rng.emitter_parts:
            try:
                g.emitter(eid)
            except KeyError:
                raise RfumViolation(e.name, f"unknown emitter {eid}")
        decompositions[e.name] = (
            tuple(sorted(rng.finite_part, key=g.vertex_index)),
            tuple(em.identifier for em in minimal_infinite_emitters(g, e.index)),
        )
    logger.info(f"Validated {g.name}: {len(decompositions)} edges, {len(seen_vertices)} vertices")
    return ValidationReport(True, len(decompositions), len(seen_vertices), decompositions)


def minimal_infinite_emitters(g: Ultragraph, index: int) -> List[MinimalInfiniteEmitter]:
    """Return the emitter parts of r(e), ordered by first emitted edge index."""
    emitters = [g.emitter(eid) for eid in g.range_of(index).emitter_parts]
    return sorted(emitters, key=lambda em: em.first_edge)


def edge_adjacency(g: Ultragraph, exact: bool = True) -> np.ndarray:
    """Edge-adjacency transfer matrix: entry (e, f) is 1 iff s(f) ∈ r(e).

    Args:
        g: A finite presentation
        exact: Use Python integers (object dtype) instead of floats

    Returns:
        Square matrix indexed by canonical edge order
    """
    size = g.num_edges
    if size is None:
        raise ValueError(f"{g.name} is infinite")
    matrix = np.zeros((size, size), dtype=object if exact else float)
    for e in range(size):
        for f in range(size):
            if g.follows(e, f):
                matrix[e, f] = 1
    return matrix


def count_paths(g: Ultragraph, n: int) -> PathCount:
    """Exact number of length-n edge paths of a finite presentation."""
    if n < 1:
        raise ValueError(f"path length must be positive, got {n}")
    matrix = edge_adjacency(g)
    vector = np.ones(matrix.shape[0], dtype=object)
    for _ in range(n - 1):
        vector = matrix.dot(vector)
    return PathCount(n, int(sum(vector)))


def enumerate_paths(g: Ultragraph, max_len: int, edge_budget: int) -> List[GraphPath]:
    """All paths of length ≤ max_len over the first `edge_budget` edges, shortlex ordered."""
    edges = g.edges(edge_budget)
    if g.num_vertices is not None:
        vertices = g.vertices()
    else:
        touched = set()
        for e in edges:
            touched.add(e.source)
            touched |= e.range.finite_part
        vertices = sorted(touched, key=g.vertex_index)
    paths = [GraphPath((), v) for v in vertices]
    layer = [(e.index,) for e in edges] if max_len >= 1 else []
    length = 1
    while layer and length <= max_len:
        paths.extend(GraphPath(word, g.source(word[0])) for word in layer)
        if length == max_len:
            break
        layer = [word + (e.index,) for word in layer for e in edges if g.follows(word[-1], e.index)]
        length += 1
    return paths


def finite_subgraph(g: Ultragraph, edge_budget: int) -> FiniteGraph:
    """The sink-free finite subgraph generated by the first `edge_budget` edges.

    Args:
        g: A graph presentation with singleton ranges
        edge_budget: Number of edges taken from the canonical order

    Returns:
        FiniteGraph keeping the original names and relative order

    Raises:
        EmptySubgraph: Iterated sink pruning removed every edge
    """
    kept = []
    for e in g.edges(edge_budget):
        targets = g.range_vertices(e.index)
        if targets is None or len(targets) != 1:
            raise ValueError(f"edge {e.name} of {g.name} does not have a singleton range")
        kept.append((e.index, e.name, e.source, next(iter(targets))))
    while True:
        sources = {src for _, _, src, _ in kept}
        pruned = [item for item in kept if item[3] in sources]
        if len(pruned) == len(kept):
            break
        kept = pruned
    if not kept:
        raise EmptySubgraph(f"budget {edge_budget} of {g.name} leaves no edges after sink pruning")
    vertices = sorted({src for _, _, src, _ in kept}, key=g.vertex_index)
    logger.debug(f"Subgraph of {g.name} at budget {edge_budget}: {len(vertices)} vertices, {len(kept)} edges")
    return FiniteGraph(f"{g.name}[{edge_budget}]", vertices, [(name, src, dst) for _, name, src, dst in kept])


def relabel(g: FiniteGraph, mapping: Dict[str, str], edge_order: Optional[Sequence[int]] = None) -> FiniteGraph:
    """Rename vertices (and optionally permute edges) of a finite graph."""
    order = list(edge_order) if edge_order is not None else list(range(g.num_edges))
    edges = [
        (g.edge(i).name, mapping.get(g.source(i), g.source(i)), mapping.get(g.target(i), g.target(i)))
        for i in order
    ]
    return FiniteGraph(f"{g.name}'", [mapping.get(v, v) for v in g.vertices()], edges)
