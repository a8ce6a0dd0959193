"""Built-in graph and ultragraph families.

This module provides the named presentations addressed from the command
line and the tests: finite roses, cycles and ladders, the infinite ladder
families, the increasing roses, the renewal ultragraph and disjoint unions
of any of these.
"""

import itertools
import logging
import re
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from graphs.model import Edge, FiniteGraph, MinimalInfiniteEmitter, RangeSet, Ultragraph
from utils.errors import UnboundedPreimage, UnknownFamily

# Set up logging
logger = logging.getLogger(__name__)

FAMILIES = (
    "rose", "cycle", "golden", "ladder", "ladder_ex2", "forward_ladder",
    "infinite_rose", "renewal", "disjoint_union",
)


def rose(k: int) -> FiniteGraph:
    """One vertex with k loops l1..lk."""
    if k < 1:
        raise ValueError(f"a rose needs at least one petal, got {k}")
    graph = FiniteGraph(f"rose:{k}", ["v"], [(f"l{i}", "v", "v") for i in range(1, k + 1)])
    graph.presentation = "builtin:rose"
    return graph


def cycle(length: int) -> FiniteGraph:
    """A directed cycle v0 -> v1 -> ... -> v0 with edges c0..c(L-1)."""
    if length < 1:
        raise ValueError(f"a cycle needs at least one edge, got {length}")
    vertices = [f"v{i}" for i in range(length)]
    edges = [(f"c{i}", vertices[i], vertices[(i + 1) % length]) for i in range(length)]
    graph = FiniteGraph(f"cycle:{length}", vertices, edges)
    graph.presentation = "builtin:cycle"
    return graph


def golden() -> FiniteGraph:
    """The golden-mean graph: a loop at a plus a 2-cycle a <-> b."""
    graph = FiniteGraph("golden", ["a", "b"], [("g1", "a", "a"), ("g2", "a", "b"), ("g3", "b", "a")])
    graph.presentation = "builtin:golden"
    return graph


def ladder_graph(m: int) -> FiniteGraph:
    """H_m: the bidirected path on v0..vm with e_k: v(k-1) -> vk and f_k: vk -> v(k-1)."""
    if m < 1:
        raise ValueError(f"a ladder needs at least one rung, got {m}")
    vertices = [f"v{j}" for j in range(m + 1)]
    edges = []
    for k in range(1, m + 1):
        edges.append((f"e{k}", f"v{k - 1}", f"v{k}"))
        edges.append((f"f{k}", f"v{k}", f"v{k - 1}"))
    graph = FiniteGraph(f"ladder:{m}", vertices, edges)
    graph.presentation = "builtin:ladder"
    return graph


class IndexedFamily(Ultragraph):
    """Base class for infinite families with vertices named by an integer index."""

    vertex_offset = 0

    def vertex(self, index: int) -> str:
        if index < 0:
            raise IndexError(index)
        return f"v{index + self.vertex_offset}"

    def vertex_index(self, name: str) -> int:
        return self._vertex_number(name) - self.vertex_offset

    def _vertex_number(self, name: str) -> int:
        match = re.fullmatch(r"v(\d+)", name)
        if not match or int(match.group(1)) < self.vertex_offset:
            raise KeyError(name)
        return int(match.group(1))

    def edge_index(self, name: str) -> int:
        for index in itertools.count():
            if self.edge(index).name == name:
                return index
            if index > 1_000_000:
                raise KeyError(name)

    def in_edges(self, vertex: str) -> Tuple[int, ...]:
        raise NotImplementedError

    def predecessors(self, index: int) -> Tuple[int, ...]:
        return self.in_edges(self.source(index))


class LadderFamily(IndexedFamily):
    """The infinite ladder: e_k: v(k-1) -> vk and f_k: vk -> v(k-1), ordered e1, f1, e2, f2, ..."""

    def __init__(self):
        self.name = "ladder"
        self.presentation = "builtin:ladder_ex2"

    def edge(self, index: int) -> Edge:
        if index < 0:
            raise IndexError(index)
        k = index // 2 + 1
        if index % 2 == 0:
            return Edge(index, f"e{k}", f"v{k - 1}", RangeSet.of_vertices(f"v{k}"))
        return Edge(index, f"f{k}", f"v{k}", RangeSet.of_vertices(f"v{k - 1}"))

    def edge_index(self, name: str) -> int:
        match = re.fullmatch(r"([ef])(\d+)", name)
        if not match or int(match.group(2)) < 1:
            raise KeyError(name)
        k = int(match.group(2))
        return 2 * (k - 1) if match.group(1) == "e" else 2 * k - 1

    def out_degree(self, vertex: str) -> int:
        return 1 if self._vertex_number(vertex) == 0 else 2

    def out_edges(self, vertex: str) -> Tuple[int, ...]:
        j = self._vertex_number(vertex)
        return (0,) if j == 0 else (2 * j - 1, 2 * j)

    def in_edges(self, vertex: str) -> Tuple[int, ...]:
        j = self._vertex_number(vertex)
        return (1,) if j == 0 else (2 * (j - 1), 2 * j + 1)


class ForwardLadderFamily(IndexedFamily):
    """Two parallel edges e_k, f_k: v(k-1) -> vk at every step, ordered e1, f1, e2, f2, ..."""

    def __init__(self):
        self.name = "forward_ladder"
        self.presentation = "builtin:forward_ladder"

    def edge(self, index: int) -> Edge:
        if index < 0:
            raise IndexError(index)
        k = index // 2 + 1
        label = "e" if index % 2 == 0 else "f"
        return Edge(index, f"{label}{k}", f"v{k - 1}", RangeSet.of_vertices(f"v{k}"))

    def edge_index(self, name: str) -> int:
        match = re.fullmatch(r"([ef])(\d+)", name)
        if not match or int(match.group(2)) < 1:
            raise KeyError(name)
        k = int(match.group(2))
        return 2 * (k - 1) + (0 if match.group(1) == "e" else 1)

    def out_degree(self, vertex: str) -> int:
        self._vertex_number(vertex)
        return 2

    def out_edges(self, vertex: str) -> Tuple[int, ...]:
        j = self._vertex_number(vertex)
        return (2 * j, 2 * j + 1)

    def in_edges(self, vertex: str) -> Tuple[int, ...]:
        j = self._vertex_number(vertex)
        return () if j == 0 else (2 * (j - 1), 2 * j - 1)


class InfiniteRose(IndexedFamily):
    """One vertex with loops l1, l2, ...; the vertex is a minimal infinite emitter."""

    def __init__(self):
        self.name = "infinite_rose"
        self.presentation = "builtin:infinite_rose"
        self._emitter = MinimalInfiniteEmitter(
            identifier="v",
            first_edge=0,
            contains=lambda v: v == "v",
            emitted=lambda: itertools.count(0),
            feeding=None,
            vertices=frozenset({"v"}),
        )

    def vertex(self, index: int) -> str:
        if index != 0:
            raise IndexError(index)
        return "v"

    def vertex_index(self, name: str) -> int:
        if name != "v":
            raise KeyError(name)
        return 0

    @property
    def num_vertices(self) -> int:
        return 1

    def edge(self, index: int) -> Edge:
        if index < 0:
            raise IndexError(index)
        return Edge(index, f"l{index + 1}", "v", RangeSet.of_emitter("v"))

    def edge_index(self, name: str) -> int:
        match = re.fullmatch(r"l(\d+)", name)
        if not match or int(match.group(1)) < 1:
            raise KeyError(name)
        return int(match.group(1)) - 1

    def emitters(self) -> Tuple[MinimalInfiniteEmitter, ...]:
        return (self._emitter,)

    def out_degree(self, vertex: str) -> Optional[int]:
        self.vertex_index(vertex)
        return None

    def out_edges(self, vertex: str) -> Tuple[int, ...]:
        raise UnboundedPreimage(f"vertex {vertex} of {self.name} emits infinitely many edges")

    def in_edges(self, vertex: str) -> Tuple[int, ...]:
        raise UnboundedPreimage(f"vertex {vertex} of {self.name} receives infinitely many edges")


class RenewalUltragraph(IndexedFamily):
    """The renewal ultragraph: s(e) = v1, r(e) = {v_i}, s(f_i) = v(i+1), r(f_i) = {v_i}.

    Edge order is e, f1, f2, ...; the whole vertex set is the only minimal
    infinite emitter and only e feeds it.
    """

    vertex_offset = 1
    EMITTER = "V"

    def __init__(self):
        self.name = "renewal"
        self.presentation = "builtin:renewal"
        self._emitter = MinimalInfiniteEmitter(
            identifier=self.EMITTER,
            first_edge=0,
            contains=self._is_vertex,
            emitted=lambda: itertools.count(0),
            feeding=(0,),
            vertices=None,
        )

    def _is_vertex(self, name: str) -> bool:
        try:
            self._vertex_number(name)
        except KeyError:
            return False
        return True

    def edge(self, index: int) -> Edge:
        if index < 0:
            raise IndexError(index)
        if index == 0:
            return Edge(0, "e", "v1", RangeSet.of_emitter(self.EMITTER))
        return Edge(index, f"f{index}", f"v{index + 1}", RangeSet.of_vertices(f"v{index}"))

    def edge_index(self, name: str) -> int:
        if name == "e":
            return 0
        match = re.fullmatch(r"f(\d+)", name)
        if not match or int(match.group(1)) < 1:
            raise KeyError(name)
        return int(match.group(1))

    def emitters(self) -> Tuple[MinimalInfiniteEmitter, ...]:
        return (self._emitter,)

    def out_degree(self, vertex: str) -> int:
        self._vertex_number(vertex)
        return 1

    def out_edges(self, vertex: str) -> Tuple[int, ...]:
        j = self._vertex_number(vertex)
        return (0,) if j == 1 else (j - 1,)

    def in_edges(self, vertex: str) -> Tuple[int, ...]:
        j = self._vertex_number(vertex)
        return (0, j)


def _round_robin_locate(index: int, sizes: Sequence[Optional[int]]) -> Tuple[int, int]:
    """Map a global position to (component, local position) under round-robin interleaving."""
    if index < 0:
        raise IndexError(index)
    remaining = index
    for rnd in itertools.count():
        active = [c for c, size in enumerate(sizes) if size is None or rnd < size]
        if not active:
            raise IndexError(index)
        if remaining < len(active):
            return active[remaining], rnd
        remaining -= len(active)


def _round_robin_position(component: int, local: int, sizes: Sequence[Optional[int]]) -> int:
    before = sum(local if size is None else min(local, size) for size in sizes)
    within = sum(1 for c in range(component) if sizes[c] is None or local < sizes[c])
    return before + within


class DisjointUnion(Ultragraph):
    """Disjoint union of presentations.

    Vertex and edge names are prefixed with the component position
    ("0.v", "1.e1", ...); the canonical orders interleave the components
    round-robin so that infinite components do not starve the others.
    """

    def __init__(self, components: Sequence[Ultragraph]):
        if not components:
            raise ValueError("a disjoint union needs at least one component")
        self.components = tuple(components)
        self.name = "+".join(c.name for c in self.components)
        self.presentation = "builtin:disjoint_union"
        self._edge_sizes = [c.num_edges for c in self.components]
        self._vertex_sizes = [c.num_vertices for c in self.components]
        self._emitters = tuple(sorted(
            (self._wrap_emitter(pos, em) for pos, comp in enumerate(self.components) for em in comp.emitters()),
            key=lambda em: em.first_edge,
        ))

    @property
    def num_edges(self) -> Optional[int]:
        return None if None in self._edge_sizes else sum(self._edge_sizes)

    @property
    def num_vertices(self) -> Optional[int]:
        return None if None in self._vertex_sizes else sum(self._vertex_sizes)

    def _split(self, name: str) -> Tuple[int, str]:
        head, _, rest = name.partition(".")
        if not head.isdigit() or int(head) >= len(self.components) or not rest:
            raise KeyError(name)
        return int(head), rest

    def _global_edge(self, component: int, local: int) -> int:
        return _round_robin_position(component, local, self._edge_sizes)

    def _prefix_range(self, component: int, rng: RangeSet) -> RangeSet:
        return RangeSet(
            frozenset(f"{component}.{v}" for v in rng.finite_part),
            tuple(sorted(f"{component}.{eid}" for eid in rng.emitter_parts)),
        )

    def _wrap_emitter(self, component: int, em: MinimalInfiniteEmitter) -> MinimalInfiniteEmitter:
        prefix = f"{component}."

        def contains(v: str) -> bool:
            return v.startswith(prefix) and em.contains(v[len(prefix):])

        def emitted() -> Iterator[int]:
            return (self._global_edge(component, j) for j in em.emitted())

        return MinimalInfiniteEmitter(
            identifier=prefix + em.identifier,
            first_edge=self._global_edge(component, em.first_edge),
            contains=contains,
            emitted=emitted,
            feeding=None if em.feeding is None else tuple(self._global_edge(component, j) for j in em.feeding),
            vertices=None if em.vertices is None else frozenset(prefix + v for v in em.vertices),
        )

    def emitters(self) -> Tuple[MinimalInfiniteEmitter, ...]:
        return self._emitters

    def edge(self, index: int) -> Edge:
        component, local = _round_robin_locate(index, self._edge_sizes)
        inner = self.components[component].edge(local)
        return Edge(index, f"{component}.{inner.name}", f"{component}.{inner.source}",
                    self._prefix_range(component, inner.range))

    def vertex(self, index: int) -> str:
        component, local = _round_robin_locate(index, self._vertex_sizes)
        return f"{component}.{self.components[component].vertex(local)}"

    def vertex_index(self, name: str) -> int:
        component, rest = self._split(name)
        local = self.components[component].vertex_index(rest)
        return _round_robin_position(component, local, self._vertex_sizes)

    def edge_index(self, name: str) -> int:
        component, rest = self._split(name)
        return self._global_edge(component, self.components[component].edge_index(rest))

    def out_degree(self, vertex: str) -> Optional[int]:
        component, rest = self._split(vertex)
        return self.components[component].out_degree(rest)

    def out_edges(self, vertex: str) -> Tuple[int, ...]:
        component, rest = self._split(vertex)
        return tuple(self._global_edge(component, j) for j in self.components[component].out_edges(rest))

    def predecessors(self, index: int) -> Tuple[int, ...]:
        component, local = _round_robin_locate(index, self._edge_sizes)
        inner = self.components[component].predecessors(local)
        return tuple(sorted(self._global_edge(component, j) for j in inner))

    def component_of_edge(self, index: int) -> int:
        return _round_robin_locate(index, self._edge_sizes)[0]


def disjoint_union(components: Sequence[Ultragraph]) -> Ultragraph:
    """Disjoint union; a union of finite graphs is returned as a FiniteGraph."""
    union = DisjointUnion(components)
    if union.num_edges is None or not all(isinstance(c, FiniteGraph) for c in components):
        return union
    graph = FiniteGraph(
        union.name,
        union.vertices(),
        [(e.name, e.source, next(iter(e.range.finite_part))) for e in union.edges()],
    )
    graph.presentation = union.presentation
    graph.components = union.components
    return graph


def builtin(name: str, parameters: Sequence = ()) -> Ultragraph:
    """Construct a built-in family.

    Args:
        name: One of FAMILIES
        parameters: Family parameters (petal count, cycle length, rung count,
            or the component list of a disjoint union)

    Returns:
        The presentation with its canonical edge order

    Raises:
        UnknownFamily: The name is not a known family
    """
    params = list(parameters)
    if name == "rose":
        return rose(int(params[0]) if params else 1)
    if name == "cycle":
        return cycle(int(params[0]) if params else 1)
    if name == "golden":
        return golden()
    if name in ("ladder", "ladder_ex2"):
        return ladder_graph(int(params[0])) if params else LadderFamily()
    if name == "forward_ladder":
        return ForwardLadderFamily()
    if name == "infinite_rose":
        return InfiniteRose()
    if name == "renewal":
        return RenewalUltragraph()
    if name == "disjoint_union":
        return disjoint_union(params)
    logger.error(f"Unknown family requested: {name}")
    raise UnknownFamily(f"unknown family {name!r}; expected one of {', '.join(FAMILIES)}")


def from_spec(spec: str) -> Ultragraph:
    """Parse a spec string such as "rose:3", "ladder", "renewal" or "rose:3+ladder"."""
    parts = [p.strip() for p in spec.split("+")]
    if len(parts) > 1:
        return builtin("disjoint_union", [from_spec(p) for p in parts])
    name, _, raw = spec.strip().partition(":")
    params = []
    if raw:
        try:
            params = [int(raw)]
        except ValueError:
            raise UnknownFamily(f"bad parameter {raw!r} in {spec!r}")
    return builtin(name, params)
