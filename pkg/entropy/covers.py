"""Entropy via open covers of the shift space.

This module provides covers made of cylinder sets, their joins and shift
pullbacks, exact minimal subcover counts N(α_n, K_n), the Fekete sequence
of log-counts with its running infimum, the renewal covers α^m, word and
trivial covers, cover diameters under d_X and the cover lemma checks.

A cover member is a finite union of CylinderSet values, stored as a sorted
tuple. A carrier of None stands for the whole space.
"""

import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple, Union

import config
from entropy.solvers import exact_set_cover
from graphs.model import RangeSet, Ultragraph
from systems.shift_space import (
    CylinderSet,
    GraphShiftSystem,
    admissible_words,
    cylinder_status,
)
from utils.errors import BudgetExceeded, UnboundedPreimage

# Set up logging
logger = logging.getLogger(__name__)

Member = Tuple[CylinderSet, ...]

# Doublings of the fold window before a preimage is declared unbounded
FOLD_WIDENINGS = 4


def _piece_key(g: Ultragraph, c: CylinderSet) -> Tuple:
    return (len(c.word), c.word, c.base.sort_key(g), tuple(sorted(c.excluded)), not c.includes_base)


def canonical_union(g: Ultragraph, pieces) -> Member:
    """Sorted, duplicate-free tuple of the given cylinders."""
    return tuple(sorted(set(pieces), key=lambda c: _piece_key(g, c)))


def _member_key(g: Ultragraph, member: Member) -> Tuple:
    return tuple(_piece_key(g, c) for c in member)


@dataclass(frozen=True)
class Cover:
    """A finite family of cylinder unions covering `carrier` (None: the whole space)."""

    graph: Ultragraph = field(compare=False, repr=False)
    members: Tuple[Member, ...]
    carrier: Optional[Member] = None
    name: str = field(default="cover", compare=False)

    def __post_init__(self):
        if any(not member for member in self.members):
            raise ValueError(f"cover {self.name} has an empty member")

    def __len__(self) -> int:
        return len(self.members)

    def labels(self) -> List[str]:
        g = self.graph
        return [" ∪ ".join(c.label(g) for c in member) for member in self.members]

    def is_partition(self) -> bool:
        """True when the members are pairwise disjoint."""
        g = self.graph
        return all(not intersect_unions(g, a, b) for a, b in combinations(self.members, 2))


def make_cover(g: Ultragraph, members: Sequence[Sequence[CylinderSet]], carrier: Optional[Sequence[CylinderSet]] = None,
               name: str = "cover") -> Cover:
    """Build a Cover with canonical member order; repeated members are merged."""
    canonical = {canonical_union(g, m) for m in members}
    ordered = tuple(sorted(canonical, key=lambda m: _member_key(g, m)))
    return Cover(g, ordered, None if carrier is None else canonical_union(g, carrier), name)


def whole_space(g: Ultragraph) -> Member:
    """The whole shift space as a union of zero-length cylinders.

    Raises:
        ValueError: The presentation has infinitely many vertices outside its emitters
    """
    emitters = tuple(em.identifier for em in g.emitters())
    if g.num_vertices is None:
        stray = [g.vertex(i) for i in range(config.FOLD_WINDOW)
                 if not any(em.contains(g.vertex(i)) for em in g.emitters())]
        if stray:
            raise ValueError(f"{g.name} is not compact: vertex {stray[0]} lies outside every emitter")
        return (CylinderSet((), RangeSet(frozenset(), emitters)),)
    vertices = frozenset(v for v in g.vertices() if not any(em.contains(v) for em in g.emitters()))
    return (CylinderSet((), RangeSet(vertices, emitters)),)


def trivial_cover(g: Ultragraph) -> Cover:
    return make_cover(g, [whole_space(g)], name="trivial")


def word_cover(g: Ultragraph, depth: int) -> Cover:
    """The partition of a finite presentation into its depth-`depth` word cylinders."""
    if g.num_edges is None:
        raise ValueError(f"{g.name} is infinite; word covers need a finite presentation")
    if depth < 1:
        raise ValueError(f"word cover depth must be positive, got {depth}")
    words = admissible_words(g, depth, g.num_edges)
    return make_cover(g, [(CylinderSet.make(g, w),) for w in words], name=f"words:{depth}")


class RenewalCover(NamedTuple):
    cover: Cover
    size: int
    q_words: Tuple[Tuple[int, ...], ...]
    r_words: Tuple[Tuple[int, ...], ...]


def renewal_cover(m: int, g: Optional[Ultragraph] = None) -> RenewalCover:
    """The cover α^m of the renewal shift.

    With F = {e, f_1, ..., f_m}, the members are the cylinder of points whose
    first edge avoids F (together with the length-zero point), D_{β,F} for
    every path β over F ending in e with 1 ≤ |β| < m, and D_γ for every path
    γ over F of length m. The members are pairwise disjoint.

    Args:
        m: Cover index, at least 1
        g: The renewal ultragraph (a fresh one when omitted)

    Returns:
        RenewalCover with the cover, M = 1 + |Q| + |R| and the words of Q and R
    """
    if m < 1:
        raise ValueError(f"renewal cover index must be positive, got {m}")
    if g is None:
        from graphs.builtins import RenewalUltragraph
        g = RenewalUltragraph()
    emitter = g.emitters()[0].identifier
    full = RangeSet.of_emitter(emitter)
    excluded = frozenset(range(m + 1))
    words: List[Tuple[int, ...]] = [()]
    by_length: Dict[int, List[Tuple[int, ...]]] = {}
    for length in range(1, m + 1):
        words = [w + (h,) for w in words for h in sorted(excluded) if not w or g.follows(w[-1], h)]
        by_length[length] = words
    e = g.emitters()[0].feeding[0]
    q_words = tuple(w for length in range(1, m) for w in by_length[length] if w[-1] == e)
    r_words = tuple(by_length[m])
    members = [(CylinderSet((), full, excluded, True),)]
    members += [(CylinderSet(w, full, excluded, True),) for w in q_words]
    members += [(CylinderSet.make(g, w),) for w in r_words]
    cover = make_cover(g, members, name=f"renewal:{m}")
    size = 1 + len(q_words) + len(r_words)
    logger.debug(f"Renewal cover α^{m}: |Q|={len(q_words)}, |R|={len(r_words)}, M={size}")
    return RenewalCover(cover, size, q_words, r_words)


# Cylinder algebra


def cylinder_subset(g: Ultragraph, c: CylinderSet, d: CylinderSet) -> bool:
    """True when c ⊆ d (a sufficient test on the cylinder algebra)."""
    if len(d.word) > len(c.word) or c.word[:len(d.word)] != d.word:
        return False
    if len(d.word) < len(c.word):
        return d.allows(g, c.word[len(d.word)])
    for point in c.finite_points():
        if d.contains(g, point) is not True:
            return False
    if any(eid not in d.base.emitter_parts for eid in c.base.emitter_parts):
        return False
    for v in c.base.finite_part:
        if not d.base.contains(g, v) and any(h not in c.excluded for h in g.out_edges(v)):
            return False
    return all(not c.base.contains(g, g.source(h)) for h in d.excluded - c.excluded)


def intersect_unions(g: Ultragraph, a: Sequence[CylinderSet], b: Sequence[CylinderSet]) -> Member:
    """Pairwise intersection of two cylinder unions; the empty tuple when disjoint."""
    pieces = (x.intersect(y, g) for x in a for y in b)
    return canonical_union(g, (p for p in pieces if p is not None))


def _fold_within(g: Ultragraph, emitter_id: str, excluded: FrozenSet[int], window: int) -> Optional[List[CylinderSet]]:
    em = g.emitter(emitter_id)
    feeding = set(em.feeding)
    candidates = []
    for h in em.emitted():
        if h > window:
            break
        candidates.append(h)
    full, explicit = set(), []
    for h in candidates:
        if h in excluded:
            continue
        v = g.source(h)
        for p in g.predecessors(h):
            if p in feeding:
                continue
            rng = g.range_of(p)
            if not rng.emitter_parts and all(
                em.contains(u) and not set(g.out_edges(u)) & excluded for u in rng.finite_part
            ):
                full.add(p)
            else:
                explicit.append(CylinderSet.make(g, (p,), RangeSet.of_vertices(v), excluded & set(g.out_edges(v)), False))
    irregular = [h for h in candidates if h not in full]
    cutoff = max(irregular) if irregular else -1
    strays = {p for p in full | {c.word[0] for c in explicit} if not em.contains(g.source(p))}
    if cutoff > window // 2 or any(p > window // 2 for p in strays):
        return None
    pieces = [c for c in explicit if c.word[0] <= cutoff or c.word[0] in strays]
    pieces += [CylinderSet.make(g, (p,), includes_base=False) for p in sorted(full) if p <= cutoff or p in strays]
    tail = frozenset(h for h in candidates if h <= cutoff)
    pieces.append(CylinderSet((), RangeSet.of_emitter(emitter_id), tail, includes_base=False))
    return pieces


def _fold_emitter_tail(g: Ultragraph, emitter_id: str, excluded: FrozenSet[int]) -> List[CylinderSet]:
    """σ^{-1} of the points whose first edge leaves the emitter, through non-feeding edges.

    Edges of the emitter are scanned up to a window; the preimage is the
    explicit cylinders of the irregular predecessors plus one emitter
    cylinder excluding every edge up to the last irregular one. The window
    starts at four times the largest excluded edge (at least the fold
    window) and doubles up to FOLD_WIDENINGS times.

    Raises:
        UnboundedPreimage: The scan does not settle into that form
    """
    if g.emitter(emitter_id).feeding is None:
        raise UnboundedPreimage(f"emitter {emitter_id} of {g.name} is fed by infinitely many edges")
    window = max(config.FOLD_WINDOW, 4 * (max(excluded, default=0) + 2))
    for _ in range(FOLD_WIDENINGS + 1):
        pieces = _fold_within(g, emitter_id, excluded, window)
        if pieces is not None:
            return pieces
        logger.debug(f"Fold of emitter {emitter_id} of {g.name} unsettled at window {window}")
        window *= 2
    raise UnboundedPreimage(f"preimage of emitter {emitter_id} of {g.name} does not settle within {window // 2} edges")


def pullback_cylinder(g: Ultragraph, c: CylinderSet) -> Member:
    """σ^{-1}(c) as a union of cylinders.

    Raises:
        UnboundedPreimage: The preimage needs infinitely many cylinders
    """
    if c.word:
        return canonical_union(g, (CylinderSet((p,) + c.word, c.base, c.excluded, c.includes_base)
                                   for p in g.predecessors(c.word[0])))
    pieces = []
    for eid in c.base.emitter_parts:
        for p in g.emitter(eid).feeding or ():
            pieces.append(CylinderSet.make(g, (p,), RangeSet.of_emitter(eid), c.excluded, c.includes_base))
        pieces.extend(_fold_emitter_tail(g, eid, c.excluded))
    for v in sorted(c.base.finite_part, key=g.vertex_index):
        outs = g.out_edges(v)
        if all(h in c.excluded for h in outs):
            continue
        for p in g.predecessors(outs[0]):
            pieces.append(CylinderSet.make(g, (p,), RangeSet.of_vertices(v), c.excluded & set(outs), c.includes_base))
    return canonical_union(g, pieces)


def pullback_union(g: Ultragraph, member: Sequence[CylinderSet]) -> Member:
    return canonical_union(g, (p for c in member for p in pullback_cylinder(g, c)))


def pullback(a: Cover) -> Cover:
    """The cover σ^{-1}(α) of σ^{-1}(carrier)."""
    g = a.graph
    members = [pullback_union(g, m) for m in a.members]
    if a.carrier is None and not g.emitters():
        carrier = None
    else:
        carrier = pullback_union(g, a.carrier if a.carrier is not None else whole_space(g))
    return make_cover(g, [m for m in members if m], carrier, name=f"σ⁻¹({a.name})")


def _meet_carriers(g: Ultragraph, a: Optional[Member], b: Optional[Member]) -> Optional[Member]:
    if a is None:
        return b
    if b is None:
        return a
    return intersect_unions(g, a, b)


def join(a: Cover, b: Cover) -> Cover:
    """α ∨ β: every nonempty intersection of a member of α with a member of β."""
    g = a.graph
    members = [intersect_unions(g, x, y) for x in a.members for y in b.members]
    carrier = _meet_carriers(g, a.carrier, b.carrier)
    return make_cover(g, [m for m in members if m], carrier, name=f"{a.name}∨{b.name}")


def refined_cover(a: Cover, n: int) -> Cover:
    """α_n = α ∨ σ^{-1}(α) ∨ ... ∨ σ^{-n}(α), built explicitly.

    Raises:
        BudgetExceeded: The member count passes the atom budget
    """
    current = a
    for _ in range(n):
        current = join(a, pullback(current))
        if len(current) > config.ATOM_BUDGET:
            raise BudgetExceeded(len(current), config.ATOM_BUDGET, "members")
    return current


def _piece_covered(g: Ultragraph, c: CylinderSet, pieces: Sequence[CylinderSet], depth: int) -> bool:
    if any(cylinder_subset(g, c, d) for d in pieces):
        return True
    if depth == 0:
        return False
    for point in c.finite_points():
        if not any(d.contains(g, point) is True for d in pieces):
            return False
    for v in c.base.finite_part:
        for h in g.out_edges(v):
            if h not in c.excluded and not _piece_covered(g, CylinderSet.make(g, c.word + (h,)), pieces, depth - 1):
                return False
    for eid in c.base.emitter_parts:
        scanned = []
        for h in g.emitter(eid).emitted():
            if h > config.FOLD_WINDOW:
                break
            scanned.append(h)
            if h not in c.excluded and not _piece_covered(g, CylinderSet.make(g, c.word + (h,)), pieces, depth - 1):
                return False
        tail = CylinderSet(c.word, RangeSet.of_emitter(eid), c.excluded | frozenset(scanned), includes_base=False)
        if not any(cylinder_subset(g, tail, d) for d in pieces):
            return False
    return True


def covers_carrier(cover: Cover, depth: Optional[int] = None) -> bool:
    """Check symbolically that the members cover the carrier.

    Carrier cylinders are split by their next edge (emitter tails folded
    past the fold window) down to `depth` extra edges; True means every
    piece landed inside a member.
    """
    g = cover.graph
    pieces = [c for member in cover.members for c in member]
    if depth is None:
        depth = 1 + max(len(c.word) for c in pieces)
    carrier = cover.carrier if cover.carrier is not None else whole_space(g)
    return all(_piece_covered(g, c, pieces, depth) for c in carrier)


# Minimal subcover counts


class DeepPiece(NamedTuple):
    """A word cylinder known only through its first T edges."""

    prefix: Tuple[int, ...]


Item = Union[CylinderSet, DeepPiece]


def _normalise(g: Ultragraph, c: CylinderSet, horizon: int) -> Optional[Item]:
    if len(c.word) < horizon:
        return c
    if c.is_empty(g):
        return None
    return DeepPiece(c.word[:horizon])


def _meet_item(g: Ultragraph, item: Item, c: CylinderSet) -> Optional[Item]:
    if isinstance(item, DeepPiece):
        w = c.word
        if item.prefix[:len(w)] == w and c.allows(g, item.prefix[len(w)]):
            return item
        return None
    return item.intersect(c, g)


def _meet(g: Ultragraph, piece: FrozenSet[Item], member: Member, horizon: int) -> FrozenSet[Item]:
    out = set()
    for item in piece:
        for c in member:
            met = _meet_item(g, item, c)
            if met is not None:
                met = met if isinstance(met, DeepPiece) else _normalise(g, met, horizon)
                if met is not None:
                    out.add(met)
    return frozenset(out)


def _pull(g: Ultragraph, piece: FrozenSet[Item], horizon: int) -> FrozenSet[Item]:
    out = set()
    for item in piece:
        if isinstance(item, DeepPiece):
            out.update(DeepPiece(((p,) + item.prefix)[:horizon]) for p in g.predecessors(item.prefix[0]))
            continue
        for c in pullback_cylinder(g, item):
            normal = _normalise(g, c, horizon)
            if normal is not None:
                out.add(normal)
    return frozenset(out)


def partition_counts(cover: Cover, n_max: int) -> List[int]:
    """N(α_n, K_n) for n = 0..n_max of a pairwise-disjoint cover.

    For a partition, N(α_n, K_n) is the number of itineraries (A_0, ..., A_n)
    realised by some point of K_n. The sets A_i ∩ σ^{-1}(A_{i+1} ∩ ...) are
    built backwards and counted with multiplicity. Cylinders reaching the
    horizon T (one past the longest member word) are cut to their first T
    edges, which is all the members can see. Empty carriers count as 1.
    """
    g = cover.graph
    carrier = cover.carrier
    pieces = [c for member in cover.members for c in member] + list(carrier or ())
    horizon = 1 + max(len(c.word) for c in pieces)

    def restrict(piece: FrozenSet[Item]) -> FrozenSet[Item]:
        return piece if carrier is None else _meet(g, piece, carrier, horizon)

    level: Counter = Counter()
    for member in cover.members:
        piece = restrict(frozenset(filter(None, (_normalise(g, c, horizon) for c in member))))
        if piece:
            level[piece] += 1
    counts = [sum(level.values())]
    children: Dict[FrozenSet[Item], List[FrozenSet[Item]]] = {}
    for n in range(1, n_max + 1):
        nxt: Counter = Counter()
        for piece, weight in level.items():
            if piece not in children:
                pulled = _pull(g, piece, horizon)
                met = (restrict(_meet(g, pulled, member, horizon)) for member in cover.members)
                children[piece] = [child for child in met if child]
            for child in children[piece]:
                nxt[child] += weight
        level = nxt
        counts.append(sum(level.values()))
        logger.debug(f"{cover.name}: n={n}, {len(level)} distinct pieces, N={counts[-1]}")
    return [max(1, c) for c in counts]


def _cells(g: Ultragraph, depth: int) -> List[Tuple[int, ...]]:
    if g.num_edges is None or g.emitters():
        raise ValueError(f"atoms of {g.name} are infinite; the general subcover count needs a finite graph")
    cells = admissible_words(g, depth, g.num_edges)
    if len(cells) > config.ATOM_BUDGET:
        raise BudgetExceeded(len(cells), config.ATOM_BUDGET)
    return cells


def _cell_inside(g: Ultragraph, cell: Tuple[int, ...], member: Sequence[CylinderSet]) -> bool:
    return any(cell[:len(c.word)] == c.word and c.allows(g, cell[len(c.word)]) for c in member)


def minimal_subcover_count(a: Cover, carrier: Optional[Sequence[CylinderSet]] = None) -> int:
    """N(α, K): the least number of members whose union contains the carrier.

    Pairwise-disjoint covers count the members meeting the carrier. Other
    covers are solved exactly by set cover over the cells one edge deeper
    than every member, on finite graphs only.

    Args:
        a: The cover
        carrier: Cylinders of the carrier; the cover's own carrier when None

    Returns:
        The exact count; 1 when the carrier is empty

    Raises:
        BudgetExceeded: More cells than the atom budget
    """
    g = a.graph
    carrier = a.carrier if carrier is None else canonical_union(g, carrier)
    if a.is_partition():
        meeting = sum(1 for m in a.members if carrier is None or intersect_unions(g, m, carrier))
        return max(1, meeting)
    pieces = [c for member in a.members for c in member] + list(carrier or ())
    depth = 1 + max(len(c.word) for c in pieces)
    cells = _cells(g, depth)
    if carrier is not None:
        cells = [w for w in cells if _cell_inside(g, w, carrier)]
    if not cells:
        return 1
    masks = []
    for member in a.members:
        mask = 0
        for bit, w in enumerate(cells):
            if _cell_inside(g, w, member):
                mask |= 1 << bit
        masks.append(mask)
    chosen = exact_set_cover((1 << len(cells)) - 1, masks)
    logger.debug(f"Subcover of {a.name}: {len(chosen)} of {len(a)} members over {len(cells)} cells")
    return len(chosen)


# Fekete sequences and the estimate


@dataclass
class FeketeSequence:
    """The counts N(α_n, K_n), n = 0..n_max, and a_n = log N with its ratios a_n / n."""

    counts: List[int]

    @property
    def n_max(self) -> int:
        return len(self.counts) - 1

    @property
    def values(self) -> List[float]:
        return [math.log(c) for c in self.counts]

    @property
    def ratios(self) -> List[float]:
        """a_n / n for n = 1..n_max."""
        values = self.values
        return [values[n] / n for n in range(1, len(values))]

    @property
    def running_inf(self) -> List[float]:
        out, best = [], math.inf
        for ratio in self.ratios:
            best = min(best, ratio)
            out.append(best)
        return out

    def subadditivity_violations(self) -> List[Tuple[int, int]]:
        """Pairs (n, m) with N_{n+m} > N_n · N_m."""
        c = self.counts
        return [(n, m) for n in range(1, self.n_max + 1) for m in range(n, self.n_max + 1 - n)
                if c[n + m] > c[n] * c[m]]


@dataclass
class CoverEntropyReport:
    cover: str
    members: int
    sequence: FeketeSequence
    method: str
    window: Tuple[int, int]

    @property
    def estimate(self) -> float:
        """The running infimum of a_n / n at n_max."""
        return self.sequence.running_inf[-1]

    @property
    def slope(self) -> float:
        lo, hi = self.window
        values = self.sequence.values
        if hi == lo:
            return values[hi] / hi
        return (values[hi] - values[lo]) / (hi - lo)

    @property
    def last_ratio(self) -> float:
        return self.sequence.ratios[-1]

    @property
    def doubling(self) -> bool:
        c = self.sequence.counts
        return all(c[n + 1] == 2 * c[n] for n in range(len(c) - 1))


def exact_counts(a: Cover, n_max: int, threads: int = config.DR_ENTROPY_THREADS) -> Tuple[List[int], str]:
    """N(α_n, K_n) for n = 0..n_max and the method used ("partition" or "atoms")."""
    if a.is_partition():
        return partition_counts(a, n_max), "partition"

    def count(n: int) -> int:
        # the joins carry K_n along as the carrier
        return minimal_subcover_count(refined_cover(a, n))

    with ThreadPoolExecutor(max_workers=threads) as pool:
        counts = list(pool.map(count, range(n_max + 1)))
    return counts, "atoms"


def cover_entropy_estimate(a: Cover, system: Optional[GraphShiftSystem], n_max: int,
                           threads: int = config.DR_ENTROPY_THREADS) -> CoverEntropyReport:
    """h(α, σ, K) from the exact counts N(α_n, K_n), n ≤ n_max.

    Args:
        a: The cover
        system: The shift space the cover lives on (used for naming only)
        n_max: Largest refinement index, at least 1
        threads: Worker threads for the per-n counts of non-disjoint covers

    Returns:
        CoverEntropyReport; `estimate` is the running infimum (an upper
        bound for the limit), `slope` the growth over the upper half window

    Raises:
        BudgetExceeded: A refined non-disjoint cover passes its budget
    """
    if n_max < 1:
        raise ValueError(f"n_max must be positive, got {n_max}")
    counts, method = exact_counts(a, n_max, threads)
    sequence = FeketeSequence(counts)
    violations = sequence.subadditivity_violations()
    if violations:
        logger.error(f"Counts of {a.name} are not subadditive at {violations[:3]}")
    window = (max(1, math.ceil(n_max / 2)), n_max)
    name = a.name if system is None else f"{system.name}:{a.name}"
    report = CoverEntropyReport(name, len(a), sequence, method, window)
    logger.info(f"Cover entropy of {name}: inf={report.estimate:.6f}, slope={report.slope:.6f} ({method})")
    return report


# Diameters


def member_diameter(system: GraphShiftSystem, member: Sequence[CylinderSet]) -> Fraction:
    """Upper bound 1/2^i on the d_X-diameter of a member, i the first index whose status varies."""
    g = system.graph
    for i in range(1, system.enum_budget + 1):
        item = system.enumeration.item(i)
        statuses = {cylinder_status(g, item, c) for c in member}
        if None in statuses or len(statuses) > 1:
            return Fraction(1, 2 ** i)
    return Fraction(1, 2 ** (system.enum_budget + 1))


def cover_diameter(a: Cover, system: GraphShiftSystem) -> Fraction:
    return max(member_diameter(system, m) for m in a.members)


def diam_zero_schedule(system: GraphShiftSystem, m_schedule: Sequence[int]) -> List[Tuple[Cover, Fraction]]:
    """Covers α^m (renewal) or depth-m word covers with their diameters under d_X."""
    g = system.graph
    schedule = []
    for m in m_schedule:
        if g.emitters():
            cover = renewal_cover(m, g).cover
        else:
            cover = word_cover(g, m)
        diameter = cover_diameter(cover, system)
        logger.debug(f"{cover.name}: {len(cover)} members, diameter ≤ {diameter}")
        schedule.append((cover, diameter))
    return schedule


# Lemma checks


@dataclass
class LemmaCheck:
    name: str
    passed: bool
    detail: str


@dataclass
class CoverLemmaReport:
    checks: List[LemmaCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str) -> None:
        if not passed:
            logger.error(f"Cover lemma check {name} failed: {detail}")
        self.checks.append(LemmaCheck(name, passed, detail))


def overlapping_cover(g: Ultragraph) -> Cover:
    """D_{l1}, D_{l2} and D_{l1l1} ∪ D_{l2l2} on a rose with two or more petals."""
    a, b = CylinderSet.make(g, (0,)), CylinderSet.make(g, (1,))
    third = (CylinderSet.make(g, (0, 0)), CylinderSet.make(g, (1, 1)))
    return make_cover(g, [(a,), (b,), third], name="overlap")


CHECKS = ("join", "pullback", "subadditive", "nested", "monotone", "subcover", "renewal", "overlap")


def verify_cover_lemmas(samples: Optional[Sequence[str]] = None, n_max: int = 4) -> CoverLemmaReport:
    """Check the cover inequalities on small exact instances.

    join: N(α∨β, Y∩Z) ≤ N(α,Y)·N(β,Z); pullback: N(σ^{-1}(α)_m, σ^{-1}(Y)_m) ≤
    N(α_m, Y_m); subadditive: N_{n+m} ≤ N_n·N_m; nested: N(β_n, Y_n) ≤
    N(β_n, Z_n) for Y ⊆ Z; monotone: entropy over a smaller carrier is not
    larger; subcover: a cover containing α has no larger counts; renewal:
    α^{m+1} has counts at least those of α^m; overlap: the three-member
    rose-2 cover needs two members.
    """
    from graphs.builtins import RenewalUltragraph, rose

    selected = CHECKS if samples is None else tuple(samples)
    unknown = set(selected) - set(CHECKS)
    if unknown:
        raise ValueError(f"unknown cover checks: {', '.join(sorted(unknown))}")
    report = CoverLemmaReport()
    r2, r3 = rose(2), rose(3)
    words1 = word_cover(r2, 1)
    overlap = overlapping_cover(r2)

    if "join" in selected:
        y = (CylinderSet.make(r2, (0,)), CylinderSet.make(r2, (1, 0)))
        z = (CylinderSet.make(r2, (0, 1)), CylinderSet.make(r2, (1,)))
        alpha = make_cover(r2, words1.members, y, "α")
        beta = make_cover(r2, overlap.members, z, "β")
        joined = join(alpha, beta)
        left = minimal_subcover_count(joined)
        right = minimal_subcover_count(alpha) * minimal_subcover_count(beta)
        report.add("join", left <= right, f"N(α∨β)={left} ≤ N(α)N(β)={right}")

    if "pullback" in selected:
        for m in range(0, 3):
            pulled = exact_counts(pullback(overlap), m)[0][m]
            base = exact_counts(overlap, m)[0][m]
            report.add("pullback", pulled <= base, f"m={m}: {pulled} ≤ {base}")

    if "subadditive" in selected:
        for cover in (words1, overlap, word_cover(r3, 2)):
            violations = FeketeSequence(exact_counts(cover, n_max)[0]).subadditivity_violations()
            report.add("subadditive", not violations, f"{cover.name}: violations {violations}")

    if "nested" in selected or "monotone" in selected:
        small = make_cover(r3, word_cover(r3, 1).members, (CylinderSet.make(r3, (0,)),), "K")
        large = word_cover(r3, 1)
        small_counts = exact_counts(small, n_max)[0]
        large_counts = exact_counts(large, n_max)[0]
        if "nested" in selected:
            ok = all(s <= l for s, l in zip(small_counts, large_counts))
            report.add("nested", ok, f"{small_counts} ≤ {large_counts}")
        if "monotone" in selected:
            h_small = FeketeSequence(small_counts).running_inf[-1]
            h_large = FeketeSequence(large_counts).running_inf[-1]
            report.add("monotone", h_small <= h_large + 1e-12, f"h(K)={h_small:.6f} ≤ h(C)={h_large:.6f}")

    if "subcover" in selected:
        finer = make_cover(r2, words1.members + word_cover(r2, 2).members, name="α∪β")
        sub_counts = exact_counts(words1, 2)[0]
        sup_counts = exact_counts(finer, 2)[0]
        ok = all(s <= b for s, b in zip(sup_counts, sub_counts))
        report.add("subcover", ok, f"{sup_counts} ≤ {sub_counts}")

    if "renewal" in selected:
        g = RenewalUltragraph()
        previous = None
        for m in range(1, 4):
            counts = partition_counts(renewal_cover(m, g).cover, n_max)
            if previous is not None:
                ok = all(b >= a for a, b in zip(previous, counts))
                report.add("renewal", ok, f"α^{m}: {counts} ≥ α^{m - 1}: {previous}")
            previous = counts

    if "overlap" in selected:
        count = minimal_subcover_count(overlap)
        report.add("overlap", count == 2, f"N={count}")

    logger.info(f"Cover lemma checks: {sum(c.passed for c in report.checks)}/{len(report.checks)} passed")
    return report
