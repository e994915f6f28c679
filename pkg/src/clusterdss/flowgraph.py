"""Information flow graphs for single-round failure/repair histories.

A graph holds a source, a data collector and an ``in``/``out`` vertex pair
per storage node. Capacities are exact: Fractions, or ``math.inf`` for the
seed and collector edges (and storage edges when ``alpha`` is infinite).

Eavesdroppers are applied by zeroing capacities rather than deleting edges,
so an eavesdropped graph has the same shape as the original.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ._kernels import max_flow
from .errors import InvalidSchedule, PlacementViolation
from .topology import (
    AdversaryModel,
    AdversarySpec,
    Amount,
    BandwidthModel,
    ClusterTopology,
    as_amount,
    cluster_restricted,
    is_inf,
)

SOURCE = 0
COLLECTOR = 1


class VertexKind(enum.Enum):
    SOURCE = "source"
    COLLECTOR = "collector"
    IN = "in"
    OUT = "out"


class EdgeTag(enum.Enum):
    INTRA = "intra"
    CROSS = "cross"
    STORAGE = "storage"
    SEED = "seed"
    COLLECT = "collect"


@dataclass(frozen=True)
class Vertex:
    name: str
    kind: VertexKind
    node: Optional[int] = None
    cluster: Optional[int] = None
    generation: int = 0  # 0 for initial nodes, i for the i-th newcomer


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    capacity: Amount
    tag: EdgeTag


@dataclass(frozen=True)
class Repair:
    failed: int
    newcomer: int
    cluster: Optional[int] = None  # None: inherit the failed node's cluster


@dataclass(frozen=True)
class RepairSchedule:
    repairs: Tuple[Repair, ...]
    dc_selection: Tuple[int, ...]

    @classmethod
    def consecutive(cls, t: ClusterTopology, failed: Sequence[int]) -> "RepairSchedule":
        """Nodes in ``failed`` fail one after another, newcomers numbered from n.

        The data collector contacts exactly the newcomers.
        """
        repairs = tuple(Repair(f, t.n + i) for i, f in enumerate(failed))
        return cls(repairs, tuple(r.newcomer for r in repairs))


@dataclass(frozen=True)
class FlowGraph:
    topology: ClusterTopology
    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]
    schedule: RepairSchedule
    node_vertex: Dict[int, Tuple[int, int]] = field(compare=False, repr=False)

    def cluster_of(self, node: int) -> int:
        return self.vertices[self.node_vertex[node][0]].cluster

    def count(self, tag: EdgeTag, nonzero_only: bool = False) -> int:
        return sum(
            1 for e in self.edges if e.tag is tag and (not nonzero_only or e.capacity != 0)
        )

    def in_edges(self, vertex: int) -> List[Edge]:
        return [e for e in self.edges if e.head == vertex]


def build_flow_graph(
    t: ClusterTopology, bw: BandwidthModel, sched: RepairSchedule, alpha
) -> FlowGraph:
    alpha = as_amount(alpha)
    vertices: List[Vertex] = [
        Vertex("S", VertexKind.SOURCE),
        Vertex("DC", VertexKind.COLLECTOR),
    ]
    edges: List[Edge] = []
    node_vertex: Dict[int, Tuple[int, int]] = {}
    cluster: Dict[int, int] = {}

    def add_node(node: int, c: int, generation: int) -> None:
        vin = len(vertices)
        vertices.append(Vertex(f"v{node}_in", VertexKind.IN, node, c, generation))
        vertices.append(Vertex(f"v{node}_out", VertexKind.OUT, node, c, generation))
        node_vertex[node] = (vin, vin + 1)
        cluster[node] = c
        edges.append(Edge(vin, vin + 1, alpha, EdgeTag.STORAGE))

    active: List[int] = []
    for u in range(t.n):
        add_node(u, t.cluster_of(u), 0)
        edges.append(Edge(SOURCE, node_vertex[u][0], math.inf, EdgeTag.SEED))
        active.append(u)

    seen_failed = set()
    for step, rep in enumerate(sched.repairs, start=1):
        if rep.failed not in active:
            raise InvalidSchedule(f"step {step}: node {rep.failed} is not active")
        if rep.failed in seen_failed:
            raise InvalidSchedule(f"step {step}: node {rep.failed} already failed")
        if rep.newcomer in node_vertex:
            raise InvalidSchedule(f"step {step}: newcomer id {rep.newcomer} already used")
        c = cluster[rep.failed]
        if rep.cluster is not None and rep.cluster != c:
            raise InvalidSchedule(
                f"step {step}: newcomer {rep.newcomer} must join cluster {c} of the failed node"
            )
        seen_failed.add(rep.failed)
        active.remove(rep.failed)
        add_node(rep.newcomer, c, step)
        vin = node_vertex[rep.newcomer][0]
        for h in active:
            same = cluster[h] == c
            edges.append(
                Edge(
                    node_vertex[h][1],
                    vin,
                    bw.edge_capacity(same),
                    EdgeTag.INTRA if same else EdgeTag.CROSS,
                )
            )
        active.append(rep.newcomer)

    dc = sched.dc_selection
    if len(dc) != t.k or len(set(dc)) != t.k:
        raise InvalidSchedule(f"data collector must contact exactly k={t.k} distinct nodes")
    for u in dc:
        if u not in active:
            raise InvalidSchedule(f"data collector contacts inactive node {u}")
        edges.append(Edge(node_vertex[u][1], COLLECTOR, math.inf, EdgeTag.COLLECT))

    return FlowGraph(t, tuple(vertices), tuple(edges), sched, node_vertex)


def apply_eavesdropper(
    g: FlowGraph, adv: AdversarySpec, placement: Iterable[int]
) -> FlowGraph:
    """Zero the capacities the adversary observes.

    ``placement`` is a set of cluster ids for the node-restricted model and a
    set of node ids for the cluster-restricted one.
    """
    t = g.topology
    adv.validate(t)
    placement = frozenset(placement)
    zero = Fraction(0)
    edges = list(g.edges)
    if adv.model is AdversaryModel.NODE_RESTRICTED:
        if len(placement) > adv.L_c:
            raise PlacementViolation(f"{len(placement)} clusters named, L_c={adv.L_c}")
        bad = [c for c in placement if not 0 <= c < t.L]
        if bad:
            raise PlacementViolation(f"unknown cluster ids {sorted(bad)}")
        for idx, e in enumerate(edges):
            if e.tag is EdgeTag.CROSS and (
                g.vertices[e.tail].cluster in placement
                or g.vertices[e.head].cluster in placement
            ):
                edges[idx] = replace(e, capacity=zero)
    else:
        unknown = [u for u in placement if u not in g.node_vertex]
        if unknown:
            raise PlacementViolation(f"unknown node ids {sorted(unknown)}")
        if len(placement) > adv.l:
            raise PlacementViolation(f"{len(placement)} nodes named, l={adv.l}")
        spanned = {g.cluster_of(u) for u in placement}
        if len(spanned) > adv.L_c:
            raise PlacementViolation(
                f"placement spans {len(spanned)} clusters, L_c={adv.L_c}"
            )
        watched_in = {g.node_vertex[u][0] for u in placement}
        for idx, e in enumerate(edges):
            if e.head in watched_in and e.tag in (EdgeTag.INTRA, EdgeTag.CROSS):
                edges[idx] = replace(e, capacity=zero)
            elif e.tail in watched_in and e.tag is EdgeTag.STORAGE:
                edges[idx] = replace(e, capacity=zero)
    return replace(g, edges=tuple(edges))


def integer_capacities(edges: Sequence[Edge]) -> Tuple[List[int], int, int]:
    """Scale capacities to integers.

    Returns ``(caps, scale, infinity)``: finite capacity ``c`` becomes
    ``c * scale`` and infinite ones become ``infinity``, one more than the sum
    of every scaled finite capacity.
    """
    scale = 1
    for e in edges:
        if not is_inf(e.capacity):
            scale = math.lcm(scale, Fraction(e.capacity).denominator)
    caps: List[Optional[int]] = []
    finite_total = 0
    for e in edges:
        if is_inf(e.capacity):
            caps.append(None)
        else:
            c = Fraction(e.capacity) * scale
            caps.append(c.numerator)
            finite_total += c.numerator
    infinity = finite_total + 1
    return [infinity if c is None else c for c in caps], scale, infinity


def min_cut(g: FlowGraph) -> Amount:
    """Exact source-to-collector min-cut value (``math.inf`` if unbounded)."""
    caps, scale, infinity = integer_capacities(g.edges)
    value = max_flow(
        len(g.vertices),
        [e.tail for e in g.edges],
        [e.head for e in g.edges],
        caps,
        SOURCE,
        COLLECTOR,
    )
    if value >= infinity:
        return math.inf
    return Fraction(value, scale)


def brute_force_min_cut(g: FlowGraph) -> Amount:
    """Minimum over every source-side vertex subset; exponential, tests only."""
    free = list(range(2, len(g.vertices)))
    if len(free) > 22:
        raise ValueError("graph too large for cut enumeration")
    best: Amount = math.inf
    for size in range(len(free) + 1):
        for side in combinations(free, size):
            source_side = {SOURCE, *side}
            total: Amount = Fraction(0)
            for e in g.edges:
                if e.tail in source_side and e.head not in source_side:
                    total += e.capacity
                    if total >= best:
                        break
            if total < best:
                best = total
    return best


def dump_edges(g: FlowGraph) -> str:
    """Line-oriented ``tail head capacity tag`` listing sorted by (tail, head)."""
    lines = []
    for e in sorted(g.edges, key=lambda e: (e.tail, e.head)):
        cap = "inf" if is_inf(e.capacity) else str(Fraction(e.capacity))
        lines.append(f"{g.vertices[e.tail].name} {g.vertices[e.head].name} {cap} {e.tag.value}")
    return "\n".join(lines) + "\n"


def _pick(candidates: List[int], key, tie_break) -> int:
    best = max(key(c) for c in candidates)
    tied = [c for c in candidates if key(c) == best]
    if tie_break == "low":
        return min(tied)
    if tie_break == "high":
        return max(tied)
    if isinstance(tie_break, random.Random):
        return tie_break.choice(sorted(tied))
    raise ValueError(f"unknown tie_break {tie_break!r}")


def worst_case_failures(
    t: ClusterTopology, l: int, L_c: int, tie_break="low"
) -> Tuple[List[int], List[int]]:
    """Failure order and eavesdropped positions of the worst-case graph.

    The ``k`` failures fill ``floor(k/n_I)`` clusters completely and put the
    remainder in one more cluster. The first ``l`` failures are the
    eavesdropped ones, spread round-robin over at most ``L_c`` of those
    clusters (full clusters first). Every further failure is taken from the
    cluster with the most unfailed nodes among those with failures left.

    Returns ``(failed_nodes, eavesdropped_positions)`` where positions index
    into ``failed_nodes``.
    """
    cluster_restricted(t, l, L_c)
    q, r = divmod(t.k, t.n_I)
    quota = {c: t.n_I for c in range(q)}
    if r:
        quota[q] = r
    failed_clusters = sorted(quota)
    spy_clusters = failed_clusters[: min(L_c, len(failed_clusters))]
    spy_quota = {c: 0 for c in failed_clusters}
    left = l
    while left:
        progressed = False
        for c in spy_clusters:
            if left and spy_quota[c] < quota[c]:
                spy_quota[c] += 1
                left -= 1
                progressed = True
        if not progressed:
            raise PlacementViolation("eavesdroppers do not fit in the failed clusters")

    failed_count = {c: 0 for c in failed_clusters}
    order: List[int] = []

    def fail_one(c: int) -> None:
        order.append(t.cluster_nodes(c)[failed_count[c]])
        failed_count[c] += 1

    spied = {c: 0 for c in failed_clusters}
    for _ in range(l):
        c = _pick(
            [c for c in failed_clusters if spied[c] < spy_quota[c]],
            lambda c: t.n_I - failed_count[c],
            tie_break,
        )
        spied[c] += 1
        fail_one(c)
    for _ in range(t.k - l):
        c = _pick(
            [c for c in failed_clusters if failed_count[c] < quota[c]],
            lambda c: t.n_I - failed_count[c],
            tie_break,
        )
        fail_one(c)
    return order, list(range(l))


def build_worst_case_graph(
    t: ClusterTopology, bw: BandwidthModel, l: int, L_c: int, alpha, tie_break="low"
) -> Tuple[FlowGraph, frozenset]:
    """Worst-case graph for the cluster-restricted adversary and its placement.

    The placement is the set of eavesdropped newcomer ids; pass it with a
    cluster-restricted :class:`AdversarySpec` to :func:`apply_eavesdropper`.
    """
    order, spy_positions = worst_case_failures(t, l, L_c, tie_break)
    sched = RepairSchedule.consecutive(t, order)
    g = build_flow_graph(t, bw, sched, alpha)
    placement = frozenset(sched.repairs[p].newcomer for p in spy_positions)
    return g, placement
