"""Finite directed graphs, pointed graphs, SCC machinery, and generators.

Vertex and edge ids are dense non-negative integers assigned at
construction; every tie-break (Kahn candidates, component output order)
is smallest-id-first so that runs are bit-reproducible.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field

import numpy as np

STAR_VERTEX = -1
STAR_EDGE = -1


class GraphError(ValueError):
    pass


class CycleDetected(GraphError):
    pass


class InvalidProbability(GraphError):
    pass


class EmptyLayer(GraphError):
    pass


class NotSimple(GraphError):
    pass


@dataclass(frozen=True)
class DiGraph:
    """A finite directed graph with explicit edge ids.

    Loops and parallel edges are legal here (transition graphs need
    them); callers that need a simple graph validate via
    :meth:`require_simple`.
    """

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (edge id, source, target)

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        eids = [e[0] for e in self.edges]
        if len(set(eids)) != len(eids):
            raise GraphError("duplicate edge ids")
        for eid, s, t in self.edges:
            if s not in vs or t not in vs:
                raise GraphError(f"edge {eid} has endpoint outside vertex set")

    @staticmethod
    def from_edges(n_vertices: int, pairs) -> "DiGraph":
        """Build a graph on vertices 0..n-1 from (source, target) pairs."""
        edges = tuple((i, s, t) for i, (s, t) in enumerate(pairs))
        return DiGraph(tuple(range(n_vertices)), edges)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def out_edges(self, v: int) -> list[tuple[int, int, int]]:
        return [e for e in self.edges if e[1] == v]

    def in_edges(self, v: int) -> list[tuple[int, int, int]]:
        return [e for e in self.edges if e[2] == v]

    def successors(self, v: int) -> list[int]:
        return sorted({t for _, s, t in self.edges if s == v})

    def is_simple(self) -> bool:
        seen = set()
        for _, s, t in self.edges:
            if s == t or (s, t) in seen:
                return False
            seen.add((s, t))
        return True

    def require_simple(self) -> None:
        if not self.is_simple():
            raise NotSimple("graph has loops or parallel edges")

    def to_json(self) -> str:
        obj = {"edges": [list(e) for e in self.edges], "vertices": list(self.vertices)}
        return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"

    @staticmethod
    def from_json(text: str) -> "DiGraph":
        obj = json.loads(text)
        return DiGraph(tuple(obj["vertices"]), tuple(tuple(e) for e in obj["edges"]))


@dataclass(frozen=True)
class PointedDiGraph:
    """A graph together with a disjoint base vertex carrying one loop edge."""

    base: DiGraph
    star_vertex: int = STAR_VERTEX
    star_edge: int = STAR_EDGE

    def __post_init__(self):
        if self.star_vertex in self.base.vertices:
            raise GraphError("star vertex collides with base graph ids")
        if self.star_edge in {e[0] for e in self.base.edges}:
            raise GraphError("star edge collides with base graph ids")

    @property
    def vertices(self) -> tuple[int, ...]:
        return self.base.vertices + (self.star_vertex,)

    @property
    def edges(self) -> tuple[tuple[int, int, int], ...]:
        return self.base.edges + ((self.star_edge, self.star_vertex, self.star_vertex),)

    def edge_ids(self) -> tuple[int, ...]:
        """Non-base edge ids in construction order."""
        return tuple(e[0] for e in self.base.edges)


def to_pointed(g: DiGraph) -> PointedDiGraph:
    """Attach the disjoint base vertex with its single looping edge."""
    return PointedDiGraph(g)


def tarjan_scc(g: DiGraph) -> list[list[int]]:
    """Strongly connected components, emitted in reverse topological order.

    Iterative Tarjan; roots are scanned in ascending id order and
    neighbours visited in ascending order, so output is deterministic.
    Component members are sorted ascending.
    """
    adj = {v: [] for v in g.vertices}
    for _, s, t in g.edges:
        adj[s].append(t)
    for v in adj:
        adj[v] = sorted(set(adj[v]))

    index: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0

    for root in sorted(g.vertices):
        if root in index:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj[w])))
                    advanced = True
                    break
                elif w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                components.append(sorted(comp))
    return components


def condensation(g: DiGraph) -> DiGraph:
    """Contract each strongly connected component to a single vertex.

    Component vertex ids follow the tarjan_scc output order; parallel
    inter-component edges collapse to one, with edge ids assigned in
    sorted (source, target) order.
    """
    comps = tarjan_scc(g)
    comp_of = {}
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    pairs = sorted({(comp_of[s], comp_of[t]) for _, s, t in g.edges if comp_of[s] != comp_of[t]})
    edges = tuple((i, s, t) for i, (s, t) in enumerate(pairs))
    return DiGraph(tuple(range(len(comps))), edges)


def kahn_order(g: DiGraph) -> list[int]:
    """Topological order with smallest-id-first tie-breaking.

    Raises CycleDetected when the graph is not acyclic (callers should
    condense first).
    """
    indeg = {v: 0 for v in g.vertices}
    adj = {v: [] for v in g.vertices}
    for _, s, t in g.edges:
        if s != t:
            indeg[t] += 1
            adj[s].append(t)
        else:
            raise CycleDetected(f"loop at vertex {s}")
    # parallel edges each count toward in-degree; harmless for ordering
    heap = [v for v in g.vertices if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in sorted(adj[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) != len(g.vertices):
        raise CycleDetected("graph contains a directed cycle")
    return order


def is_acyclic(g: DiGraph) -> bool:
    try:
        kahn_order(g)
        return True
    except CycleDetected:
        return False


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-split RNG: one 64-bit seed fans out to independent streams."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def gen_erdos_renyi(n: int, p: float, seed: int) -> DiGraph:
    """Directed G(n, p): each ordered pair (u, v), u != v, independently."""
    if not 0.0 <= p <= 1.0:
        raise InvalidProbability(f"p={p} not in [0,1]")
    if n < 1:
        raise GraphError("need n >= 1")
    rng = rng_for(seed)
    draws = rng.random((n, n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v and draws[u, v] < p]
    return DiGraph.from_edges(n, pairs)


def gen_erdos_renyi_undirected(n: int, p: float, seed: int) -> DiGraph:
    """Undirected G(n, p), stored with the canonical low-to-high orientation.

    The undirected flag complex ignores orientation, so this carrier is
    what the random-graph homology experiments sample from.
    """
    if not 0.0 <= p <= 1.0:
        raise InvalidProbability(f"p={p} not in [0,1]")
    if n < 1:
        raise GraphError("need n >= 1")
    rng = rng_for(seed)
    draws = rng.random((n, n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if draws[u, v] < p]
    return DiGraph.from_edges(n, pairs)


def gen_mlp(layer_sizes: list[int]) -> DiGraph:
    """Fully connected feedforward stack; no skip connections."""
    if len(layer_sizes) < 2:
        raise GraphError("need at least 2 layers")
    if any(k <= 0 for k in layer_sizes):
        raise EmptyLayer("layer sizes must be positive")
    layers = []
    nxt = 0
    for k in layer_sizes:
        layers.append(list(range(nxt, nxt + k)))
        nxt += k
    pairs = []
    for a, b in zip(layers, layers[1:]):
        for u in a:
            for v in b:
                pairs.append((u, v))
    return DiGraph.from_edges(nxt, pairs)


def mlp_layers(layer_sizes: list[int]) -> list[list[int]]:
    """Vertex ids per layer for a graph produced by gen_mlp."""
    layers = []
    nxt = 0
    for k in layer_sizes:
        layers.append(list(range(nxt, nxt + k)))
        nxt += k
    return layers


def simple_cycles(g: DiGraph, max_len: int | None = None) -> list[tuple[int, ...]]:
    """All simple directed cycles as edge-id tuples, deterministically ordered.

    Intended for small graphs (exhaustive test batteries); cycles are
    rooted at their smallest vertex and listed sorted.
    """
    out = {v: sorted([(t, eid) for eid, s, t in g.edges if s == v]) for v in g.vertices}
    cycles = set()
    n_cap = max_len or g.n_vertices

    def walk(root, v, path_edges, visited):
        for (w, eid) in out[v]:
            if w == root:
                cycles.add(tuple(path_edges + [eid]))
            elif w > root and w not in visited and len(path_edges) + 1 < n_cap:
                walk(root, w, path_edges + [eid], visited | {w})

    for root in sorted(g.vertices):
        walk(root, root, [], {root})
    return sorted(cycles, key=lambda c: (len(c), c))
