"""Wireless topologies and the graph machinery behind attack planning.

Nodes are dense integer ids. A link between two nodes exists exactly when
their euclidean distance is within the communication range; scenario-2
planning views every link as a pair of directed arcs.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np

Link = tuple[int, int]  # undirected link, canonical (min, max) form
Arc = tuple[int, int]   # directed link (tx, rx)

DEFAULT_COMM_RANGE = 200.0
DEPLOY_AREA = ((200.0, 1000.0), (200.0, 1000.0))
RANDOM_NODE_COUNT = 20
RESAMPLE_CAP = 10_000
BRUTE_FORCE_NODE_CAP = 12

TOPOLOGY_KINDS = ("line", "star", "grid", "ring", "random", "explicit")


class GenerationError(RuntimeError):
    """Random layout generation exhausted its resample budget."""


def link(u: int, v: int) -> Link:
    """Canonical (min, max) form of an undirected link."""
    return (u, v) if u < v else (v, u)


def derive_links(positions, comm_range: float) -> tuple[Link, ...]:
    """All node pairs within communication range.

    Uses an exact comparison on squared distances so the fixed layouts
    (multiples of the range) are decided without tolerance.
    """
    links = []
    r2 = comm_range * comm_range
    for u in range(len(positions)):
        xu, yu = positions[u]
        for v in range(u + 1, len(positions)):
            xv, yv = positions[v]
            if (xu - xv) ** 2 + (yu - yv) ** 2 <= r2:
                links.append((u, v))
    return tuple(links)


@dataclass
class Topology:
    """Node layout plus the connectivity it induces under a communication range."""

    positions: tuple[tuple[float, float], ...]
    comm_range: float
    links: tuple[Link, ...]
    kind: str = "explicit"

    def __post_init__(self):
        self.positions = tuple((float(x), float(y)) for x, y in self.positions)
        n = len(self.positions)
        for x, y in self.positions:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ValueError("node positions must be finite")
        canonical = set()
        for u, v in self.links:
            if u == v:
                raise ValueError(f"self-link at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"link ({u}, {v}) references an unknown node")
            canonical.add(link(u, v))
        self.links = tuple(sorted(canonical))
        self._link_set = frozenset(self.links)

    @property
    def num_nodes(self) -> int:
        return len(self.positions)

    def has_link(self, u: int, v: int) -> bool:
        return link(u, v) in self._link_set

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.num_nodes)]
        for u, v in self.links:
            adj[u].append(v)
            adj[v].append(u)
        return [sorted(a) for a in adj]

    def distance(self, u: int, v: int) -> float:
        return math.dist(self.positions[u], self.positions[v])

    def to_dict(self) -> dict:
        return {
            "comm_range": self.comm_range,
            "positions": [list(p) for p in self.positions],
            "links": [list(l) for l in self.links],
        }

    @classmethod
    def from_dict(cls, data: dict, kind: str = "explicit") -> "Topology":
        positions = [tuple(p) for p in data["positions"]]
        comm_range = float(data["comm_range"])
        if "links" in data and data["links"] is not None:
            links = tuple(tuple(l) for l in data["links"])
        else:
            links = derive_links(positions, comm_range)
        return cls(tuple(positions), comm_range, links, kind)


def save_topology(topology: Topology, path) -> None:
    Path(path).write_text(json.dumps(topology.to_dict(), indent=2) + "\n", encoding="utf-8")


def load_topology(path) -> Topology:
    return Topology.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _fixed_layout(kind: str) -> list[tuple[float, float]]:
    if kind == "line":
        return [(200.0 * i, 600.0) for i in range(1, 6)]
    if kind == "star":
        horizontal = [(200.0 * i, 600.0) for i in range(1, 6)]
        vertical = [(600.0, 200.0 * i) for i in (1, 2, 4, 5)]
        return horizontal + vertical
    if kind == "grid":
        return [(200.0 * i, 200.0 * j) for j in range(1, 6) for i in range(1, 6)]
    if kind == "ring":
        return [
            (200.0 * i, 200.0 * j)
            for j in range(1, 6)
            for i in range(1, 6)
            if i in (1, 5) or j in (1, 5)
        ]
    raise ValueError(f"unknown fixed topology kind {kind!r}")


def build_topology(
    kind: str,
    rng: np.random.Generator | None = None,
    comm_range: float = DEFAULT_COMM_RANGE,
    num_nodes: int = RANDOM_NODE_COUNT,
    resample_cap: int = RESAMPLE_CAP,
) -> Topology:
    """Construct one of the named layouts, or a random connected layout.

    Random layouts draw ``num_nodes`` positions uniformly from the deployment
    square and resample the whole layout until it comes out connected.
    """
    if kind in ("line", "star", "grid", "ring"):
        positions = _fixed_layout(kind)
        topo = Topology(tuple(positions), comm_range, derive_links(positions, comm_range), kind)
        if len(connected_components(topo.num_nodes, topo.links)) != 1:
            raise ValueError(f"{kind} layout is not connected under range {comm_range}")
        return topo
    if kind == "random":
        if rng is None:
            raise ValueError("random topology generation requires an rng")
        (xlo, xhi), (ylo, yhi) = DEPLOY_AREA
        for _ in range(resample_cap):
            xs = rng.uniform(xlo, xhi, size=num_nodes)
            ys = rng.uniform(ylo, yhi, size=num_nodes)
            positions = tuple((float(x), float(y)) for x, y in zip(xs, ys))
            links = derive_links(positions, comm_range)
            if len(connected_components(num_nodes, links)) == 1:
                return Topology(positions, comm_range, links, "random")
        raise GenerationError(
            f"no connected layout of {num_nodes} nodes within {resample_cap} resamples"
        )
    raise ValueError(f"unknown topology kind {kind!r}")


@dataclass
class DirectedView:
    """Both orientations of every undirected link, for receiver-side jamming."""

    num_nodes: int
    arcs: tuple[Arc, ...]

    def __post_init__(self):
        self.arcs = tuple(sorted(set(map(tuple, self.arcs))))
        self._arc_set = frozenset(self.arcs)

    def has_arc(self, tx: int, rx: int) -> bool:
        return (tx, rx) in self._arc_set

    def undirected_links(self) -> tuple[Link, ...]:
        return tuple(sorted({link(a, b) for a, b in self.arcs}))


def directed_view(topology: Topology) -> DirectedView:
    arcs = []
    for u, v in topology.links:
        arcs.append((u, v))
        arcs.append((v, u))
    return DirectedView(topology.num_nodes, tuple(arcs))


def degrees(topology: Topology) -> list[int]:
    deg = [0] * topology.num_nodes
    for u, v in topology.links:
        deg[u] += 1
        deg[v] += 1
    return deg


def in_degrees(view: DirectedView) -> list[int]:
    deg = [0] * view.num_nodes
    for _tx, rx in view.arcs:
        deg[rx] += 1
    return deg


def connected_components(num_nodes: int, links) -> list[list[int]]:
    """Vertex sets of the graph's components, ordered by smallest member id."""
    adj: list[list[int]] = [[] for _ in range(num_nodes)]
    for u, v in links:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * num_nodes
    components = []
    for start in range(num_nodes):
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        comp = [start]
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        components.append(sorted(comp))
    return components


@dataclass
class CutResult:
    """A set of links (or arcs) whose removal disconnects the graph."""

    links: tuple[tuple[int, int], ...]
    weight: int
    sides: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    st_pair: tuple[int, int] | None = None


def _min_cut_weight(weights: list[list[float]], vertices: list[int]) -> int:
    """Global minimum cut weight by repeated maximum-adjacency search.

    Operates on a dense weight matrix; merged super-vertices accumulate
    parallel-edge weight. Returns 0 for a disconnected vertex set.
    """
    verts = list(vertices)
    w = [row[:] for row in weights]
    best = math.inf
    while len(verts) > 1:
        start = verts[0]
        order = [start]
        key = {v: w[start][v] for v in verts if v != start}
        while key:
            # highest attachment weight, smallest id on ties
            nxt = min(key, key=lambda v: (-key[v], v))
            del key[nxt]
            order.append(nxt)
            for v in key:
                key[v] += w[nxt][v]
        t = order[-1]
        cut_of_phase = sum(w[t][v] for v in verts if v != t)
        best = min(best, cut_of_phase)
        s = order[-2]
        for v in verts:
            if v != s and v != t:
                w[s][v] += w[t][v]
                w[v][s] = w[s][v]
        verts.remove(t)
    return int(best)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # keep the smaller id as representative for deterministic iteration
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra


def _contracted_weights(n: int, links, uf: _UnionFind, removed: set) -> tuple[list[list[float]], list[int]]:
    w = [[0.0] * n for _ in range(n)]
    reps = {uf.find(v) for v in range(n)}
    for l in links:
        if l in removed:
            continue
        u, v = uf.find(l[0]), uf.find(l[1])
        if u != v:
            w[u][v] += 1.0
            w[v][u] += 1.0
    return w, sorted(reps)


def global_min_cut_undirected(topology: Topology) -> CutResult:
    """Minimum-cardinality link set disconnecting the topology.

    Among all minimum cuts, returns the one whose sorted link list is
    lexicographically smallest. The weight comes from maximum-adjacency
    search; the link set is then refined one link at a time: a candidate
    link is kept when deleting it drops the residual cut weight by one,
    otherwise its endpoints are contracted so no later choice can cut it.
    """
    n = topology.num_nodes
    if n < 2:
        raise ValueError("minimum cut is undefined for a single-node graph")
    if len(connected_components(n, topology.links)) != 1:
        raise ValueError("minimum cut requires a connected topology")

    base = [[0.0] * n for _ in range(n)]
    for u, v in topology.links:
        base[u][v] = 1.0
        base[v][u] = 1.0
    total = _min_cut_weight(base, list(range(n)))

    uf = _UnionFind(n)
    removed: set[Link] = set()
    committed: list[Link] = []
    remaining = total
    for e in topology.links:
        if remaining == 0:
            break
        if uf.find(e[0]) == uf.find(e[1]):
            continue
        w, verts = _contracted_weights(n, topology.links, uf, removed | {e})
        if _min_cut_weight(w, verts) == remaining - 1:
            committed.append(e)
            removed.add(e)
            remaining -= 1
        else:
            uf.union(e[0], e[1])

    cut = tuple(committed)
    survivors = [l for l in topology.links if l not in removed]
    comps = connected_components(n, survivors)
    sides = (tuple(comps[0]), tuple(v for comp in comps[1:] for v in comp))
    return CutResult(cut, total, sides=sides)


def _max_flow(capacity: np.ndarray, s: int, t: int) -> int:
    """Edmonds-Karp on a dense residual matrix with integer capacities."""
    n = capacity.shape[0]
    residual = capacity.copy()
    flow = 0
    while True:
        parent = np.full(n, -1, dtype=np.int64)
        parent[s] = s
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if u == t:
                break
            for v in np.nonzero(residual[u] > 0)[0]:
                if parent[v] < 0:
                    parent[v] = u
                    queue.append(int(v))
        if parent[t] < 0:
            return flow
        bottleneck = None
        v = t
        while v != s:
            u = int(parent[v])
            cap = int(residual[u, v])
            bottleneck = cap if bottleneck is None else min(bottleneck, cap)
            v = u
        v = t
        while v != s:
            u = int(parent[v])
            residual[u, v] -= bottleneck
            residual[v, u] += bottleneck
            v = u
        flow += bottleneck


_UNCUTTABLE = 1 << 30


def global_min_cut_directed(view: DirectedView) -> CutResult:
    """Smallest arc set destroying every path for some ordered node pair.

    Minimizes the unit-capacity max-flow over all ordered pairs; ties go to
    the smallest (s, t), then to the lexicographically smallest sorted arc
    list (kept arcs are made uncuttable so later choices cannot use them).
    """
    n = view.num_nodes
    if n < 2:
        raise ValueError("minimum cut is undefined for fewer than two nodes")
    if len(connected_components(n, view.undirected_links())) != 1:
        raise ValueError("minimum cut requires a connected topology")

    base = np.zeros((n, n), dtype=np.int64)
    for tx, rx in view.arcs:
        base[tx, rx] = 1
    best = None
    witness = None
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            f = _max_flow(base, s, t)
            if best is None or f < best:
                best, witness = f, (s, t)
    s, t = witness

    capacity = base.copy()
    committed: list[Arc] = []
    remaining = best
    for arc in view.arcs:
        if remaining == 0:
            break
        saved = capacity[arc[0], arc[1]]
        capacity[arc[0], arc[1]] = 0
        if _max_flow(capacity, s, t) == remaining - 1:
            committed.append(arc)
            remaining -= 1
        else:
            capacity[arc[0], arc[1]] = max(saved, _UNCUTTABLE)
    return CutResult(tuple(committed), best, st_pair=(s, t))


def brute_force_min_cut(topology: Topology) -> CutResult:
    """Exhaustive minimum cut over all vertex bipartitions. Test oracle only."""
    n = topology.num_nodes
    if n > BRUTE_FORCE_NODE_CAP:
        raise ValueError(f"brute-force cut search is capped at {BRUTE_FORCE_NODE_CAP} nodes")
    if n < 2:
        raise ValueError("minimum cut is undefined for a single-node graph")
    links = topology.links
    best_key = None
    best_side = None
    for mask in range(1, 1 << (n - 1)):
        side_b = frozenset(i + 1 for i in range(n - 1) if (mask >> i) & 1)
        crossing = tuple(l for l in links if (l[0] in side_b) != (l[1] in side_b))
        key = (len(crossing), crossing)
        if best_key is None or key < best_key:
            best_key = key
            best_side = side_b
    weight, cut = best_key
    side_b = tuple(sorted(best_side))
    side_a = tuple(sorted(set(range(n)) - best_side))
    return CutResult(cut, weight, sides=(side_a, side_b))
