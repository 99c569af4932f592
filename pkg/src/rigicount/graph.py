"""Finite simple graphs on vertices 0..n-1, core peeling, connectivity, cones."""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph with vertex labels 0..n-1."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        clean = set()
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {u}-{v} outside 0..{self.n - 1}")
            clean.add(_pair(u, v))
        object.__setattr__(self, "edges", frozenset(clean))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "Graph":
        return cls(n, frozenset(_pair(int(u), int(v)) for u, v in edges))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, frozenset(combinations(range(n), 2)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @cached_property
    def adj(self) -> tuple[frozenset, ...]:
        nbrs: list[set] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def min_degree(self) -> int:
        return min(self.degrees()) if self.n else 0

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def add_edge(self, u: int, v: int) -> "Graph":
        return Graph(self.n, self.edges | {_pair(u, v)})

    def remove_edge(self, u: int, v: int) -> "Graph":
        return Graph(self.n, self.edges - {_pair(u, v)})

    def add_vertex(self, neighbours: Iterable[int] = ()) -> "Graph":
        """New vertex labelled n joined to ``neighbours``."""
        new = self.n
        return Graph(self.n + 1, self.edges | {(w, new) for w in neighbours})

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled 0..|S|-1 in ascending label order.

        Returns the subgraph and the list mapping new labels to old ones.
        """
        labels = sorted(set(vertices))
        index = {v: i for i, v in enumerate(labels)}
        sub = {(index[u], index[v]) for u, v in self.edges if u in index and v in index}
        return Graph(len(labels), frozenset(sub)), labels

    def edge_mask_count(self, mask: int) -> int:
        """Number of edges inside the vertex set encoded by a bitmask."""
        return sum(1 for u, v in self.edges if (mask >> u) & 1 and (mask >> v) & 1)

    @cached_property
    def adj_masks(self) -> tuple[int, ...]:
        out = []
        for nb in self.adj:
            m = 0
            for w in nb:
                m |= 1 << w
            out.append(m)
        return tuple(out)

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines += [f"{u} {v}" for u, v in self.sorted_edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows or len(rows[0]) != 2:
            raise ValueError("graph header must be 'n m'")
        n, m = int(rows[0][0]), int(rows[0][1])
        body = rows[1:]
        if len(body) != m:
            raise ValueError(f"header announces {m} edges, found {len(body)}")
        edges = set()
        for r in body:
            if len(r) != 2:
                raise ValueError(f"bad edge line: {' '.join(r)}")
            e = _pair(int(r[0]), int(r[1]))
            if e in edges:
                raise ValueError(f"duplicate edge {e}")
            edges.add(e)
        return cls(n, frozenset(edges))


def read_graph(path) -> Graph:
    with open(path) as fh:
        return Graph.from_text(fh.read())


def write_graph(g: Graph, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(g.to_text())


@dataclass(frozen=True)
class PeelTrace:
    """Result of peeling a graph down to its k-core.

    ``removed`` lists (vertex, degree at removal) in removal order and
    ``neighbours`` the matching neighbour sets at removal time.
    """

    k: int
    removed: tuple[tuple[int, int], ...]
    neighbours: tuple[frozenset, ...]
    survivors: frozenset

    @property
    def removal_degrees(self) -> list[int]:
        return [deg for _, deg in self.removed]

    @property
    def removal_order(self) -> list[int]:
        return [v for v, _ in self.removed]


def peel_to_core(g: Graph, k: int) -> PeelTrace:
    """Peel vertices of degree < k, always taking the lowest label first."""
    if k < 1:
        raise ValueError("k must be at least 1")
    deg = g.degrees()
    alive = [True] * g.n
    heap = [v for v in range(g.n) if deg[v] < k]
    heapq.heapify(heap)
    queued = set(heap)
    removed, nbrs = [], []
    while heap:
        v = heapq.heappop(heap)
        live_nb = frozenset(w for w in g.adj[v] if alive[w])
        removed.append((v, len(live_nb)))
        nbrs.append(live_nb)
        alive[v] = False
        for w in live_nb:
            deg[w] -= 1
            if deg[w] < k and w not in queued:
                queued.add(w)
                heapq.heappush(heap, w)
    survivors = frozenset(v for v in range(g.n) if alive[v])
    return PeelTrace(k, tuple(removed), tuple(nbrs), survivors)


def k_core(g: Graph, k: int) -> PeelTrace:
    """Maximal vertex set inducing minimum degree >= k (may be empty)."""
    return peel_to_core(g, k)


def cone(g: Graph) -> Graph:
    """Add a vertex labelled n adjacent to every existing vertex."""
    return g.add_vertex(range(g.n))


def _split_network(g: Graph) -> csr_matrix:
    # vertex v -> in-node 2v, out-node 2v+1; internal arc has capacity 1
    n = g.n
    big = n + 1
    rows, cols, caps = [], [], []
    for v in range(n):
        rows.append(2 * v); cols.append(2 * v + 1); caps.append(1)
    for u, v in g.edges:
        rows += [2 * u + 1, 2 * v + 1]
        cols += [2 * v, 2 * u]
        caps += [big, big]
    return csr_matrix(
        (np.array(caps, dtype=np.int32), (np.array(rows), np.array(cols))),
        shape=(2 * n, 2 * n),
    )


def local_connectivity(g: Graph, s: int, t: int, network: csr_matrix | None = None) -> int:
    """Max number of internally vertex-disjoint s-t paths (s, t non-adjacent)."""
    if g.has_edge(s, t):
        raise ValueError("local vertex connectivity needs non-adjacent endpoints")
    net = _split_network(g) if network is None else network
    return int(maximum_flow(net, 2 * s + 1, 2 * t, method="dinic").flow_value)


def is_k_connected(g: Graph, k: int) -> bool:
    """True iff g has more than k vertices and no vertex cut of size < k."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if g.n <= k:
        return False
    if g.min_degree() < k:
        return False
    degs = g.degrees()
    v = min(range(g.n), key=lambda x: (degs[x], x))
    net = _split_network(g)
    # A minimal separator S with |S| < k either misses v (then v and some
    # non-neighbour are split) or contains v (then two non-adjacent
    # neighbours of v are split).
    for w in range(g.n):
        if w != v and not g.has_edge(v, w):
            if local_connectivity(g, v, w, net) < k:
                return False
    for x, y in combinations(sorted(g.adj[v]), 2):
        if not g.has_edge(x, y) and local_connectivity(g, x, y, net) < k:
            return False
    return True


def vertex_connectivity(g: Graph) -> int:
    """Largest k with is_k_connected(g, k); 0 for disconnected or tiny graphs."""
    k = 0
    while is_k_connected(g, k + 1):
        k += 1
    return k


def _min_cut_vertices(g: Graph, s: int, t: int, net: csr_matrix) -> frozenset:
    res = maximum_flow(net, 2 * s + 1, 2 * t, method="dinic")
    flow = res.flow.toarray()
    cap = net.toarray()
    resid = cap - flow
    seen = {2 * s + 1}
    stack = [2 * s + 1]
    while stack:
        x = stack.pop()
        for y in np.flatnonzero(resid[x] > 0):
            y = int(y)
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(v for v in range(g.n) if 2 * v in seen and 2 * v + 1 not in seen)


def small_separator(g: Graph, k: int) -> frozenset | None:
    """A vertex set of size < k whose removal disconnects g, or None.

    Returns None also when g has at most k vertices (no separator needed to
    fail k-connectivity there).
    """
    if g.n <= k:
        return None
    degs = g.degrees()
    v = min(range(g.n), key=lambda x: (degs[x], x))
    if degs[v] < k:
        if g.n - 1 - degs[v] >= 1:
            return frozenset(g.adj[v])
        return None
    net = _split_network(g)
    pairs = [(v, w) for w in range(g.n) if w != v and not g.has_edge(v, w)]
    pairs += [(x, y) for x, y in combinations(sorted(g.adj[v]), 2) if not g.has_edge(x, y)]
    for a, b in pairs:
        if local_connectivity(g, a, b, net) < k:
            return _min_cut_vertices(g, a, b, net)
    return None


def is_disconnected_by(g: Graph, cut: Iterable[int]) -> bool:
    """True when removing ``cut`` leaves at least two components."""
    cut = set(cut)
    rest = [v for v in range(g.n) if v not in cut]
    if len(rest) < 2:
        return False
    seen = {rest[0]}
    stack = [rest[0]]
    while stack:
        x = stack.pop()
        for y in g.adj[x]:
            if y not in cut and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) < len(rest)
