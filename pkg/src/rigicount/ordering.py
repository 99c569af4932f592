"""Construction orderings and the d-neighbourly property.

A construction ordering lists the d(d+1)-core first, then the rest of the
(d+1)-core, then a suffix of vertices each joined to exactly d earlier
vertices.  It is built in two passes: a greedy extension of the core by
vertices with at least d placed neighbours, followed by a backwards
re-selection on the acyclic orientation that always takes a source of
smallest out-degree.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .graph import Graph, k_core
from .rng import Stream

EXACT_NEIGHBOURLY_MAX_N = 24


class BudgetError(ValueError):
    """Exact enumeration requested beyond its size budget."""


@dataclass(frozen=True)
class ConstructionOrdering:
    order: tuple[int, ...]
    s: int
    t: int
    d: int

    @property
    def k(self) -> int:
        return self.d * (self.d + 1)

    def to_dict(self) -> dict:
        return {"status": "ok", "order": list(self.order), "s": self.s, "t": self.t, "d": self.d}


@dataclass(frozen=True)
class OrderingFailure:
    """Pass 1 could not place every vertex.

    ``blocking`` is the unplaced remainder; when it has at most n/2
    vertices it witnesses a failure of the d-neighbourly property.
    """

    d: int
    reason: str
    blocking: frozenset = field(default_factory=frozenset)
    placed: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"status": "failure", "reason": self.reason, "d": self.d,
                "witness": sorted(self.blocking)}


def construct_ordering(g: Graph, d: int) -> Union[ConstructionOrdering, OrderingFailure]:
    if d < 1:
        raise ValueError("d must be at least 1")
    k = d * (d + 1)
    core = sorted(k_core(g, k).survivors)
    if not core:
        return OrderingFailure(d, f"{k}-core is empty", frozenset(range(g.n)))

    # pass 1: greedy extension, lowest eligible label first
    position = {v: i for i, v in enumerate(core)}
    placed = list(core)
    count = [0] * g.n
    heap: list[int] = []
    for v in core:
        for w in g.adj[v]:
            if w not in position:
                count[w] += 1
                if count[w] == d:
                    heapq.heappush(heap, w)
    while heap:
        v = heapq.heappop(heap)
        position[v] = len(placed)
        placed.append(v)
        for w in g.adj[v]:
            if w not in position:
                count[w] += 1
                if count[w] == d:
                    heapq.heappush(heap, w)
    if len(placed) < g.n:
        rest = frozenset(range(g.n)) - frozenset(placed)
        return OrderingFailure(d, "no unplaced vertex has d placed neighbours", rest, tuple(placed))

    # pass 2: orient later -> earlier; peel sources of least out-degree
    s = len(core)
    in_core = set(core)
    outdeg = [sum(1 for w in g.adj[v] if position[w] < position[v]) for v in range(g.n)]
    indeg = [g.degree(v) - outdeg[v] for v in range(g.n)]
    cand = [(outdeg[v], v) for v in range(g.n) if v not in in_core and indeg[v] == 0]
    heapq.heapify(cand)
    gone = set()
    picked: list[int] = []
    while cand:
        _, v = heapq.heappop(cand)
        picked.append(v)
        gone.add(v)
        for w in g.adj[v]:
            if w in gone or position[w] > position[v]:
                continue
            indeg[w] -= 1
            if indeg[w] == 0 and w not in in_core:
                heapq.heappush(cand, (outdeg[w], w))
    if len(picked) != g.n - s:
        raise AssertionError("orientation lost its sources")
    order = tuple(core) + tuple(reversed(picked))
    t = len(k_core(g, d + 1).survivors)
    return ConstructionOrdering(order, s, t, d)


def ordering_violations(g: Graph, co: ConstructionOrdering) -> list[str]:
    """Names of the ordering conditions that fail (empty when valid)."""
    bad = []
    if sorted(co.order) != list(range(g.n)):
        return ["order is not a permutation of the vertices"]
    if not 0 <= co.s <= co.t <= g.n:
        bad.append("split indices out of range")
        return bad
    if set(co.order[: co.s]) != set(k_core(g, co.k).survivors):
        bad.append("prefix s is not the k-core")
    if set(co.order[: co.t]) != set(k_core(g, co.d + 1).survivors):
        bad.append("prefix t is not the (d+1)-core")
    pos = {v: i for i, v in enumerate(co.order)}
    for i in range(co.s, g.n):
        v = co.order[i]
        earlier = sum(1 for w in g.adj[v] if pos[w] < i)
        if earlier < co.d:
            bad.append(f"vertex {v} at position {i + 1} has {earlier} < d earlier neighbours")
            break
    for i in range(co.t, g.n):
        v = co.order[i]
        earlier = sum(1 for w in g.adj[v] if pos[w] < i)
        if earlier != co.d:
            bad.append(f"suffix vertex {v} has {earlier} != d earlier neighbours")
            break
    return bad


def validate_ordering(g: Graph, co: ConstructionOrdering) -> bool:
    return not ordering_violations(g, co)


@dataclass(frozen=True)
class NeighbourlyResult:
    verdict: str  # holds | fails | no-counterexample-found
    witness: frozenset | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.verdict != "fails"


def _violates(g: Graph, d: int, B: frozenset) -> bool:
    return all(len(g.adj[v] - B) < d for v in B)


def _exact_neighbourly(g: Graph, d: int) -> NeighbourlyResult:
    n = g.n
    if n > EXACT_NEIGHBOURLY_MAX_N:
        raise BudgetError(f"exact neighbourly check limited to n <= {EXACT_NEIGHBOURLY_MAX_N}")
    half = n // 2
    full = (1 << n) - 1
    adj = np.array(g.adj_masks, dtype=np.uint64)
    chunk = 1 << 18
    checked = 0
    for start in range(1, full + 1, chunk):
        masks = np.arange(start, min(start + chunk, full + 1), dtype=np.uint64)
        size = np.bitwise_count(masks)
        masks = masks[(size >= 1) & (size <= half)]
        if masks.size == 0:
            continue
        checked += masks.size
        comp = ~masks & np.uint64(full)
        good = np.zeros(masks.size, dtype=bool)
        for v in range(n):
            inside = ((masks >> np.uint64(v)) & np.uint64(1)).astype(bool)
            outside = np.bitwise_count(adj[v] & comp)
            good |= inside & (outside >= d)
        bad = np.flatnonzero(~good)
        if bad.size:
            m = int(masks[bad[0]])
            return NeighbourlyResult("fails", frozenset(v for v in range(n) if m >> v & 1), checked)
    return NeighbourlyResult("holds", None, checked)


def _sampled_neighbourly(g: Graph, d: int, samples: int, seed: int) -> NeighbourlyResult:
    n = g.n
    half = n // 2
    cands: list[frozenset] = [frozenset([v]) for v in range(n)]
    attempt = construct_ordering(g, d)
    if isinstance(attempt, OrderingFailure):
        cands.append(attempt.blocking)
        prefix = list(attempt.placed)
    else:
        prefix = list(attempt.order)
    everything = frozenset(range(n))
    for i in range(len(prefix)):
        cands.append(everything - frozenset(prefix[: i + 1]))
    if half >= 1 and samples > 0:
        stream = Stream(seed)
        sizes = 1 + stream.integers(half, samples)
        for sz in sizes:
            perm = stream.permutation(n)
            cands.append(frozenset(int(x) for x in perm[: int(sz)]))
    checked = 0
    for B in cands:
        if 1 <= len(B) <= half:
            checked += 1
            if _violates(g, d, B):
                return NeighbourlyResult("fails", B, checked)
    return NeighbourlyResult("no-counterexample-found", None, checked)


def is_d_neighbourly(g: Graph, d: int, mode: str = "exact", samples: int = 1000,
                     seed: int = 0) -> NeighbourlyResult:
    """Check that every B with 1 <= |B| <= floor(n/2) has a vertex with d neighbours outside B."""
    if d < 1:
        raise ValueError("d must be at least 1")
    if mode == "exact":
        return _exact_neighbourly(g, d)
    if mode == "sampled":
        return _sampled_neighbourly(g, d, samples, seed)
    raise ValueError(f"unknown mode {mode!r}")
