"""Erdős–Rényi sampling: the edge-ordering evolution G(n, M, sigma) and G(n, p)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb

import numpy as np

from .graph import Graph
from .rng import Stream


def edge_slots(n: int) -> list[tuple[int, int]]:
    """Unordered pairs of 0..n-1 in lexicographic order."""
    return list(combinations(range(n), 2))


@dataclass(frozen=True)
class EdgeOrdering:
    """Bijection from the C(n,2) vertex pairs (lexicographic slots) to 1..C(n,2)."""

    n: int
    rank: tuple[int, ...]

    def __post_init__(self):
        total = comb(self.n, 2)
        if len(self.rank) != total or sorted(self.rank) != list(range(1, total + 1)):
            raise ValueError("rank must be a bijection onto 1..C(n,2)")

    @cached_property
    def sequence(self) -> list[tuple[int, int]]:
        """Edges in the order they are added."""
        slots = edge_slots(self.n)
        out = [None] * len(slots)
        for slot, r in enumerate(self.rank):
            out[r - 1] = slots[slot]
        return out

    def rank_of(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        slot = u * (2 * self.n - u - 1) // 2 + (v - u - 1)
        return self.rank[slot]

    def to_text(self) -> str:
        lines = [str(self.n)]
        lines += [f"{u} {v} {r}" for (u, v), r in zip(edge_slots(self.n), self.rank)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "EdgeOrdering":
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        n = int(rows[0][0])
        index = {e: i for i, e in enumerate(edge_slots(n))}
        rank = [0] * len(index)
        for u, v, r in rows[1:]:
            u, v = int(u), int(v)
            rank[index[(min(u, v), max(u, v))]] = int(r)
        return cls(n, tuple(rank))


def sample_edge_ordering(n: int, seed: int) -> EdgeOrdering:
    if n < 2:
        raise ValueError("edge orderings need n >= 2")
    total = comb(n, 2)
    order = Stream(seed).permutation(total)
    rank = np.empty(total, dtype=np.int64)
    rank[order] = np.arange(1, total + 1)
    return EdgeOrdering(n, tuple(int(r) for r in rank))


def graph_at(sigma: EdgeOrdering, M: int) -> Graph:
    """Graph formed by the first M edges of the ordering."""
    total = comb(sigma.n, 2)
    if not 0 <= M <= total:
        raise ValueError(f"M must lie in 0..{total}")
    return Graph(sigma.n, frozenset(sigma.sequence[:M]))


def hitting_times(sigma: EdgeOrdering, max_d: int) -> list[int]:
    """[M_1, ..., M_max_d]: edge counts at which the minimum degree first reaches d."""
    n = sigma.n
    if not 1 <= max_d <= n - 1:
        raise ValueError("need 1 <= d <= n-1")
    deg = [0] * n
    out = []
    d_next = 1
    below = n  # vertices with degree < d_next
    for M, (u, v) in enumerate(sigma.sequence, start=1):
        for w in (u, v):
            if deg[w] == d_next - 1:
                below -= 1
            deg[w] += 1
        while below == 0 and d_next <= max_d:
            out.append(M)
            d_next += 1
            below = sum(1 for x in deg if x < d_next)
        if d_next > max_d:
            break
    return out


def min_degree_threshold(sigma: EdgeOrdering, d: int) -> int:
    """M_d(sigma) by replaying the ordering."""
    return hitting_times(sigma, d)[d - 1]


def sample_gnm(n: int, M: int, seed: int) -> Graph:
    return graph_at(sample_edge_ordering(n, seed), M)


def sample_gnp(n: int, p: float, seed: int) -> Graph:
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    slots = edge_slots(n)
    u = Stream(seed).uniform(len(slots))
    return Graph(n, frozenset(e for e, x in zip(slots, u) if x < p))
