"""Rank-d partial PSD matrices with known diagonal, and their completions.

Completions of a rank-d partial matrix A with underlying graph G are in
bijection with realisations of the cone G*o in dimension d where o sits at
the origin and vertex i sits at the i-th column of a factor P (B = P^T P).
After scaling each column to unit length the problem becomes spherical:
edge ij gets squared length 2 - 2 A_ij / sqrt(A_ii A_jj) and every spoke
oi gets length 1.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, cone
from .randgraph import sample_gnm
from .realisations import (
    LengthAssignment,
    TowerError,
    enumerate_realisations,
    parse_number,
    solve_base,
    tower_plan,
)
from .rng import Stream

RANK_TOL = 1e-6
AGREEMENT_TOL = 1e-8
DISTINCT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class PartialPSDMatrix:
    """Known diagonal plus known off-diagonal entries on the edges of a graph."""

    n: int
    d: int
    diag: tuple
    off: dict = field(default_factory=dict)
    field: str = "real"

    def __post_init__(self):
        if len(self.diag) != self.n:
            raise ValueError("need one diagonal entry per row")
        clean = {}
        for (i, j), val in self.off.items():
            if i == j or not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"bad off-diagonal index ({i}, {j})")
            clean[(min(i, j), max(i, j))] = val
        object.__setattr__(self, "off", clean)

    @property
    def graph(self) -> Graph:
        return Graph(self.n, frozenset(self.off))

    def entry(self, i: int, j: int):
        if i == j:
            return self.diag[i]
        return self.off[(min(i, j), max(i, j))]

    def known_counts(self) -> list[int]:
        cnt = [1] * self.n
        for i, j in self.off:
            cnt[i] += 1
            cnt[j] += 1
        return cnt

    def to_text(self) -> str:
        def fmt(x):
            if isinstance(x, complex):
                return f"{x.real!r}{x.imag:+.17g}i"
            return repr(float(x))
        lines = [f"{self.n} {self.d}"]
        lines += [fmt(x) for x in self.diag]
        lines += [f"{i} {j} {fmt(v)}" for (i, j), v in sorted(self.off.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PartialPSDMatrix":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        n, d = int(rows[0][0]), int(rows[0][1])
        diag = tuple(parse_number(r[0]) for r in rows[1: n + 1])
        off = {(int(r[0]), int(r[1])): parse_number(r[2]) for r in rows[n + 1:]}
        cplx = any(isinstance(x, complex) for x in list(diag) + list(off.values()))
        return cls(n, d, diag, off, "complex" if cplx else "real")

    def to_dict(self) -> dict:
        def enc(x):
            return [x.real, x.imag] if isinstance(x, complex) else float(x)
        return {"n": self.n, "d": self.d, "field": self.field,
                "diag": [enc(x) for x in self.diag],
                "off": [[i, j, enc(v)] for (i, j), v in sorted(self.off.items())]}


def sample_partial_psd(n: int, d: int, M: int, seed: int = 0) -> PartialPSDMatrix:
    """P has i.i.d. standard normal entries, B = P^T P, known entries on G(n, M)."""
    if not 1 <= d <= n:
        raise ValueError("need 1 <= d <= n")
    if not 0 <= M <= n * (n - 1) // 2:
        raise ValueError("M out of range")
    P = Stream(seed, stream=11).normal(d * n).reshape(d, n)
    B = P.T @ P
    g = sample_gnm(n, M, seed) if n >= 2 else Graph(n)
    A = PartialPSDMatrix(n, d, tuple(float(x) for x in np.diag(B)),
                         {(i, j): float(B[i, j]) for i, j in g.sorted_edges()})
    object.__setattr__(A, "_PartialPSDMatrix__factor", P)
    return A


def _hidden_gram(A: PartialPSDMatrix) -> np.ndarray | None:
    """Gram matrix of the sampler's hidden factor; for test oracles only."""
    P = getattr(A, "_PartialPSDMatrix__factor", None)
    return None if P is None else P.T @ P


def partial_core(A: PartialPSDMatrix, k: int) -> frozenset:
    """Rows left after repeatedly deleting a row with fewer than k known entries.

    Known entries include the diagonal, so the surviving rows index the
    (k-1)-core of the underlying graph.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    cnt = A.known_counts()
    rows_of = [[] for _ in range(A.n)]
    for i, j in A.off:
        rows_of[i].append(j)
        rows_of[j].append(i)
    alive = [True] * A.n
    heap = [i for i in range(A.n) if cnt[i] < k]
    heapq.heapify(heap)
    queued = set(heap)
    while heap:
        i = heapq.heappop(heap)
        alive[i] = False
        for j in rows_of[i]:
            if alive[j]:
                cnt[j] -= 1
                if cnt[j] < k and j not in queued:
                    queued.add(j)
                    heapq.heappush(heap, j)
    return frozenset(i for i in range(A.n) if alive[i])


def _sqrt(x):
    if isinstance(x, complex) or (isinstance(x, float) and x < 0):
        return np.sqrt(complex(x))
    return math.sqrt(x)


def normalize_to_sphere(A: PartialPSDMatrix) -> tuple[Graph, LengthAssignment]:
    """Squared spherical lengths 2 - 2 A_ij / sqrt(A_ii A_jj) on the underlying graph."""
    if any(x == 0 for x in A.diag):
        raise ValueError("normalisation needs non-zero diagonal entries")
    vals = {}
    cplx = A.field == "complex"
    for (i, j), a in A.off.items():
        val = 2 - 2 * a / _sqrt(A.diag[i] * A.diag[j])
        cplx |= isinstance(val, complex)
        vals[(i, j)] = val
    fld = "complex" if cplx else "real"
    if cplx:
        vals = {e: complex(v) for e, v in vals.items()}
    return A.graph, LengthAssignment(vals, fld)


def predicted_completions(A: PartialPSDMatrix, d: int | None = None):
    """2^(n - |A(d+1)|); infinite when some row has fewer than d known entries."""
    d = A.d if d is None else d
    if min(A.known_counts(), default=d) < d:
        return math.inf
    return 2 ** (A.n - len(partial_core(A, d + 1)))


@dataclass
class CompletionSet:
    status: str  # ok | inconclusive
    completions: list[np.ndarray]
    reason: str = ""

    def __len__(self) -> int:
        return len(self.completions)


def check_completion(A: PartialPSDMatrix, B: np.ndarray, d: int,
                     agreement_tol: float = AGREEMENT_TOL, rank_tol: float = RANK_TOL) -> bool:
    """B matches every known entry and has (d+1)-th singular value below rank_tol relative."""
    for i in range(A.n):
        if abs(B[i, i] - A.diag[i]) > agreement_tol * max(1.0, abs(A.diag[i])):
            return False
    for (i, j), a in A.off.items():
        if abs(B[i, j] - a) > agreement_tol * max(1.0, abs(a)):
            return False
    sv = np.linalg.svd(B, compute_uv=False)
    return len(sv) <= d or sv[d] <= rank_tol * max(sv[0], 1e-300)


def enumerate_completions(A: PartialPSDMatrix, d: int | None = None, seed: int = 0,
                          field: str = "complex") -> CompletionSet:
    """Enumerate rank-d completions through the spherical cone correspondence."""
    d = A.d if d is None else d
    n = A.n
    if min(A.known_counts(), default=d) < d:
        return CompletionSet("inconclusive", [], "a row has fewer than d known entries")
    g, lengths = normalize_to_sphere(A)
    h = cone(g)
    o = n
    for i in range(n):
        lengths[(i, o)] = 1.0
    try:
        plan = tower_plan(h, d)
    except TowerError as exc:
        return CompletionSet("inconclusive", [], str(exc))
    base = solve_base(h, d, lengths, plan.base, seed)
    sols = enumerate_realisations(h, d, lengths, base, field, seed, plan)
    scale = np.array([_sqrt(x) for x in A.diag])
    out: list[np.ndarray] = []
    for X in sols.solutions:
        Q = X[:n] - X[o]
        B = (Q @ Q.T) * np.outer(scale, scale)
        if field == "real":
            B = np.real(B)
        if any(np.max(np.abs(B - C)) <= DISTINCT_TOL * max(1.0, np.max(np.abs(C))) for C in out):
            continue
        out.append(B)
    return CompletionSet("ok", out)
