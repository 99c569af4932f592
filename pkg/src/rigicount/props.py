"""Literal finite-n checkers for the random-graph properties used in the proofs.

All thresholds use the natural logarithm and are recorded numerically in the
report, so a verdict can be audited against the evaluated bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, is_disconnected_by, is_k_connected, k_core, small_separator
from .ordering import BudgetError
from .rng import Stream

HOLDS = "holds"
FAILS = "fails"
NONE_FOUND = "no-counterexample-found"
VACUOUS = "vacuously holds"

EXACT_MAX_N = 20
SMALL_SET = 500
DENSE_RATIO = 1.25
_BLOCK = 1 << 16


@dataclass
class PropertyReport:
    name: str
    verdict: str
    witness: dict | None = None
    parameters: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.verdict == FAILS

    def to_dict(self) -> dict:
        return {"property": self.name, "verdict": self.verdict,
                "witness": self.witness, "parameters": self.parameters}


def adjacency_threshold(n: int) -> float:
    """n / ln(n)^6; infinite for n <= 1 where the bound is undefined."""
    if n <= 1:
        return math.inf
    return n / math.log(n) ** 6


def sparsity_threshold(n: int) -> float:
    """2n / ln(n)^6, the size bound of the second sparsity clause."""
    return 2 * adjacency_threshold(n)


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if (mask >> i) & 1]


def _mask(vs) -> int:
    m = 0
    for v in vs:
        m |= 1 << int(v)
    return m


def _nbhd(g: Graph, s1: int) -> int:
    nb = 0
    for v in _bits(s1):
        nb |= g.adj_masks[v]
    return nb


def _mask_blocks(n: int):
    total = 1 << n
    for lo in range(1, total, _BLOCK):
        yield np.arange(lo, min(total, lo + _BLOCK), dtype=np.int64)


def _check_exact_budget(g: Graph, name: str) -> None:
    if g.n > EXACT_MAX_N:
        raise BudgetError(f"exact {name} check needs n <= {EXACT_MAX_N}, got {g.n}")


# ---------------------------------------------------------------- adjacency

def adjacency_violation(g: Graph, s1, s2) -> bool:
    """True iff (s1, s2) is a qualifying pair of disjoint sets with no edge between them."""
    a, b = set(s1), set(s2)
    thr = adjacency_threshold(g.n)
    if a & b or not (thr <= len(a) <= len(b)):
        return False
    return not any(w in b for v in a for w in g.adj[v])


def check_adjacency(g: Graph, mode: str = "exact", samples: int = 10_000, seed: int = 0) -> PropertyReport:
    """Every disjoint pair with n/ln^6 n <= |S1| <= |S2| spans an edge.

    For a given S1 the hardest S2 is its whole non-neighbourhood, so it
    suffices to range over S1 (exactly, or by sampling).
    """
    n = g.n
    thr = adjacency_threshold(n)
    lo = max(1, math.ceil(thr)) if math.isfinite(thr) else n + 1
    params = {"n": n, "threshold": thr, "mode": mode, "min_size": lo}
    if lo > n // 2:
        return PropertyReport("adjacency", VACUOUS, None, params)
    full = (1 << n) - 1

    def witness(s1: int) -> dict:
        w = full & ~(s1 | _nbhd(g, s1))
        return {"S1": _bits(s1), "S2": _bits(w)}

    if mode == "exact":
        _check_exact_budget(g, "adjacency")
        adj = np.array(g.adj_masks, dtype=np.int64)
        for masks in _mask_blocks(n):
            size = np.bitwise_count(masks)
            nb = np.zeros_like(masks)
            for v in range(n):
                nb |= np.where((masks >> v) & 1, adj[v], 0)
            rest = np.bitwise_count(full & ~(masks | nb))
            bad = np.flatnonzero((size >= lo) & (rest >= size))
            if bad.size:
                return PropertyReport("adjacency", FAILS, witness(int(masks[bad[0]])), params)
        return PropertyReport("adjacency", HOLDS, None, params)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = Stream(seed, stream=21)
    params["samples"] = samples
    sizes = rng.integers(n // 2 - lo + 1, samples) + lo
    for r in sizes:
        perm = rng.permutation(n)
        s1 = _mask(perm[: int(r)])
        rest = full & ~(s1 | _nbhd(g, s1))
        if rest.bit_count() >= int(r):
            return PropertyReport("adjacency", FAILS, witness(s1), params)
    return PropertyReport("adjacency", NONE_FOUND, None, params)


# ----------------------------------------------------------------- sparsity

def sparsity_violation(g: Graph, s) -> str | None:
    """Which sparsity clause the set s breaks ("small-sets", "log-sets"), if any."""
    s = set(s)
    if not s:
        return None
    e = sum(1 for u, v in g.edges if u in s and v in s)
    if len(s) < SMALL_SET and e > len(s):
        return "small-sets"
    if len(s) <= sparsity_threshold(g.n) and e >= DENSE_RATIO * len(s):
        return "log-sets"
    return None


def _sparsity_params(n: int, mode: str) -> dict:
    thr = sparsity_threshold(n)
    return {"n": n, "mode": mode, "small_set_bound": SMALL_SET, "threshold": thr,
            "ratio": DENSE_RATIO,
            "clauses": {"small-sets": HOLDS, "log-sets": VACUOUS if thr < 1 else HOLDS}}


def _candidate_sets(g: Graph, seed: int, samples: int):
    # degeneracy peeling: every intermediate remainder is a dense candidate
    alive = set(range(g.n))
    deg = {v: g.degree(v) for v in alive}
    while alive:
        yield frozenset(alive)
        v = min(alive, key=lambda x: (deg[x], x))
        alive.remove(v)
        for w in g.adj[v]:
            if w in alive:
                deg[w] -= 1
    # closed neighbourhoods and radius-2 balls
    for v in range(g.n):
        ball = {v} | g.adj[v]
        yield frozenset(ball)
        yield frozenset(ball.union(*(g.adj[w] for w in ball)))
    # random connected growth, each prefix a candidate
    rng = Stream(seed, stream=22)
    starts = rng.integers(max(g.n, 1), samples)
    for s in starts:
        cur = {int(s)}
        frontier = set(g.adj[int(s)])
        while frontier and len(cur) < SMALL_SET:
            # greedy: add the frontier vertex with most edges into cur
            w = max(sorted(frontier), key=lambda x: len(g.adj[x] & cur))
            cur.add(w)
            frontier |= g.adj[w]
            frontier -= cur
            yield frozenset(cur)
            if len(cur) >= 40:
                break


def check_sparsity(g: Graph, mode: str = "exact", samples: int = 200, seed: int = 0) -> PropertyReport:
    """|E(S)| <= |S| for |S| < 500, and |E(S)| < 1.25|S| for |S| <= 2n/ln^6 n."""
    n = g.n
    params = _sparsity_params(n, mode)
    thr = params["threshold"]
    if mode == "exact":
        _check_exact_budget(g, "sparsity")
        adj = np.array(g.adj_masks, dtype=np.int64)
        for masks in _mask_blocks(n):
            size = np.bitwise_count(masks)
            twice = np.zeros_like(masks)
            for v in range(n):
                twice += ((masks >> v) & 1) * np.bitwise_count(adj[v] & masks)
            edges = twice // 2
            small = (size < SMALL_SET) & (edges > size)
            dense = (size <= thr) & (edges >= DENSE_RATIO * size)
            for clause, bad in (("small-sets", small), ("log-sets", dense)):
                idx = np.flatnonzero(bad)
                if idx.size:
                    params["clauses"][clause] = FAILS
                    return PropertyReport("sparsity", FAILS,
                                          {"S": _bits(int(masks[idx[0]])), "clause": clause}, params)
        return PropertyReport("sparsity", HOLDS, None, params)
    if mode not in ("heuristic", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    params["samples"] = samples
    for s in _candidate_sets(g, seed, samples):
        clause = sparsity_violation(g, s)
        if clause:
            params["clauses"][clause] = FAILS
            return PropertyReport("sparsity", FAILS, {"S": sorted(s), "clause": clause}, params)
    params["clauses"] = {c: (v if v == VACUOUS else NONE_FOUND) for c, v in params["clauses"].items()}
    return PropertyReport("sparsity", NONE_FOUND, None, params)


# --------------------------------------------------------------------- core

def core_report(g: Graph, k: int, eps: float | None = None) -> PropertyReport:
    """k-core size, exact k-connectivity, the 5n/9 bound and optionally the P_{k,eps} bound."""
    if k < 1:
        raise ValueError("k must be at least 1")
    n = g.n
    core = sorted(k_core(g, k).survivors)
    sub, labels = g.induced(core)
    connected = is_k_connected(sub, k)
    clauses = {"k-connected": connected, "five-ninths": len(core) >= 5 * n / 9}
    params = {"n": n, "k": k, "core_size": len(core), "five_ninths_bound": 5 * n / 9}
    if eps is not None:
        bound = n - n * math.exp(-math.log(n) ** eps) if n > 1 else float(n)
        params["eps"] = eps
        params["large_core_bound"] = bound
        clauses["large-core"] = len(core) >= bound
    params["clauses"] = clauses
    if all(clauses.values()):
        return PropertyReport("core", HOLDS, None, params)
    sep = None if connected else small_separator(sub, k)
    witness = {"core": core, "separator": None if sep is None else sorted(labels[v] for v in sep)}
    return PropertyReport("core", FAILS, witness, params)


def recheck(g: Graph, report: PropertyReport) -> bool:
    """Re-validate a "fails" witness against the raw property definition."""
    if report.verdict != FAILS or report.witness is None:
        return False
    w = report.witness
    if report.name == "adjacency":
        return adjacency_violation(g, w["S1"], w["S2"])
    if report.name == "sparsity":
        return sparsity_violation(g, w["S"]) is not None
    if report.name == "core":
        k = report.parameters["k"]
        if sorted(k_core(g, k).survivors) != w["core"]:
            return False
        p = report.parameters
        size_fail = (len(w["core"]) < p["five_ninths_bound"]
                     or len(w["core"]) < p.get("large_core_bound", -math.inf))
        if w["separator"] is None:
            return size_fail or len(w["core"]) <= k
        sub, labels = g.induced(w["core"])
        idx = {v: i for i, v in enumerate(labels)}
        return len(w["separator"]) < k and is_disconnected_by(sub, [idx[v] for v in w["separator"]])
    return False
