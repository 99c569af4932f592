"""Randomised generic rigidity and global rigidity tests.

Both tests evaluate the rigidity matrix at uniformly random points of
GF(p)^d, p = 2**31 - 1, and compute ranks exactly.  A random evaluation
can only under-estimate a generic rank, so "rigid" and "globally rigid"
answers are never false positives; false negatives have probability at
most about (number of edges) / p per trial and are driven down by taking
the best of several trials.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import modp
from .graph import Graph
from .rng import Stream

DEFAULT_TRIALS = 3


def rigidity_matrix(g: Graph, coords: np.ndarray, p: int = modp.PRIME) -> np.ndarray:
    """|E| x dn matrix mod p; row vw holds p(v)-p(w) in v's block, negated in w's."""
    n, d = coords.shape
    edges = g.sorted_edges()
    R = np.zeros((len(edges), d * n), dtype=np.int64)
    for row, (u, v) in enumerate(edges):
        diff = (coords[u] - coords[v]) % p
        R[row, d * u: d * u + d] = diff
        R[row, d * v: d * v + d] = (-diff) % p
    return R


def _coords(n: int, d: int, seed: int, trial: int) -> np.ndarray:
    return Stream(seed, stream=trial + 1).field_elements(modp.PRIME, n * d).reshape(n, d)


def full_rank_target(n: int, d: int) -> int:
    """Rank of the rigidity matrix of a generically d-rigid graph on n vertices."""
    if n <= d + 1:
        return n * (n - 1) // 2
    return d * n - d * (d + 1) // 2


def rigidity_rank(g: Graph, d: int, seed: int = 0, trials: int = DEFAULT_TRIALS) -> int:
    if d < 1:
        raise ValueError("d must be at least 1")
    if g.m == 0:
        return 0
    target = min(g.m, full_rank_target(g.n, d))
    best = 0
    for trial in range(trials):
        best = max(best, modp.rank(rigidity_matrix(g, _coords(g.n, d, seed, trial))))
        if best == target:
            break
    return best


def is_generically_d_rigid(g: Graph, d: int, seed: int = 0, trials: int = DEFAULT_TRIALS) -> bool:
    if g.n <= d + 1:
        return g.m == g.n * (g.n - 1) // 2
    return rigidity_rank(g, d, seed, trials) == full_rank_target(g.n, d)


def stress_matrix(g: Graph, omega: np.ndarray, p: int = modp.PRIME) -> np.ndarray:
    n = g.n
    S = np.zeros((n, n), dtype=np.int64)
    for w, (u, v) in zip(omega, g.sorted_edges()):
        S[u, v] = (S[u, v] - w) % p
        S[v, u] = (S[v, u] - w) % p
        S[u, u] = (S[u, u] + w) % p
        S[v, v] = (S[v, v] + w) % p
    return S


@dataclass(frozen=True)
class RigidityReport:
    rigid: bool
    globally_rigid: bool
    rank: int
    stress_rank: int | None
    trials: int

    def to_dict(self) -> dict:
        return {"rigid": self.rigid, "global": self.globally_rigid, "rank": self.rank,
                "stress_rank": self.stress_rank, "trials": self.trials}


def rigidity_report(g: Graph, d: int, seed: int = 0, trials: int = DEFAULT_TRIALS) -> RigidityReport:
    """Rigidity rank plus the stress-matrix test for global rigidity."""
    if d < 1:
        raise ValueError("d must be at least 1")
    n = g.n
    complete = g.m == n * (n - 1) // 2
    if n <= d + 1:
        return RigidityReport(complete, complete, rigidity_rank(g, d, seed, trials), None, 0)
    target = full_rank_target(n, d)
    best_rank, best_stress, used = 0, 0, 0
    for trial in range(trials):
        used += 1
        R = rigidity_matrix(g, _coords(n, d, seed, trial))
        # left kernel of R = equilibrium stresses at this framework
        RT, pivots = modp.rref(R.T)
        r = len(pivots)
        best_rank = max(best_rank, r)
        if r == target:
            kernel = modp.nullspace_from_rref(RT, pivots)
            if kernel.shape[0] == 0:
                srank = 0
            else:
                coef = Stream(seed, stream=1000 + trial).field_elements(modp.PRIME, kernel.shape[0])
                omega = np.zeros(g.m, dtype=np.int64)
                for c, vec in zip(coef, kernel):
                    omega = (omega + (int(c) * vec) % modp.PRIME) % modp.PRIME
                srank = modp.rank(stress_matrix(g, omega))
            best_stress = max(best_stress, srank)
            if best_stress == n - d - 1:
                break
    rigid = best_rank == target
    return RigidityReport(rigid, rigid and best_stress == n - d - 1, best_rank,
                          best_stress if rigid else None, used)


def is_generically_globally_d_rigid(g: Graph, d: int, seed: int = 0,
                                    trials: int = DEFAULT_TRIALS) -> bool:
    return rigidity_report(g, d, seed, trials).globally_rigid
