"""Enumerating equivalent realisations of 0-extension towers.

A tower is a globally rigid base (its realisation is taken as known) plus
vertices added one at a time, each joined to d already placed vertices.
Every added vertex sits on the intersection of d spheres, which after
subtracting the first sphere equation is a line meeting one sphere: two
roots over C, zero or two over R.  Leaves of the branch tree are refined by
Newton's method on the full edge system, pinned to a canonical frame and
deduplicated.

Squared lengths use the bilinear form sum(x_i**2) in both fields, so over
C the "length" of (0, i) is -1.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import least_squares

from .graph import Graph, peel_to_core
from .rng import Stream

log = logging.getLogger(__name__)

DEGENERACY_TOL = 1e-10
SEPARATION_TOL = 1e-6
RESIDUAL_TOL = 1e-8
BRANCH_TOL = 1e-6


class GenericityError(RuntimeError):
    """A near-degenerate configuration was hit; reseed and try again."""


class TowerError(ValueError):
    """The graph is not a 0-extension tower over a usable base."""


@dataclass(frozen=True)
class Framework:
    graph: Graph
    d: int
    coords: np.ndarray
    field: str = "real"

    def __post_init__(self):
        if self.coords.shape != (self.graph.n, self.d):
            raise ValueError("coords must have shape (n, d)")

    def transformed(self, Q: np.ndarray, shift: np.ndarray) -> "Framework":
        return Framework(self.graph, self.d, self.coords @ Q.T + shift, self.field)


def sample_framework(g: Graph, d: int, field: str = "real", seed: int = 0, box: float = 1.0) -> Framework:
    """Coordinates uniform in [-box, box]^d; complex fields draw real and imaginary parts independently."""
    s = Stream(seed)
    if field == "real":
        coords = s.uniform(g.n * d, -box, box).reshape(g.n, d)
    elif field == "complex":
        re = s.uniform(g.n * d, -box, box)
        im = s.uniform(g.n * d, -box, box)
        coords = (re + 1j * im).reshape(g.n, d)
    else:
        raise ValueError(f"unknown field {field!r}")
    return Framework(g, d, coords, field)


def sqnorm(x: np.ndarray):
    return np.sum(x * x, axis=-1)


def _floor(target: np.ndarray) -> np.ndarray:
    """Denominators for relative residuals; zero lengths fall back to the mean scale."""
    a = np.abs(target)
    ref = float(np.mean(a)) if a.size else 1.0
    return np.maximum(a, ref if ref > 0 else 1.0)


class LengthAssignment(dict):
    """Squared edge lengths keyed by sorted vertex pairs."""

    def __init__(self, values: Mapping | None = None, field: str = "real"):
        super().__init__()
        self.field = field
        for (u, v), val in (values or {}).items():
            self[(min(u, v), max(u, v))] = val

    def of(self, u: int, v: int):
        return self[(u, v) if u < v else (v, u)]

    def to_text(self) -> str:
        def fmt(x):
            if isinstance(x, complex) or np.iscomplexobj(x):
                x = complex(x)
                return f"{x.real!r}{x.imag:+.17g}i"
            return repr(float(x))
        return "".join(f"{u} {v} {fmt(val)}\n" for (u, v), val in sorted(self.items()))

    @classmethod
    def from_text(cls, text: str) -> "LengthAssignment":
        vals, cplx = {}, False
        for ln in text.splitlines():
            parts = ln.split()
            if not parts or parts[0].startswith("#"):
                continue
            u, v, s = parts
            x = parse_number(s)
            cplx |= isinstance(x, complex)
            vals[(int(u), int(v))] = x
        return cls(vals, "complex" if cplx else "real")


def parse_number(s: str):
    """Parse '1.5', '-2', '1+2i' or '3-0.5i'."""
    s = s.strip()
    if s.endswith("i") or s.endswith("j"):
        return complex(s[:-1].replace(" ", "") + "j")
    return float(s)


def edge_lengths(f: Framework) -> LengthAssignment:
    out = LengthAssignment(field=f.field)
    for u, v in f.graph.sorted_edges():
        out[(u, v)] = complex(sqnorm(f.coords[u] - f.coords[v])) if f.field == "complex" \
            else float(sqnorm(f.coords[u] - f.coords[v]))
    return out


@dataclass(frozen=True)
class TowerPlan:
    """Base vertex list plus (vertex, earlier neighbours) steps in insertion order."""

    base: tuple[int, ...]
    steps: tuple[tuple[int, tuple[int, ...]], ...]

    def has_surplus(self, d: int) -> bool:
        return any(len(nb) > d for _, nb in self.steps)


def tower_plan(g: Graph, d: int) -> TowerPlan:
    """Reverse of the lowest-label-first peel at k = d+1.

    The base is the (d+1)-core when it is non-empty; otherwise the first
    d+1 vertices of the reversed peel, which must form a clique.
    """
    trace = peel_to_core(g, d + 1)
    rev = list(zip(reversed(trace.removal_order), reversed(trace.neighbours)))
    if trace.survivors:
        base = tuple(sorted(trace.survivors))
        steps = rev
    else:
        head, steps = rev[: d + 1], rev[d + 1:]
        base = tuple(v for v, _ in head)
        if len(base) < d + 1:
            raise TowerError(f"fewer than {d + 1} vertices")
        for v, w in combinations(base, 2):
            if not g.has_edge(v, w):
                raise TowerError(f"base {sorted(base)} is not a clique; graph is not a tower over K_{d + 1}")
    out = []
    for v, nb in steps:
        if len(nb) != d:
            raise TowerError(f"vertex {v} is attached to {len(nb)} earlier vertices, not {d}")
        out.append((v, tuple(sorted(nb))))
    return TowerPlan(base, tuple(out))


def plan_from_ordering(g: Graph, order: Sequence[int], base_size: int) -> TowerPlan:
    """Plan from an explicit vertex order; steps may carry more than d neighbours."""
    pos = {v: i for i, v in enumerate(order)}
    steps = []
    for i in range(base_size, len(order)):
        v = order[i]
        steps.append((v, tuple(sorted((w for w in g.adj[v] if pos[w] < i), key=pos.get))))
    return TowerPlan(tuple(order[:base_size]), tuple(steps))


@dataclass
class SolutionSet:
    solutions: list[np.ndarray]
    field: str
    near_degenerate: list[bool] = field(default_factory=list)
    certified: bool = True
    assumptions: tuple[str, ...] = ("base realisation is the unique one up to congruence",)

    def __len__(self) -> int:
        return len(self.solutions)

    def to_dict(self) -> dict:
        def row(x):
            if self.field == "complex":
                return [[complex(c).real, complex(c).imag] for c in x]
            return [float(c) for c in x]
        return {
            "field": self.field,
            "count": len(self.solutions),
            "certified": self.certified,
            "assumptions": list(self.assumptions),
            "near_degenerate": self.near_degenerate,
            "solutions": [[row(p) for p in sol] for sol in self.solutions],
        }


def _null_vector(A: np.ndarray) -> np.ndarray:
    """Generalised cross product of the d-1 rows of A (bilinear, no conjugation)."""
    d = A.shape[1]
    u = np.empty(d, dtype=A.dtype)
    for j in range(d):
        minor = np.delete(A, j, axis=1)
        u[j] = (-1) ** j * np.linalg.det(minor) if d > 1 else 1.0
    return u


def sphere_intersection(centres: np.ndarray, radii2: np.ndarray, field: str,
                        degeneracy_tol: float = DEGENERACY_TOL) -> tuple[list[np.ndarray], float]:
    """Points x with |x - c_i|^2 = r_i for d centres in F^d.

    Returns the roots (two over C, zero or two over R) and the relative
    discriminant size used for the degeneracy decision.
    """
    d = centres.shape[1]
    c1, r1 = centres[0], radii2[0]
    if d == 1:
        x0 = c1.copy()
        u = np.ones(1, dtype=centres.dtype)
    else:
        A = 2.0 * (centres[1:] - c1)
        b = sqnorm(centres[1:]) - sqnorm(c1) - radii2[1:] + r1
        x0 = np.linalg.lstsq(A, b, rcond=None)[0]
        u = _null_vector(A)
        u = u / np.sqrt(np.sum(np.abs(u) ** 2))
    w = x0 - c1
    qa = np.sum(u * u)
    qb = 2.0 * np.sum(u * w)
    qc = np.sum(w * w) - r1
    disc = qb * qb - 4.0 * qa * qc
    scale = max(abs(qb) ** 2, abs(4.0 * qa * qc), 1e-300)
    rel = abs(disc) / scale
    if rel < degeneracy_tol or abs(qa) < degeneracy_tol:
        raise GenericityError(f"near-degenerate sphere intersection (relative discriminant {rel:.2e})")
    if field == "real":
        disc = float(np.real(disc))
        if disc < 0:
            return [], rel
        sq = np.sqrt(disc)
        qa, qb = float(np.real(qa)), float(np.real(qb))
    else:
        sq = np.sqrt(complex(disc))
    roots = [(-qb + sq) / (2 * qa), (-qb - sq) / (2 * qa)]
    return [x0 + s * u for s in roots], rel


def canonical_pin(coords: np.ndarray, base: Sequence[int]) -> np.ndarray:
    """Move base[0] to the origin and rotate the next spanning base vertices into lower-triangular position.

    Base vertices that add nothing to the span of earlier ones are skipped.
    Over R the diagonal entries are made positive, which also fixes the
    reflection.  Over C the frame is built by Gram-Schmidt for the bilinear
    form with principal square roots.
    """
    d = coords.shape[1]
    X = coords - coords[base[0]]
    span = max(float(np.max(np.abs(X[list(base)]))), 1e-300)
    frame: list[np.ndarray] = []
    for w in base[1:]:
        if len(frame) == d:
            break
        v = X[w].astype(X.dtype, copy=True)
        for q in frame:
            v = v - np.sum(v * q) * q
        nrm2 = np.sum(v * v)
        nrm = np.sqrt(nrm2 if np.iscomplexobj(X) else float(np.real(nrm2)))
        if abs(nrm) < 1e-9 * span:
            continue
        frame.append(v / nrm)
    if len(frame) < d:
        raise GenericityError("base vertices do not span the ambient space")
    Q = np.array(frame)
    return X @ Q.T


def _refine(coords: np.ndarray, free: list[int], edges: list[tuple[int, int]],
            lengths: LengthAssignment, d: int, iters: int = 8) -> np.ndarray:
    """Gauss-Newton on the edge equations, moving only the free vertices."""
    if not free:
        return coords
    col = {v: i for i, v in enumerate(free)}
    target = np.array([lengths.of(u, v) for u, v in edges])
    X = coords.copy()
    for _ in range(iters):
        diff = np.array([X[u] - X[v] for u, v in edges])
        f = sqnorm(diff) - target
        if np.max(np.abs(f) / _floor(target)) < 1e-15:
            break
        J = np.zeros((len(edges), d * len(free)), dtype=X.dtype)
        for row, (u, v) in enumerate(edges):
            if u in col:
                J[row, d * col[u]: d * col[u] + d] = 2 * diff[row]
            if v in col:
                J[row, d * col[v]: d * col[v] + d] = -2 * diff[row]
        step = np.linalg.lstsq(J, -f, rcond=None)[0]
        for v, i in col.items():
            X[v] = X[v] + step[d * i: d * i + d]
    return X


def relative_residuals(coords: np.ndarray, g: Graph, lengths: LengthAssignment) -> np.ndarray:
    edges = g.sorted_edges()
    if not edges:
        return np.zeros(0)
    target = np.array([lengths.of(u, v) for u, v in edges])
    got = np.array([sqnorm(coords[u] - coords[v]) for u, v in edges])
    return np.abs(got - target) / _floor(target)


def _clique_base(n: int, d: int, lengths: LengthAssignment, vertices: list[int]) -> np.ndarray:
    """Classical multidimensional scaling for a base that is a clique on at most d+1 vertices."""
    r = len(vertices)
    v0 = vertices[0]
    G = np.zeros((r - 1, r - 1), dtype=complex)
    for a in range(1, r):
        for b in range(1, r):
            la = lengths.of(v0, vertices[a])
            lb = lengths.of(v0, vertices[b])
            lab = 0.0 if a == b else lengths.of(vertices[a], vertices[b])
            G[a - 1, b - 1] = (la + lb - lab) / 2
    out = np.zeros((n, d), dtype=complex)
    if r > 1:
        w, U = np.linalg.eigh(G) if np.allclose(G.imag, 0) else np.linalg.eig(G)
        coords = U * np.sqrt(w.astype(complex))
        out[vertices[1:], : r - 1] = coords
    if np.allclose(out.imag, 0):
        return out.real
    return out


def solve_base(g: Graph, d: int, lengths: LengthAssignment, vertices: Sequence[int],
               seed: int = 0, attempts: int = 200, tol: float = 1e-10) -> np.ndarray:
    """Real realisation of the induced base from its edge lengths (multi-start least squares).

    Returns an (n, d) array with only the base rows meaningful.
    """
    vertices = list(vertices)
    idx = {v: i for i, v in enumerate(vertices)}
    edges = [(u, v) for u, v in g.sorted_edges() if u in idx and v in idx]
    target = np.array([float(np.real(lengths.of(u, v))) for u, v in edges])
    scale = np.sqrt(max(np.max(np.abs(target)), 1e-12)) if len(target) else 1.0
    denom = _floor(target)
    ii = np.array([idx[u] for u, _ in edges])
    jj = np.array([idx[v] for _, v in edges])

    def resid(x):
        P = x.reshape(len(vertices), d)
        return (sqnorm(P[ii] - P[jj]) - target) / denom

    if len(edges) == len(vertices) * (len(vertices) - 1) // 2 and len(vertices) <= d + 1:
        return _clique_base(g.n, d, lengths, vertices)
    s = Stream(seed, stream=77)
    method = "lm" if len(edges) >= len(vertices) * d else "trf"
    for _ in range(attempts):
        x0 = s.uniform(len(vertices) * d, -scale, scale)
        sol = least_squares(resid, x0, method=method, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=4000)
        if len(edges) == 0 or np.max(np.abs(resid(sol.x))) < tol:
            out = np.zeros((g.n, d))
            out[vertices] = sol.x.reshape(len(vertices), d)
            return out
    raise GenericityError("could not realise the base from the given lengths")


def enumerate_realisations(g: Graph, d: int, lengths: LengthAssignment, base_coords: np.ndarray | None = None,
                           field: str = "complex", seed: int = 0, plan: TowerPlan | None = None,
                           degeneracy_tol: float = DEGENERACY_TOL, separation_tol: float = SEPARATION_TOL,
                           residual_tol: float = RESIDUAL_TOL) -> SolutionSet:
    """All non-congruent realisations with the given squared lengths.

    ``base_coords`` is an (n, d) array whose base rows hold the realisation
    of the base; when omitted the base is solved from ``lengths``.
    """
    if field not in ("real", "complex"):
        raise ValueError(f"unknown field {field!r}")
    plan = plan or tower_plan(g, d)
    if len(plan.base) < d + 1:
        raise TowerError(f"base has {len(plan.base)} < d+1 vertices")
    if base_coords is None:
        base_coords = solve_base(g, d, lengths, plan.base, seed)
    dtype = complex if field == "complex" else float
    start = np.zeros((g.n, d), dtype=dtype)
    start[list(plan.base)] = np.asarray(base_coords)[list(plan.base)]

    free = [v for v, _ in plan.steps]
    free_set = set(free)
    refine_edges = [(u, v) for u, v in g.sorted_edges() if u in free_set or v in free_set]
    surplus = plan.has_surplus(d)

    leaves: list[tuple[np.ndarray, float]] = []

    def branch(i: int, X: np.ndarray, worst: float):
        if i == len(plan.steps):
            leaves.append((X, worst))
            return
        v, nbrs = plan.steps[i]
        use, extra = nbrs[:d], nbrs[d:]
        centres = X[list(use)]
        radii = np.array([lengths.of(v, w) for w in use], dtype=dtype)
        roots, rel = sphere_intersection(centres, radii, field, degeneracy_tol)
        for x in roots:
            if extra:
                got = np.array([sqnorm(x - X[w]) for w in extra])
                want = np.array([lengths.of(v, w) for w in extra])
                if np.max(np.abs(got - want) / np.maximum(np.abs(want), 1e-12)) > BRANCH_TOL:
                    continue
            Y = X.copy()
            Y[v] = x
            branch(i + 1, Y, min(worst, rel))

    branch(0, start, np.inf)

    sols, flags = [], []
    for X, worst in leaves:
        X = _refine(X, free, refine_edges, lengths, d)
        res = relative_residuals(X, g, lengths)
        if res.size and res.max() >= residual_tol:
            log.debug("dropping leaf with residual %.2e", res.max())
            continue
        pinned = canonical_pin(X, plan.base)
        if field == "real":
            pinned = np.real(pinned)
        scale = max(1.0, float(np.max(np.abs(pinned))))
        if any(np.max(np.abs(pinned - s)) <= separation_tol * scale for s in sols):
            continue
        sols.append(pinned)
        flags.append(bool(worst < 1e-6))
    out = SolutionSet(sols, field, flags, certified=not surplus)
    if surplus:
        out.assumptions = out.assumptions + ("surplus edges filtered; count is exploratory",)
    return out


def count_real_and_complex(g: Graph, d: int, seed: int = 0, retries: int = 5,
                           plan: TowerPlan | None = None) -> tuple[int, int]:
    """Sample a real framework and count equivalent realisations over R and over C."""
    plan = plan or tower_plan(g, d)
    last: Exception | None = None
    for attempt in range(retries + 1):
        f = sample_framework(g, d, "real", seed=(seed + 7919 * attempt))
        lengths = edge_lengths(f)
        try:
            real = len(enumerate_realisations(g, d, lengths, f.coords, "real", plan=plan))
            cplx = len(enumerate_realisations(g, d, lengths, f.coords, "complex", plan=plan))
        except GenericityError as exc:
            last = exc
            log.info("reseeding after genericity failure: %s", exc)
            continue
        if not 1 <= real <= cplx:
            raise AssertionError(f"count sandwich violated: real={real}, complex={cplx}")
        return real, cplx
    raise GenericityError(f"genericity failure persisted after {retries} reseeds: {last}")


def random_tower(d: int, m: int, seed: int = 0) -> tuple[Graph, TowerPlan]:
    """K_{d+1} followed by m 0-extensions onto uniformly chosen d-sets of placed vertices."""
    g = Graph.complete(d + 1)
    s = Stream(seed, stream=5)
    steps = []
    for _ in range(m):
        perm = s.permutation(g.n)
        nbrs = tuple(sorted(int(x) for x in perm[:d]))
        steps.append((g.n, nbrs))
        g = g.add_vertex(nbrs)
    return g, TowerPlan(tuple(range(d + 1)), tuple(steps))
