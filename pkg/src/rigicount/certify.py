"""Certificates for realisation counts of the form 2^(n - t).

A certificate never claims anything probabilistic about the input: it
checks, on the concrete graph, a chain of facts that together force
c_d(G) = r_d(G) = 2^(n - t), where t is the size of the (d+1)-core.

Deterministic route
    a construction ordering exists and validates; every vertex after the
    (d+1)-core has exactly d earlier neighbours; the d(d+1)-core is
    d(d+1)-connected (hence globally d-rigid); the (d+1)-core is
    (d+1)-connected (hence globally d-rigid, being spanned by 0-extensions
    of the d(d+1)-core).

Randomised route
    peeling to the (d+1)-core only removes vertices of degree exactly d,
    and the stress-matrix test accepts the (d+1)-core as globally d-rigid.

Either way the graph is a tower of d-dimensional 0-extensions over a
globally rigid core, and each 0-extension doubles both counts.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph, cone, is_k_connected, k_core, peel_to_core
from .ordering import ConstructionOrdering, construct_ordering, ordering_violations
from .rigidity import rigidity_report

CERTIFIED_DETERMINISTIC = "certified-deterministic"
CERTIFIED_RANDOMIZED = "certified-randomized"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"

EXIT_CODES = {CERTIFIED_DETERMINISTIC: 0, CERTIFIED_RANDOMIZED: 0, INCONCLUSIVE: 2, REFUTED: 3}


@dataclass(frozen=True)
class Check:
    name: str
    route: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "route": self.route, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class CountCertificate:
    status: str
    d: int
    n: int
    t: int
    evidence: tuple[Check, ...] = ()
    failed: str | None = None
    kind: str = "euclidean"
    ordering: ConstructionOrdering | None = field(default=None, compare=False)

    @property
    def certified(self) -> bool:
        return self.status in (CERTIFIED_DETERMINISTIC, CERTIFIED_RANDOMIZED)

    @property
    def exponent(self) -> int | None:
        return self.n - self.t if self.certified else None

    @property
    def count(self) -> int | None:
        return 2 ** self.exponent if self.certified else None

    def passed(self, name: str) -> bool:
        return any(c.name == name and c.passed for c in self.evidence)

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "status": self.status,
            "d": self.d,
            "n": self.n,
            "t": self.t,
            "exponent": self.exponent,
            "count": str(self.count) if self.certified else None,
            "evidence": [c.to_dict() for c in self.evidence],
        }
        if self.failed:
            out["failed"] = self.failed
        return out


def core_size(g: Graph, k: int) -> int:
    return len(k_core(g, k).survivors)


def predicted_count(g: Graph, d: int) -> int:
    """2^(n - t) with t the size of the (d+1)-core; unconditional."""
    return 2 ** (g.n - core_size(g, d + 1))


def _deterministic_route(g: Graph, d: int) -> tuple[list[Check], ConstructionOrdering | None]:
    route = "deterministic"
    k = d * (d + 1)
    co = construct_ordering(g, d)
    if not isinstance(co, ConstructionOrdering):
        return [Check("ordering-exists", route, False, co.reason)], None
    problems = [p for p in ordering_violations(g, co) if not p.startswith("suffix")]
    checks = [Check("ordering-exists", route, not problems, "; ".join(problems) or f"s={co.s}, t={co.t}")]
    if problems:
        return checks, co
    suffix = [p for p in ordering_violations(g, co) if p.startswith("suffix")]
    checks.append(Check("suffix-exact-d", route, not suffix, "; ".join(suffix) or f"{g.n - co.t} suffix vertices"))
    if suffix:
        return checks, co
    kcore, _ = g.induced(co.order[: co.s])
    ok = is_k_connected(kcore, k)
    checks.append(Check("core-k-connected", route, ok, f"k={k}, |core|={co.s}"))
    if not ok:
        return checks, co
    dcore, _ = g.induced(co.order[: co.t])
    ok = is_k_connected(dcore, d + 1)
    checks.append(Check("core-(d+1)-connected", route, ok, f"|core|={co.t}"))
    return checks, co


def _randomized_route(g: Graph, d: int, seed: int) -> list[Check]:
    route = "randomized"
    trace = peel_to_core(g, d + 1)
    core = trace.survivors
    if len(core) < d + 2:
        return [Check("ordering-exists", route, False, f"{d + 1}-core is empty")]
    checks = [Check("ordering-exists", route, True, "reverse peel order over the (d+1)-core")]
    off = [(v, deg) for v, deg in trace.removed if deg != d]
    detail = (f"vertex {off[0][0]} removed at degree {off[0][1]}" if off
              else f"{len(trace.removed)} removals at degree {d}")
    checks.append(Check("suffix-exact-d", route, not off, detail))
    if off:
        return checks
    sub, _ = g.induced(core)
    rep = rigidity_report(sub, d, seed)
    checks.append(Check("core-globally-rigid-randomized", route, rep.globally_rigid,
                        f"rank={rep.rank}, stress_rank={rep.stress_rank}, trials={rep.trials}"))
    return checks


def certify_count(g: Graph, d: int, seed: int = 0) -> CountCertificate:
    if d < 1:
        raise ValueError("d must be at least 1")
    t = core_size(g, d + 1)
    complete = g.m == g.n * (g.n - 1) // 2
    if g.n <= d + 1:
        status = INCONCLUSIVE if complete else REFUTED
        chk = Check("size", "precondition", False,
                    "complete graph on at most d+1 vertices: core formula does not apply" if complete
                    else "non-complete graph on at most d+1 vertices is flexible")
        return CountCertificate(status, d, g.n, t, (chk,), "size")
    delta = g.min_degree()
    if delta < d:
        chk = Check("min-degree", "precondition", False, f"min degree {delta} < d; infinitely many realisations")
        return CountCertificate(REFUTED, d, g.n, t, (chk,), "min-degree")
    evidence = [Check("min-degree", "precondition", True, f"min degree {delta}")]

    det, co = _deterministic_route(g, d)
    evidence += det
    if all(c.passed for c in det) and len(det) == 4:
        return CountCertificate(CERTIFIED_DETERMINISTIC, d, g.n, t, tuple(evidence), None, ordering=co)
    rnd = _randomized_route(g, d, seed)
    evidence += rnd
    if all(c.passed for c in rnd) and len(rnd) == 3:
        return CountCertificate(CERTIFIED_RANDOMIZED, d, g.n, t, tuple(evidence), None, ordering=co)
    first = next(c.name for c in evidence if not c.passed)
    return CountCertificate(INCONCLUSIVE, d, g.n, t, tuple(evidence), first, ordering=co)


def spherical_count(g: Graph, d: int, seed: int = 0) -> CountCertificate:
    """Certificate for the spherical count on S^d, delegated to the cone at d+1."""
    t = core_size(g, d + 1)
    cert = certify_count(cone(g), d + 1, seed)
    evidence = list(cert.evidence)
    status, failed = cert.status, cert.failed
    if cert.certified:
        agree = cert.exponent == g.n - t
        evidence.append(Check("cone-exponent-agrees", "spherical", agree,
                              f"cone exponent {cert.exponent}, graph exponent {g.n - t}"))
        if not agree:
            status, failed = INCONCLUSIVE, "cone-exponent-agrees"
    return CountCertificate(status, d, g.n, t, tuple(evidence), failed, kind="spherical")
