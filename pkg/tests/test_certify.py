from __future__ import annotations

from hypothesis import given, strategies as st

from conftest import graphs
from helpers import certified_small_instances
from rigicount.certify import (
    CERTIFIED_DETERMINISTIC,
    CERTIFIED_RANDOMIZED,
    EXIT_CODES,
    INCONCLUSIVE,
    REFUTED,
    certify_count,
    core_size,
    predicted_count,
    spherical_count,
)
from rigicount.graph import Graph, cone, k_core
from rigicount.randgraph import graph_at, min_degree_threshold, sample_edge_ordering, sample_gnm
from rigicount.realisations import count_real_and_complex


def k4_chain(length: int) -> Graph:
    g = Graph.complete(4).add_vertex([0, 1])
    for _ in range(length - 1):
        g = g.add_vertex([g.n - 2, g.n - 1])
    return g


def test_predicted_count_examples(fig1):
    assert predicted_count(Graph.complete(4).add_vertex([0, 1]), 2) == 2
    assert predicted_count(Graph.complete(5), 2) == 1
    assert predicted_count(fig1, 2) == 32


def test_big_exponents_are_exact():
    g = Graph.complete(4)
    for _ in range(300):
        g = g.add_vertex([g.n - 2, g.n - 1])
    assert predicted_count(g, 2) == 2**300


def test_k4_chain_certifies_randomized():
    cert = certify_count(k4_chain(3), 2, seed=1)
    assert cert.status == CERTIFIED_RANDOMIZED
    assert cert.exponent == 3 and cert.count == 8
    for name in ("ordering-exists", "suffix-exact-d", "core-globally-rigid-randomized"):
        assert cert.passed(name)


def test_fig1_inconclusive(fig1):
    cert = certify_count(fig1, 2)
    assert cert.status == INCONCLUSIVE and cert.exponent is None
    assert cert.failed == "ordering-exists"
    assert EXIT_CODES[cert.status] == 2


def test_complete_graph_deterministic():
    cert = certify_count(Graph.complete(7), 1)
    assert cert.status == CERTIFIED_DETERMINISTIC and cert.exponent == 0
    for name in ("ordering-exists", "suffix-exact-d", "core-k-connected", "core-(d+1)-connected"):
        assert cert.passed(name)


def test_refutations():
    cert = certify_count(Graph.path(5), 2)
    assert cert.status == REFUTED and cert.failed == "min-degree"
    assert certify_count(Graph.path(3), 2).status == REFUTED
    assert certify_count(Graph.complete(3), 2).status == INCONCLUSIVE
    assert EXIT_CODES[REFUTED] == 3


def test_surplus_suffix_is_not_certified():
    # a vertex attached to 3 vertices of K_4 at d=2 breaks pure doubling;
    # the graph is then K_5 minus an edge, which is its own 3-core
    g = Graph.complete(4).add_vertex([0, 1, 2])
    cert = certify_count(g, 2)
    assert cert.t == 5
    if cert.certified:
        assert cert.exponent == 0


@given(graphs(max_n=10), st.integers(1, 3), st.integers(0, 50))
def test_certificate_invariants(g, d, seed):
    cert = certify_count(g, d, seed)
    assert cert.t == core_size(g, d + 1)
    if cert.certified:
        assert cert.exponent == g.n - cert.t
        assert predicted_count(g, d) == 2**cert.exponent
    if cert.status == CERTIFIED_DETERMINISTIC:
        assert all(cert.passed(n) for n in ("ordering-exists", "suffix-exact-d",
                                            "core-k-connected", "core-(d+1)-connected"))
    if cert.status == CERTIFIED_RANDOMIZED:
        assert all(cert.passed(n) for n in ("ordering-exists", "suffix-exact-d",
                                            "core-globally-rigid-randomized"))
    if cert.status == INCONCLUSIVE:
        assert cert.failed is not None
        assert any(c.name == cert.failed and not c.passed for c in cert.evidence)
    if g.min_degree() < d and g.n > d + 1:
        assert cert.status == REFUTED


def test_certificates_match_enumeration():
    for g, d, cert in certified_small_instances(40):
        _, cplx = count_real_and_complex(g, d, seed=7)
        assert cplx == 2**cert.exponent


@given(graphs(min_n=4, max_n=10), st.integers(1, 2), st.data())
def test_edge_inside_core_never_raises_exponent(g, d, data):
    core = sorted(k_core(g, d + 1).survivors)
    missing = [(u, v) for i, u in enumerate(core) for v in core[i + 1:] if not g.has_edge(u, v)]
    if missing:
        u, v = data.draw(st.sampled_from(missing))
        assert g.n - core_size(g.add_edge(u, v), d + 1) <= g.n - core_size(g, d + 1)


def test_spherical_examples():
    assert spherical_count(Graph.complete(4), 1).exponent == 0
    tri = Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (0, 3)])
    cert = spherical_count(tri, 1)
    assert cert.exponent == 1 and cert.passed("cone-exponent-agrees") and cert.kind == "spherical"


def test_cone_coherence_sweep():
    for i in range(200):
        d = 1 + i % 2
        n = 6 + i % 15
        g = sample_gnm(n, min(n * (n - 1) // 2, int(1.6 * (d + 1) * n / 2)), 3000 + i)
        sph = spherical_count(g, d, seed=i)
        con = certify_count(cone(g), d + 1, seed=i)
        assert sph.status == con.status
        if con.certified:
            assert sph.exponent == con.exponent == g.n - core_size(g, d + 1)


def test_hitting_time_graphs_certify():
    certified = 0
    for seed in range(10):
        sigma = sample_edge_ordering(60, seed)
        g = graph_at(sigma, min_degree_threshold(sigma, 2))
        cert = certify_count(g, 2, seed)
        certified += cert.certified
        assert cert.status != REFUTED
    assert certified >= 7


def test_to_dict_shape():
    d = certify_count(k4_chain(2), 2).to_dict()
    assert d["status"] == CERTIFIED_RANDOMIZED and d["exponent"] == 2 and d["count"] == "4"
    assert {"name", "route", "passed", "detail"} <= set(d["evidence"][0])
