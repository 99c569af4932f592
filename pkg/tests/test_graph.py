from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from oracles import brute_k_connected, brute_k_core, induced_min_degree
from rigicount.graph import (
    Graph,
    cone,
    is_disconnected_by,
    is_k_connected,
    k_core,
    peel_to_core,
    read_graph,
    small_separator,
    vertex_connectivity,
    write_graph,
)


def test_rejects_loops_and_bad_labels():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph(-1)


def test_pairs_are_normalised_and_deduplicated():
    g = Graph.from_edges(3, [(1, 0), (0, 1), (2, 1)])
    assert g.sorted_edges() == [(0, 1), (1, 2)]
    assert g.degrees() == [1, 2, 1]


@given(graphs(max_n=10))
def test_degree_matches_edge_set(g):
    for v in range(g.n):
        assert g.degree(v) == sum(1 for e in g.edges if v in e)


@given(graphs(max_n=10))
def test_text_round_trip(g):
    text = g.to_text()
    assert text.endswith("\n") and Graph.from_text(text) == g
    assert text.splitlines()[0] == f"{g.n} {g.m}"


def test_text_errors():
    with pytest.raises(ValueError):
        Graph.from_text("3 2\n0 1\n")
    with pytest.raises(ValueError):
        Graph.from_text("3 2\n0 1\n1 0\n")
    with pytest.raises(ValueError):
        Graph.from_text("")


def test_file_round_trip(tmp_path, fig1):
    p = tmp_path / "g.txt"
    write_graph(fig1, p)
    assert read_graph(p) == fig1
    assert p.read_bytes() == b"5 7\n0 1\n0 2\n0 3\n1 2\n1 3\n2 4\n3 4\n"


def test_k_core_examples(fig1):
    tr = k_core(Graph.complete(4), 3)
    assert tr.survivors == frozenset(range(4)) and tr.removed == ()
    assert k_core(fig1, 3).survivors == frozenset()
    assert k_core(Graph.path(4), 2).survivors == frozenset()


def test_fig1_peel_trace(fig1):
    # lowest label first among degree < 3: vertex 4 (deg 2), then the cascade
    tr = peel_to_core(fig1, 3)
    assert tr.removed == ((4, 2), (2, 2), (0, 2), (1, 1), (3, 0))
    # the first removal below degree 2 is the fourth one
    assert tr.removal_degrees == [2, 2, 2, 1, 0]


def test_pendant_and_chain_peels():
    g = Graph.complete(4).add_vertex([0, 1])
    tr = peel_to_core(g, 3)
    assert tr.removed == ((4, 2),) and tr.survivors == frozenset(range(4))
    g = g.add_vertex([2, 4])
    tr = peel_to_core(g, 3)
    assert tr.removal_degrees == [2, 2] and tr.survivors == frozenset(range(4))


@given(graphs(max_n=8), st.integers(1, 5))
def test_k_core_matches_exhaustive_search(g, k):
    assert k_core(g, k).survivors == brute_k_core(g, k)


@given(graphs(max_n=14), st.integers(1, 5))
def test_peel_trace_invariants(g, k):
    tr = peel_to_core(g, k)
    assert induced_min_degree(g, tr.survivors) >= k or not tr.survivors
    assert all(deg <= k - 1 for deg in tr.removal_degrees)
    assert set(tr.removal_order) | tr.survivors == set(range(g.n))
    assert len(tr.removal_order) + len(tr.survivors) == g.n
    # neighbour sets at removal time are exactly the not-yet-removed neighbours
    gone = set()
    for (v, deg), nb in zip(tr.removed, tr.neighbours):
        assert nb == g.adj[v] - gone and len(nb) == deg
        gone.add(v)


@given(graphs(max_n=14), st.integers(1, 4))
def test_core_idempotent_and_monotone(g, k):
    core = k_core(g, k).survivors
    sub, labels = g.induced(core)
    assert {labels[v] for v in k_core(sub, k).survivors} == core
    assert k_core(g, k + 1).survivors <= core


def test_k_connected_examples(fig1):
    assert is_k_connected(Graph.complete(5), 4)
    assert not is_k_connected(Graph.complete(5), 5)
    assert not is_k_connected(Graph.cycle(5), 3)
    assert is_k_connected(fig1, 2) and not is_k_connected(fig1, 3)
    assert vertex_connectivity(fig1) == 2
    assert vertex_connectivity(Graph.path(3)) == 1


@given(graphs(max_n=9), st.integers(1, 4))
def test_k_connected_matches_cut_enumeration(g, k):
    assert is_k_connected(g, k) == brute_k_connected(g, k)


@given(graphs(min_n=2, max_n=9), st.integers(1, 4))
def test_separator_witness(g, k):
    sep = small_separator(g, k)
    if sep is not None:
        assert len(sep) < k and is_disconnected_by(g, sep)
        assert not is_k_connected(g, k)
    elif g.n > k:
        assert is_k_connected(g, k)


def test_cone_examples():
    assert cone(Graph.complete(3)) == Graph.complete(4)
    assert cone(Graph(1)) == Graph.complete(2)
    fan = cone(Graph.path(3))
    assert fan.n == 4 and fan.m == 5 and fan.degree(3) == 3


@given(graphs(max_n=12), st.integers(1, 4))
def test_cone_core_commutation(g, k):
    core = k_core(g, k).survivors
    if core:
        assert k_core(cone(g), k + 1).survivors == core | {g.n}
