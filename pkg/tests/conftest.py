from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from rigicount.graph import Graph

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

# the 5-vertex, 7-edge example graph, 0-based labels
FIG1_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 4)]


@pytest.fixture
def fig1() -> Graph:
    return Graph.from_edges(5, FIG1_EDGES)


@st.composite
def graphs(draw, min_n: int = 0, max_n: int = 8):
    n = draw(st.integers(min_n, max_n))
    slots = list(combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(slots), max_size=len(slots)))
    return Graph(n, frozenset(e for e, keep in zip(slots, mask) if keep))


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, _, line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)
