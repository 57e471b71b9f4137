import random

import pytest
from hypothesis import strategies as st

from rainbowham.core import BipartiteGraph, GraphCollection

ACCEPTANCE_LINES: list[str] = []


def to_sets(c: GraphCollection):
    """Collection in the oracle's (n, list of edge sets) form."""
    return c.n, [set(g.edges()) for g in c.graphs]


def from_sets(n, graphs) -> GraphCollection:
    return GraphCollection(n, tuple(BipartiteGraph.from_edges(n, g) for g in graphs))


def random_min_degree_graph(rng: random.Random, n: int, delta: int, p: float) -> BipartiteGraph:
    rows = [sum(1 << j for j in range(n) if rng.random() < p) for _ in range(n)]
    g = BipartiteGraph(n, tuple(rows))
    for i in range(n):
        while g.rows[i].bit_count() < delta:
            g = g.with_edge(i, rng.choice([j for j in range(n) if not g.rows[i] >> j & 1]))
    for j in range(n):
        while g.cols[j].bit_count() < delta:
            g = g.with_edge(rng.choice([i for i in range(n) if not g.cols[j] >> i & 1]), j)
    return g


@st.composite
def graphs(draw, n: int):
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n))
    return BipartiteGraph(n, tuple(rows))


@st.composite
def collections(draw, n_values=(2, 3), extra=(0, 1)):
    n = draw(st.sampled_from(n_values))
    m = 2 * n - 1 + draw(st.integers(*extra))
    return GraphCollection(n, tuple(draw(graphs(n)) for _ in range(m)))


@st.composite
def dense_collections(draw, n_values, delta_of):
    """Collections meeting a minimum degree bound, built by seeded repair."""
    n = draw(st.sampled_from(n_values))
    seed = draw(st.integers(0, 2**32 - 1))
    same = draw(st.booleans())
    rng = random.Random(seed)
    delta = delta_of(n)
    p = rng.choice([0.0, delta / n, min(1.0, (delta + 1) / n)])
    base = random_min_degree_graph(rng, n, delta, p)
    gs = tuple(base if same else random_min_degree_graph(rng, n, delta, p) for _ in range(2 * n - 1))
    return GraphCollection(n, gs)


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
