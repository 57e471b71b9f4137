import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import collections, to_sets
from naive import naive_count, naive_cycle, naive_find
from rainbowham import exact
from rainbowham.core import BipartiteGraph, GraphCollection, Kind, X, Y, validate_witness
from rainbowham.extremal import FFrame, make_double_complete, make_F, make_F_prime

# counts and failing pairs frozen from the brute-force oracle in naive.py
FROZEN_COUNTS = [
    ("three K22", GraphCollection.copies(BipartiteGraph.complete(2), 3), 24),
    ("five K33", GraphCollection.copies(BipartiteGraph.complete(3), 5), 4320),
    ("n2 matching", GraphCollection.copies(BipartiteGraph.from_edges(2, [(0, 0), (1, 1)]), 3), 0),
]


def f_mix(n, flags):
    frame = FFrame.canonical(n)
    return GraphCollection.of([make_F_prime(frame) if b else make_F(frame) for b in flags])


@pytest.mark.parametrize("name,c,count", FROZEN_COUNTS, ids=[f[0] for f in FROZEN_COUNTS])
def test_frozen_counts(name, c, count):
    assert exact.count_thp(c) == count


def test_count_limit():
    with pytest.raises(ValueError):
        exact.count_thp(GraphCollection.copies(BipartiteGraph.complete(6), 11))


def test_too_few_graphs():
    with pytest.raises(ValueError):
        exact.find_thp(GraphCollection.copies(BipartiteGraph.complete(3), 4))


def _failing(c):
    return [(i, j) for i in range(c.n) for j in range(c.n)
            if exact.find_thp_between(c, X(i), Y(j)) is None]


def test_n3_f_fails_on_antipodal_pairs():
    assert _failing(f_mix(3, [False] * 5)) == [(0, 0), (1, 2), (2, 1)]


@pytest.mark.parametrize("flags", [[False, True, False, True, False], [True] * 5])
def test_n3_mixes_with_primes_fail_only_at_apexes(flags):
    assert _failing(f_mix(3, flags)) == [(0, 0)]


@pytest.mark.parametrize("flags", [[False] * 9, [False, True] * 4 + [True]])
def test_n5_f_family_fails_only_at_apexes(flags):
    assert _failing(f_mix(5, flags)) == [(0, 0)]
    assert exact.is_ham_connected(f_mix(5, flags)) == (False, (X(0), Y(0)))


@pytest.mark.parametrize("n", [2, 4, 6])
def test_double_complete_has_no_path(n):
    c = GraphCollection.copies(make_double_complete(n, range(n // 2), range(n // 2)), 2 * n - 1)
    assert exact.find_thp(c) is None


@settings(max_examples=120, deadline=None)
@given(collections())
def test_find_matches_oracle(c):
    n, gs = to_sets(c)
    w = exact.find_thp(c)
    assert (w is None) == (naive_find(n, gs) is None)
    if w is not None:
        assert validate_witness(c, w).ok and w.order == 2 * n


@settings(max_examples=60, deadline=None)
@given(collections(), st.data())
def test_find_between_matches_oracle(c, data):
    n, gs = to_sets(c)
    i, j = data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1))
    w = exact.find_thp_between(c, X(i), Y(j))
    assert (w is None) == (naive_find(n, gs, start=i, end=j) is None)
    if w is not None:
        assert w.endpoints == (X(i), Y(j)) and validate_witness(c, w).ok


@settings(max_examples=60, deadline=None)
@given(collections(n_values=(2, 3)))
def test_count_matches_oracle(c):
    n, gs = to_sets(c)
    # the oracle enumerates X-first sequences, which is one orientation per path
    assert exact.count_thp(c) == naive_count(n, gs)


@settings(max_examples=60, deadline=None)
@given(collections(n_values=(3,)), st.sampled_from([4, 6]))
def test_partial_cycle_matches_oracle(c, length):
    n, gs = to_sets(c)
    if length > c.m:
        with pytest.raises(ValueError):
            exact.find_partial_cycle(c, length)
        return
    w = exact.find_partial_cycle(c, length)
    assert (w is None) == (naive_cycle(n, gs, length) is None)
    if w is not None:
        assert w.kind is Kind.CYCLE and w.order == length and validate_witness(c, w).ok


def test_partial_cycle_bad_length():
    c = GraphCollection.copies(BipartiteGraph.complete(3), 5)
    for length in (3, 2, 8):
        with pytest.raises(ValueError):
            exact.find_partial_cycle(c, length)


@settings(max_examples=40, deadline=None)
@given(collections(n_values=(3,), extra=(0, 0)), st.permutations(range(5)))
def test_graph_order_is_irrelevant(c, order):
    assert (exact.find_thp(c) is None) == (exact.find_thp(c.permuted(order)) is None)
    assert exact.count_thp(c) == exact.count_thp(c.permuted(order))


@settings(max_examples=40, deadline=None)
@given(collections(n_values=(3,), extra=(0, 0)), st.integers(0, 4), st.integers(0, 2), st.integers(0, 2))
def test_adding_an_edge_keeps_paths(c, k, i, j):
    bigger = c.replace(k, c.graphs[k].with_edge(i, j))
    if exact.find_thp(c) is not None:
        assert exact.find_thp(bigger) is not None
    assert exact.count_thp(bigger) >= exact.count_thp(c)


def test_deterministic_witness():
    c = GraphCollection.copies(BipartiteGraph.complete(4), 7)
    assert exact.find_thp(c) == exact.find_thp(c)


def test_endpoint_validation():
    c = GraphCollection.copies(BipartiteGraph.complete(2), 3)
    with pytest.raises(ValueError):
        exact.find_thp_between(c, Y(0), X(0))
    with pytest.raises(ValueError):
        exact.find_thp_between(c, X(0), Y(2))


def test_disconnected_pair():
    c = GraphCollection.copies(make_double_complete(4, [0, 1], [0, 1]), 7)
    assert exact.find_thp_between(c, X(0), Y(2)) is None
    ok, pair = exact.is_ham_connected(c)
    assert not ok and pair == (X(0), Y(0))
