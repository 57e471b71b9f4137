import pytest

from rainbowham import constructive as K
from rainbowham import exact, harness
from rainbowham.core import BipartiteGraph, FamilyKind, GraphCollection, X, Y, collection_min_degree
from rainbowham.extremal import recognize_double_complete, recognize_F_family


def test_random_collection_meets_target():
    c = harness.gen_random_collection(3, 5, 2, 7)
    assert c.m == 5 and collection_min_degree(c) >= 2


def test_random_collection_deterministic_and_seed_sensitive():
    assert harness.gen_random_collection(4, 7, 2, 1) == harness.gen_random_collection(4, 7, 2, 1)
    assert harness.gen_random_collection(4, 7, 2, 1) != harness.gen_random_collection(4, 7, 2, 2)


@pytest.mark.parametrize("args", [(3, 5, 4, 0), (3, 0, 1, 0), (0, 1, 0, 0)])
def test_random_collection_argument_errors(args):
    with pytest.raises(ValueError):
        harness.gen_random_collection(*args)


@pytest.mark.parametrize("n,delta", [(2, 1), (5, 3), (6, 1), (7, 7)])
def test_min_degree_over_many_seeds(n, delta):
    for seed in range(30):
        assert collection_min_degree(harness.gen_random_collection(n, 3, delta, seed)) >= delta


def test_perturbed_extremal():
    for seed in range(5):
        c = harness.gen_perturbed_extremal(FamilyKind.DOUBLE_COMPLETE, 4, 0, seed)
        assert recognize_double_complete(c) is not None
        c1 = harness.gen_perturbed_extremal("double_complete", 4, 1, seed)
        assert recognize_double_complete(c1) is None
    assert recognize_F_family(harness.gen_perturbed_extremal("f_family", 5, 0, 3, mix=True)) is not None
    with pytest.raises(ValueError):
        harness.gen_perturbed_extremal("double_complete", 5, 0, 0)
    with pytest.raises(ValueError):
        harness.gen_perturbed_extremal("f_family", 4, 0, 0)
    with pytest.raises(ValueError):
        harness.gen_perturbed_extremal("nonsense", 4, 0, 0)


def test_flips_are_distinct():
    base = harness.extremal_collection(FamilyKind.DOUBLE_COMPLETE, 4)
    c = harness.gen_perturbed_extremal(FamilyKind.DOUBLE_COMPLETE, 4, 5, 11)
    diff = sum((a.rows[i] ^ b.rows[i]).bit_count() for a, b in zip(base.graphs, c.graphs) for i in range(4))
    assert diff == 5


def test_single_flip_of_f_at_n3_never_leaves_the_family_with_degree_two():
    # removing an edge of the 6-cycle drops a degree, adding a chord gives F' on another frame
    for seed in range(200):
        c = harness.gen_perturbed_extremal(FamilyKind.F_FAMILY, 3, 1, seed)
        assert collection_min_degree(c) < 2 or recognize_F_family(c) is not None


def test_two_flips_of_f_can_become_connected():
    for seed in range(200):
        c = harness.gen_perturbed_extremal(FamilyKind.F_FAMILY, 3, 2, seed)
        if collection_min_degree(c) < 2 or recognize_F_family(c) is not None:
            continue
        if all(isinstance(K.solve_thm14(c, X(i), Y(j)), K.HamPath) for i in range(3) for j in range(3)):
            return
    pytest.fail("no connected two-flip instance in 200 seeds")


def test_sweep_report_counters_and_reproducibility():
    a = harness.verify_sweep("1.3", 4, 40, seed=1)
    b = harness.verify_sweep("1.3", 4, 40, seed=1)
    assert a.to_json() == b.to_json()
    assert a.counters_consistent() and a.passed
    assert a.configs_checked > 0 and a.arc_bound_violations == 0


def test_sweep_endpoint_pairs():
    r = harness.verify_sweep("1.4", 3, 20, seed=1)
    assert r.passed and r.pairs_checked == 20 * 9 and r.counters_consistent()


def test_sweep_parallel_matches_serial():
    assert harness.verify_sweep("1.3", 3, 16, 5, jobs=2).to_json() == harness.verify_sweep("1.3", 3, 16, 5).to_json()


def test_exhaustive_n2():
    r = harness.verify_sweep("1.3", 2, exhaustive=True)
    assert r.trials == 343 and r.passed and r.counters_consistent()
    # the two perfect matchings, each repeated three times
    assert r.extremal_certified == 2
    with pytest.raises(ValueError):
        harness.verify_sweep("1.3", 3, exhaustive=True)


def test_check_collection_flags_a_broken_engine(monkeypatch):
    c = GraphCollection.copies(BipartiteGraph.complete(3), 5)
    cert = K.Extremal(None)
    monkeypatch.setattr(K, "solve_thm13", lambda c, on_config=None: cert)
    trial = harness.check_collection("1.3", c)
    assert trial.outcome == "mismatch" and trial.collection == c


def test_check_collection_records_errors(monkeypatch):
    def boom(c, on_config=None):
        raise K.InternalExhaustion("stuck")

    monkeypatch.setattr(K, "solve_thm13", boom)
    c = GraphCollection.copies(BipartiteGraph.complete(3), 5)
    report = harness.SweepReport("1.3", 3, 5, 2, 1, 0)
    harness._merge(report, [harness.check_collection("1.3", c)])
    assert report.engine_error == 1 and not report.passed
    assert report.failures[0]["collection"]["n"] == 3


def test_threshold():
    assert [harness.threshold("1.3", n) for n in (2, 3, 4, 5)] == [1, 2, 2, 3]
    assert [harness.threshold("1.4", n) for n in (2, 3, 4, 5)] == [2, 2, 3, 3]
    with pytest.raises(ValueError):
        harness.threshold("2.0", 3)


def test_tightness_matching_fixture():
    c = GraphCollection.copies(BipartiteGraph.from_edges(4, [(i, i) for i in range(4)]), 7)
    assert collection_min_degree(c) == harness.threshold("1.3", 4) - 1
    assert not harness.recognized_extremal("1.3", c)
    assert harness.negative_property("1.3", c)[0]


def test_tightness_search_connectivity_n3():
    found = harness.tightness_search("1.4", 3, 500, seed=0)
    assert found is not None
    c = found.collection
    assert collection_min_degree(c) == 1
    assert recognize_F_family(c) is None
    ok, pair = exact.is_ham_connected(c)
    assert not ok and pair == found.failing_pair


def test_tightness_search_is_deterministic():
    a = harness.tightness_search("1.3", 4, 300, seed=2)
    b = harness.tightness_search("1.3", 4, 300, seed=2)
    assert a == b
