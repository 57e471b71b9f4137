"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line in ``conftest.ACCEPTANCE_LINES`` (shown
in the terminal summary) and prints it, then asserts the outcome. Sampled
sweeps are computed once per module and shared between criteria.
"""
import functools
import itertools
import json
import random
import time

from conftest import ACCEPTANCE_LINES, to_sets
from naive import in_f_family_brute, naive_failing_pairs
from rainbowham import constructive, exact, harness
from rainbowham.cli import run
from rainbowham.core import BipartiteGraph, GraphCollection, X, Y, collection_min_degree, validate_witness
from rainbowham.extremal import (
    FFrame,
    certificate_holds,
    make_double_complete,
    make_F,
    make_F_prime,
    recognize_double_complete,
    recognize_F_family,
)
from rainbowham.formats import dumps, parse_witness, serialize_collection

SEED = 1
SWEEPS_13 = {3: 1000, 4: 1000, 5: 1000}
SWEEPS_14 = {3: 300, 5: 300}

# failing endpoint pairs frozen from naive.naive_failing_pairs
FAILING_PAIRS = {
    (3, "F"): [(0, 0), (1, 2), (2, 1)],
    (3, "mix"): [(0, 0)],
    (5, "F"): [(0, 0)],
    (5, "mix"): [(0, 0)],
}


def report(criterion: int, name: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}. {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@functools.lru_cache(maxsize=None)
def sweep(theorem: str, n: int) -> harness.SweepReport:
    trials = (SWEEPS_13 if theorem == "1.3" else SWEEPS_14)[n]
    return harness.verify_sweep(theorem, n, trials, SEED)


def cli(capsys, *argv) -> tuple[int, str]:
    code = run(list(argv))
    return code, capsys.readouterr().out


def f_collection(n: int, flags, frame=None) -> GraphCollection:
    frame = frame or FFrame.canonical(n)
    f, fp = make_F(frame), make_F_prime(frame)
    return GraphCollection(n, tuple(fp if b else f for b in flags))


def random_frame(rng: random.Random, n: int) -> FFrame:
    xs, ys = rng.randrange(n), rng.randrange(n)
    x1 = rng.sample([i for i in range(n) if i != xs], (n - 1) // 2)
    y1 = rng.sample([j for j in range(n) if j != ys], (n - 1) // 2)
    return FFrame.build(n, xs, ys, x1, y1)


def test_1_exhaustive_n2():
    start = time.perf_counter()
    matching = [BipartiteGraph.from_edges(2, [(0, 0), (1, 1)]), BipartiteGraph.from_edges(2, [(0, 1), (1, 0)])]
    graphs = [BipartiteGraph(2, (a, b)) for a in range(4) for b in range(4)]
    considered = exceptions = 0
    for triple in itertools.product(graphs, repeat=3):
        c = GraphCollection.of(triple)
        if collection_min_degree(c) < 1:
            continue
        considered += 1
        w = exact.find_thp(c)
        extremal = triple[0] in matching and triple[0] == triple[1] == triple[2]
        if w is None:
            exceptions += not extremal
        else:
            exceptions += extremal or not validate_witness(c, w).ok
    engine = harness.verify_sweep("1.3", 2, exhaustive=True)
    elapsed = time.perf_counter() - start
    ok = exceptions == 0 and engine.passed and elapsed < 60
    report(1, "exhaustive n=2", ok,
           f"{considered} of 4096 collections with degree >= 1, {exceptions} exceptions, "
           f"engine sweep passed={engine.passed}, {elapsed:.1f}s")
    assert ok


def test_2_path_engine_matches_exact(capsys, tmp_path):
    parts, ok = [], True
    path = tmp_path / "c.json"
    for n, trials in SWEEPS_13.items():
        r = sweep("1.3", n)
        disagreements = errors = invalid = 0
        for t in range(trials):
            c = harness.sampled_instance("1.3", n, SEED, t)
            path.write_text(serialize_collection(c))
            code, out = cli(capsys, "solve", "--in", str(path), "--engine", "both")
            doc = json.loads(out)
            if doc["result"] == "disagreement":
                disagreements += 1
            elif doc["result"] == "path":
                w = parse_witness(out)
                invalid += not (validate_witness(c, w).ok and w.order == 2 * n)
            elif code != 1 or "certificate" not in doc:
                errors += 1
        good = r.passed and r.counters_consistent() and not (disagreements or errors or invalid)
        ok &= good
        parts.append(f"n={n}: {r.witness_found} paths, {r.extremal_certified} extremal, "
                     f"{r.oracle_mismatch + disagreements} disagreements, {r.engine_error + errors} errors, "
                     f"{invalid} invalid witnesses")
    report(2, "path engine vs exact", ok, "; ".join(parts))
    assert ok


def test_3_connectivity_engine_matches_exact():
    parts, ok = [], True
    for n in SWEEPS_14:
        r = sweep("1.4", n)
        ok &= r.passed and r.counters_consistent()
        parts.append(f"n={n}: {r.pairs_checked} pairs, {r.oracle_mismatch} mismatches, {r.engine_error} errors")
    rng = random.Random(SEED)
    checked = bad = 0
    for n in SWEEPS_14:
        cases = [f_collection(n, [False] * (2 * n - 1)), f_collection(n, [True] * (2 * n - 1))]
        for _ in range(6):
            flags = [rng.random() < 0.5 for _ in range(2 * n - 1)]
            cases.append(f_collection(n, flags, random_frame(rng, n)))
        for c in cases:
            for i in range(n):
                for j in range(n):
                    out = constructive.solve_thm14(c, X(i), Y(j))
                    none = exact.find_thp_between(c, X(i), Y(j)) is None
                    extremal = isinstance(out, constructive.Extremal)
                    checked += 1
                    bad += extremal != none or (extremal and not certificate_holds(c, out.certificate))
    ok &= bad == 0
    parts.append(f"F/F' collections: {checked} pairs, {bad} where Extremal differs from exact none")
    report(3, "endpoint engine vs exact", ok, "; ".join(parts))
    assert ok


def test_4_extremal_negatives():
    details, ok = [], True
    for n in (2, 4, 6):
        c = GraphCollection.copies(make_double_complete(n, range(n // 2), range(n // 2)), 2 * n - 1)
        none = exact.find_thp(c) is None
        ok &= none
        details.append(f"double complete n={n} no path={none}")
    # the frozen pairs agree with the brute-force oracle where it is cheap
    assert naive_failing_pairs(*to_sets(f_collection(3, [False] * 5))) == FAILING_PAIRS[(3, "F")]
    rng = random.Random(SEED)
    for n in (3, 5):
        m = 2 * n - 1
        mixes = [[rng.random() < 0.5 for _ in range(m)] for _ in range(3)]
        mixes = [f if any(f) else [True] + f[1:] for f in mixes]
        for label, flags_list in (("F", [[False] * m]), ("mix", mixes + [[True] * m])):
            for flags in flags_list:
                c = f_collection(n, flags)
                connected, pair = exact.is_ham_connected(c)
                failing = [(i, j) for i in range(n) for j in range(n)
                           if exact.find_thp_between(c, X(i), Y(j)) is None]
                expected = FAILING_PAIRS[(n, label)]
                good = not connected and failing == expected and pair == (X(expected[0][0]), Y(expected[0][1]))
                ok &= good
            details.append(f"{label} n={n} failing pairs {expected} ({len(flags_list)} collections)")
    report(4, "extremal negatives", ok, "; ".join(details))
    assert ok


def test_5_arc_count_bound():
    configs = violations = 0
    for theorem, sizes in (("1.3", SWEEPS_13), ("1.4", SWEEPS_14)):
        for n in sizes:
            r = sweep(theorem, n)
            configs += r.configs_checked
            violations += r.arc_bound_violations
    ok = violations == 0 and configs > 0
    report(5, "digraph arc bound", ok, f"{configs} cycle configurations, {violations} violations")
    assert ok


def test_6_tightness():
    c = GraphCollection.copies(BipartiteGraph.from_edges(4, [(i, i) for i in range(4)]), 7)
    fixture_ok = (collection_min_degree(c) == 1 and exact.find_thp(c) is None
                  and recognize_double_complete(c) is None)
    found = harness.tightness_search("1.3", 5, 10**5, seed=SEED)
    if found is None:
        search = "no instance within 10^5 trials (reported, not failed)"
    else:
        c5 = found.collection
        recert = (collection_min_degree(c5) == 2 and exact.find_thp(c5) is None
                  and recognize_double_complete(c5) is None)
        fixture_ok &= recert
        search = f"n=5 negative at trial {found.trial} with degree 2, re-certified={recert}"
    report(6, "tightness", fixture_ok, f"n=4 all-matching collection has no path and is not extremal; {search}")
    assert fixture_ok


def _flip_positions(rng, n, m, count):
    return [(rng.randrange(m), rng.randrange(n), rng.randrange(n)) for _ in range(count)]


def test_7_recognizer_roundtrips():
    rng = random.Random(SEED)
    generated = accepted = 0
    for n in (2, 4, 6):
        for x1 in itertools.combinations(range(n), n // 2):
            for y1 in itertools.combinations(range(n), n // 2):
                c = GraphCollection.copies(make_double_complete(n, x1, y1), 2 * n - 1)
                found = recognize_double_complete(c)
                generated += 1
                accepted += found is not None and make_double_complete(n, *found) == c.graphs[0]
    for n in (3, 5, 7):
        for _ in range(100):
            flags = [rng.random() < 0.5 for _ in range(2 * n - 1)]
            c = f_collection(n, flags, random_frame(rng, n))
            found = recognize_F_family(c)
            generated += 1
            accepted += found is not None and f_collection(n, found[1], found[0]) == c

    dc_flips = dc_rejected = 0
    for n in (2, 4, 6):
        for _ in range(200):
            base = GraphCollection.copies(make_double_complete(n, rng.sample(range(n), n // 2),
                                                              rng.sample(range(n), n // 2)), 2 * n - 1)
            k, i, j = _flip_positions(rng, n, base.m, 1)[0]
            dc_flips += 1
            dc_rejected += recognize_double_complete(base.replace(k, base.graphs[k].toggled(i, j))) is None

    f_flips = f_rejected = f_members = f_agree = 0
    for n in (3, 5):
        for _ in range(300):
            base = f_collection(n, [rng.random() < 0.5 for _ in range(2 * n - 1)], random_frame(rng, n))
            k, i, j = _flip_positions(rng, n, base.m, 1)[0]
            c = base.replace(k, base.graphs[k].toggled(i, j))
            member = in_f_family_brute(n, [set(g.edges()) for g in c.graphs])
            rejected = recognize_F_family(c) is None
            f_flips += 1
            f_members += member
            f_agree += rejected != member
            f_rejected += rejected and not member

    ok = (accepted == generated and dc_rejected == dc_flips
          and f_agree == f_flips and f_rejected == f_flips - f_members)
    report(7, "recognizer round-trips", ok,
           f"{accepted}/{generated} generated collections recognized; double complete: {dc_rejected}/{dc_flips} "
           f"flips rejected; F family: {f_rejected}/{f_flips - f_members} flips that leave the family rejected, "
           f"{f_members} flips land on another F/F' member (brute force) and are correctly accepted")
    assert ok


def test_8_determinism(capsys):
    runs = [("verify", "--theorem", th, "--n", str(n), "--trials", str(t), "--seed", str(SEED))
            for th, sizes in (("1.3", SWEEPS_13), ("1.4", SWEEPS_14)) for n, t in sizes.items()]
    mismatched = []
    for argv in runs:
        report_doc = sweep(argv[2], int(argv[4])).to_json()
        if cli(capsys, *argv)[1] != dumps(report_doc):
            mismatched.append(" ".join(argv))
    repeated = [("verify", "--theorem", "1.3", "--n", "2", "--exhaustive"),
                ("gen", "--n", "5", "--seed", str(SEED)),
                ("gen", "--n", "5", "--family", "f_family", "--flips", "2", "--seed", str(SEED)),
                ("tightness", "--theorem", "1.4", "--n", "3", "--trials", "500", "--seed", str(SEED))]
    for argv in repeated:
        if cli(capsys, *argv) != cli(capsys, *argv):
            mismatched.append(" ".join(argv))
    ok = not mismatched
    report(8, "determinism", ok, f"{len(runs) + len(repeated)} commands repeated, "
           f"{len(mismatched)} differing outputs{': ' + ', '.join(mismatched) if mismatched else ''}")
    assert ok
