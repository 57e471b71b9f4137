"""Instance generators, verification sweeps and tightness searches.

Randomness comes from :class:`random.Random` (Mersenne Twister). Each trial
draws from its own stream seeded with the string ``"<seed>/<trial>"``, so
a trial's instance does not depend on how trials are scheduled across
workers, and reports are reproducible from (parameters, seed).
"""
from __future__ import annotations

import itertools
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import constructive, exact
from .core import (
    BipartiteGraph,
    FamilyKind,
    GraphCollection,
    X,
    Y,
    collection_min_degree,
    validate_witness,
)
from .extremal import (
    FFrame,
    certificate_holds,
    make_double_complete,
    make_F,
    make_F_prime,
    recognize_double_complete,
    recognize_F_family,
)

log = logging.getLogger(__name__)

THEOREMS = ("1.3", "1.4")


def threshold(theorem: str, n: int) -> int:
    """Minimum degree required by the theorem at part size n."""
    if theorem == "1.3":
        return (n + 1) // 2
    if theorem == "1.4":
        return (n + 2) // 2
    raise ValueError(f"unknown theorem {theorem!r}; expected one of {THEOREMS}")


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"{seed}/{trial}")


# -- generators -------------------------------------------------------------------

def _random_graph(rng: random.Random, n: int, delta: int) -> BipartiteGraph:
    p = min(1.0, (delta + 1) / n)
    rows = [0] * n
    for i in range(n):
        for j in range(n):
            if rng.random() < p:
                rows[i] |= 1 << j
    for i in range(n):
        while rows[i].bit_count() < delta:
            j = rng.choice([j for j in range(n) if not rows[i] >> j & 1])
            rows[i] |= 1 << j
    for j in range(n):
        col = [i for i in range(n) if rows[i] >> j & 1]
        while len(col) < delta:
            i = rng.choice([i for i in range(n) if i not in col])
            rows[i] |= 1 << j
            col.append(i)
    return BipartiteGraph(n, tuple(rows))


def gen_random_collection(n: int, m: int, delta: int, seed: int | random.Random) -> GraphCollection:
    """m independent graphs: Bernoulli edges with p = min(1, (delta+1)/n), then
    degree repair, X-vertices first, by random missing incident edges."""
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    if not 0 <= delta <= n:
        raise ValueError(f"delta must lie in [0, n={n}], got {delta}")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    return GraphCollection(n, tuple(_random_graph(rng, n, delta) for _ in range(m)))


def _family_kind(family) -> FamilyKind:
    if isinstance(family, FamilyKind):
        return family
    try:
        return FamilyKind(family)
    except ValueError:
        raise ValueError(f"unknown family {family!r}") from None


def extremal_collection(family, n: int, m: int | None = None,
                        primes: tuple[bool, ...] | None = None) -> GraphCollection:
    """Canonical unperturbed member of an exceptional family.

    Double complete uses X1 = Y1 = {0..n/2-1}. The F family uses the
    canonical frame and ``primes`` selects F' per graph (all F by default).
    """
    kind = _family_kind(family)
    m = 2 * n - 1 if m is None else m
    if kind is FamilyKind.DOUBLE_COMPLETE:
        if n % 2:
            raise ValueError("double complete collections need even n")
        return GraphCollection.copies(make_double_complete(n, range(n // 2), range(n // 2)), m)
    if n % 2 == 0:
        raise ValueError("F-family collections need odd n")
    frame = FFrame.canonical(n)
    primes = primes if primes is not None else (False,) * m
    if len(primes) != m:
        raise ValueError("need one F' flag per graph")
    f, fp = make_F(frame), make_F_prime(frame)
    return GraphCollection(n, tuple(fp if b else f for b in primes))


def gen_perturbed_extremal(family, n: int, flips: int, seed: int | random.Random,
                           mix: bool = False) -> GraphCollection:
    """An exceptional collection with ``flips`` distinct (graph, x, y) toggles.

    With ``mix`` the F-family base draws F or F' per graph. The degree
    condition is not restored afterwards.
    """
    kind = _family_kind(family)
    if flips < 0:
        raise ValueError("flips must be non-negative")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    m = 2 * n - 1
    primes = None
    if kind is FamilyKind.F_FAMILY and mix:
        primes = tuple(rng.random() < 0.5 for _ in range(m))
    c = extremal_collection(kind, n, m, primes)
    if flips > m * n * n:
        raise ValueError(f"at most {m * n * n} distinct flips exist")
    graphs = list(c.graphs)
    for cell in sorted(rng.sample(range(m * n * n), flips)):
        k, rest = divmod(cell, n * n)
        i, j = divmod(rest, n)
        graphs[k] = graphs[k].toggled(i, j)
    return GraphCollection(n, tuple(graphs))


# -- sweeps -------------------------------------------------------------------------

@dataclass
class SweepReport:
    theorem: str
    n: int
    m: int
    delta_target: int
    trials: int
    seed: int | None
    mode: str = "sampled"
    witness_found: int = 0
    extremal_certified: int = 0
    oracle_mismatch: int = 0
    engine_error: int = 0
    pairs_checked: int = 0
    configs_checked: int = 0
    arc_bound_violations: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.oracle_mismatch == 0 and self.engine_error == 0 and self.arc_bound_violations == 0

    def counters_consistent(self) -> bool:
        return self.witness_found + self.extremal_certified + self.oracle_mismatch + self.engine_error == self.trials

    def to_json(self) -> dict:
        return {
            "parameters": {
                "theorem": self.theorem, "n": self.n, "m": self.m,
                "delta_target": self.delta_target, "trials": self.trials,
                "seed": self.seed, "mode": self.mode,
            },
            "counters": {
                "witness_found": self.witness_found,
                "extremal_certified": self.extremal_certified,
                "oracle_mismatch": self.oracle_mismatch,
                "engine_error": self.engine_error,
            },
            "checks": {
                "pairs_checked": self.pairs_checked,
                "configs_checked": self.configs_checked,
                "arc_bound_violations": self.arc_bound_violations,
            },
            "passed": self.passed,
            "failures": self.failures,
        }


@dataclass
class _Trial:
    index: int
    outcome: str  # witness | extremal | mismatch | error
    pairs: int = 0
    configs: int = 0
    arc_bound_violations: int = 0
    detail: str = ""
    collection: GraphCollection | None = None


def _arc_bound_hook(counter: list[int]):
    """Count configs and recompute the arc bound independently of the engine."""

    def hook(c: GraphCollection, cfg) -> None:
        counter[0] += 1
        arcs = 0
        ys = [Y(j) for j in range(c.n)]
        indeg = {v: 0 for v in ys}
        for i in cfg.odd_positions():
            for v in ys:
                if v != cfg.u(i + 1) and c.has(cfg.col(i), cfg.u(i), v):
                    arcs += 1
                    indeg[v] += 1
        if not (sum(indeg.values()) == arcs >= constructive.arc_count_bound(c.n)):
            counter[1] += 1
    return hook


def _check_pair_13(c: GraphCollection, hook) -> tuple[str, str]:
    out = constructive.solve_thm13(c, on_config=hook)
    ref = exact.find_thp(c)
    if isinstance(out, constructive.HamPath):
        if not validate_witness(c, out.witness).ok or out.witness.order != 2 * c.n:
            return "error", "constructive witness failed validation"
        if ref is None:
            return "mismatch", "constructive found a path the exact solver missed"
        return "witness", ""
    if ref is not None:
        return "mismatch", "constructive reported extremal but a path exists"
    if not certificate_holds(c, out.certificate):
        return "error", "certificate does not re-verify"
    return "extremal", ""


def _check_pair_14(c: GraphCollection, i: int, j: int, hook) -> tuple[str, str]:
    x, y = X(i), Y(j)
    out = constructive.solve_thm14(c, x, y, on_config=hook)
    ref = exact.find_thp_between(c, x, y)
    if isinstance(out, constructive.HamPath):
        w = out.witness
        if not validate_witness(c, w).ok or w.order != 2 * c.n or set(w.endpoints) != {x, y}:
            return "error", f"constructive witness for {x}-{y} failed validation"
        if ref is None:
            return "mismatch", f"constructive found an {x}-{y} path the exact solver missed"
        return "witness", ""
    if ref is not None:
        return "mismatch", f"constructive reported extremal for {x}-{y} but a path exists"
    if not certificate_holds(c, out.certificate):
        return "error", "certificate does not re-verify"
    return "extremal", ""


def check_collection(theorem: str, c: GraphCollection, index: int = 0) -> _Trial:
    """Run the constructive engine against the exact solver on one collection."""
    counter = [0, 0]
    hook = _arc_bound_hook(counter)
    outcomes: list[str] = []
    detail = ""
    pairs = 0
    try:
        if theorem == "1.3":
            kind, detail = _check_pair_13(c, hook)
            outcomes.append(kind)
            pairs = 1
        else:
            for i, j in itertools.product(range(c.n), repeat=2):
                kind, msg = _check_pair_14(c, i, j, hook)
                outcomes.append(kind)
                pairs += 1
                if msg and not detail:
                    detail = msg
    except Exception as exc:  # engine faults are report content
        outcomes.append("error")
        detail = f"{type(exc).__name__}: {exc}"
    if "error" in outcomes:
        outcome = "error"
    elif "mismatch" in outcomes:
        outcome = "mismatch"
    elif "extremal" in outcomes:
        outcome = "extremal"
    else:
        outcome = "witness"
    return _Trial(index, outcome, pairs, counter[0], counter[1], detail,
                  c if outcome in ("error", "mismatch") else None)


def sampled_instance(theorem: str, n: int, seed: int, t: int) -> GraphCollection:
    """The collection a sampled sweep checks at trial t."""
    rng = trial_rng(seed, t)
    delta = threshold(theorem, n)
    m = 2 * n - 1
    if t % 4 == 3:
        # identical graphs probe the exceptional families
        return GraphCollection.copies(_random_graph(rng, n, delta), m)
    return gen_random_collection(n, m, delta, rng)


def _run_sampled(args: tuple[str, int, int, int]) -> _Trial:
    theorem, n, seed, t = args
    return check_collection(theorem, sampled_instance(theorem, n, seed, t), t)


def exhaustive_n2(theorem: str) -> list[GraphCollection]:
    """All collections of 3 graphs on n=2 meeting the theorem's degree bound."""
    n, delta = 2, threshold(theorem, 2)
    graphs = [BipartiteGraph(n, (mask & 3, mask >> 2)) for mask in range(16)]
    out = []
    for combo in itertools.product(graphs, repeat=3):
        c = GraphCollection(n, combo)
        if collection_min_degree(c) >= delta:
            out.append(c)
    return out


def _run_exhaustive(args: tuple[str, int, GraphCollection]) -> _Trial:
    theorem, t, c = args
    trial = check_collection(theorem, c, t)
    if theorem == "1.3" and trial.outcome in ("witness", "extremal"):
        # no path exactly when the collection is double complete
        if (trial.outcome == "extremal") != (recognize_double_complete(c) is not None):
            trial.outcome = "mismatch"
            trial.detail = "no-path instances differ from the double complete family"
            trial.collection = c
    return trial


def _merge(report: SweepReport, trials) -> SweepReport:
    from .formats import collection_to_doc

    for tr in sorted(trials, key=lambda t: t.index):
        report.pairs_checked += tr.pairs
        report.configs_checked += tr.configs
        report.arc_bound_violations += tr.arc_bound_violations
        if tr.outcome == "witness":
            report.witness_found += 1
        elif tr.outcome == "extremal":
            report.extremal_certified += 1
        elif tr.outcome == "mismatch":
            report.oracle_mismatch += 1
        else:
            report.engine_error += 1
        if tr.collection is not None:
            report.failures.append({"trial": tr.index, "outcome": tr.outcome, "detail": tr.detail,
                                    "collection": collection_to_doc(tr.collection)})
    return report


def _map(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=8))


def verify_sweep(theorem: str, n: int, trials: int = 0, seed: int = 0,
                 exhaustive: bool = False, jobs: int = 1) -> SweepReport:
    """Cross-check the constructive engine against the exact solver.

    Sampled mode draws ``trials`` hypothesis-satisfying collections with
    m = 2n-1; every fourth trial uses identical graphs. Exhaustive mode
    (n=2 only) enumerates all 16^3 collections and keeps the eligible ones.
    """
    delta = threshold(theorem, n)
    if n < 2:
        raise ValueError("sweeps need n >= 2")
    if exhaustive:
        if n != 2:
            raise ValueError("exhaustive mode is only available for n=2")
        cols = exhaustive_n2(theorem)
        report = SweepReport(theorem, n, 3, delta, len(cols), None, mode="exhaustive")
        results = _map(_run_exhaustive, [(theorem, t, c) for t, c in enumerate(cols)], jobs)
    else:
        if trials < 0:
            raise ValueError("trials must be non-negative")
        report = SweepReport(theorem, n, 2 * n - 1, delta, trials, seed)
        results = _map(_run_sampled, [(theorem, n, seed, t) for t in range(trials)], jobs)
    _merge(report, results)
    log.info("sweep %s n=%d: %d witness, %d extremal, %d mismatch, %d error",
             theorem, n, report.witness_found, report.extremal_certified,
             report.oracle_mismatch, report.engine_error)
    return report


# -- tightness ----------------------------------------------------------------------

@dataclass(frozen=True)
class TightnessFinding:
    collection: GraphCollection
    trial: int
    failing_pair: tuple | None = None


def recognized_extremal(theorem: str, c: GraphCollection) -> bool:
    if theorem == "1.3":
        return recognize_double_complete(c) is not None
    return recognize_F_family(c) is not None


def negative_property(theorem: str, c: GraphCollection) -> tuple[bool, tuple | None]:
    """Whether the exact solver certifies the theorem's conclusion fails."""
    if theorem == "1.3":
        return exact.find_thp(c) is None, None
    ok, pair = exact.is_ham_connected(c)
    return not ok, pair


def tightness_search(theorem: str, n: int, trials: int, seed: int = 0) -> TightnessFinding | None:
    """First collection with minimum degree exactly one below the threshold
    that is not exceptional and still fails the conclusion."""
    if n < 2:
        raise ValueError("tightness search needs n >= 2")
    delta = threshold(theorem, n) - 1
    m = 2 * n - 1
    for t in range(trials):
        rng = trial_rng(seed, t)
        if t % 2 == 0:
            c = GraphCollection.copies(_random_graph(rng, n, delta), m)
        else:
            c = gen_random_collection(n, m, delta, rng)
        if collection_min_degree(c) != delta or recognized_extremal(theorem, c):
            continue
        bad, pair = negative_property(theorem, c)
        if bad:
            log.info("tightness %s n=%d: found at trial %d", theorem, n, t)
            return TightnessFinding(c, t, pair)
    return None
