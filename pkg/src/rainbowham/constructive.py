"""Constructive engine for rainbow Hamiltonian paths under Dirac-type bounds.

Every proof-by-contradiction step is run forwards: a step either emits a
witness, produces a strictly better configuration (a longer path, or a
cycle of order 2n-2), or reaches an exceptional family, which is then
confirmed by the recognizers in :mod:`rainbowham.extremal`.

Colors are real graph indices throughout. The engine works on a *palette*
of exactly 2n-1 graph indices; when the collection is larger and the
palette turns out to be exceptional while the whole collection is not, one
palette member is swapped for a graph outside the family and the run is
repeated.

Rewrites are expressed as edits of an edge -> color dictionary followed by
a walk that reads the new path or cycle off the edited edge set. Every
emitted witness goes through :func:`rainbowham.core.validate_witness`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from . import exact
from .core import (
    BipartiteGraph,
    ExtremalCertificate,
    GraphCollection,
    Kind,
    Side,
    TransversalWitness,
    Vertex,
    X,
    Y,
    edge_key,
    min_degree,
    validate_witness,
)
from .extremal import (
    FFrame,
    double_complete_certificate,
    f_family_certificate,
    make_F,
    make_F_prime,
)


class NotApplicable(ValueError):
    """A precondition of the requested operation does not hold."""


class InternalExhaustion(RuntimeError):
    """The engine ran out of moves on an input that satisfies the hypotheses.

    The proofs guarantee progress, so this always indicates a bug; ``state``
    carries whatever configuration the engine was holding.
    """

    def __init__(self, message: str, state: object = None):
        super().__init__(message)
        self.state = state


def ceil_half(n: int) -> int:
    return (n + 1) // 2


# -- outcomes -----------------------------------------------------------------

@dataclass(frozen=True)
class HamPath:
    witness: TransversalWitness


@dataclass(frozen=True)
class Extremal:
    certificate: ExtremalCertificate


@dataclass(frozen=True)
class LongerPath:
    witness: TransversalWitness


@dataclass(frozen=True)
class Stuck:
    """No growth move applies. ``facts`` records the empty pivot sets, the
    closure cycle if one exists, and the structure of the leftover vertices."""

    witness: TransversalWitness
    facts: Mapping[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class CycleFound:
    witness: TransversalWitness


@dataclass(frozen=True)
class EdgeFact:
    u: Vertex
    v: Vertex
    color: int

    def holds(self, c: GraphCollection) -> bool:
        return c.has(self.color, self.u, self.v)


@dataclass(frozen=True)
class Implication:
    """``absent`` missing from its graph forces ``present`` into its graph."""

    absent: EdgeFact
    present: EdgeFact

    def holds(self, c: GraphCollection) -> bool:
        return self.absent.holds(c) or self.present.holds(c)


@dataclass(frozen=True)
class ForcedEdges:
    implications: tuple[Implication, ...]
    pivots: "PivotSets"


@dataclass(frozen=True)
class PivotSets:
    """Named position sets computed by one surgery step."""

    sets: Mapping[str, frozenset[int]]

    def __getitem__(self, name: str) -> frozenset[int]:
        return self.sets[name]


# -- configurations -----------------------------------------------------------

@dataclass(frozen=True)
class CycleConfig:
    """A (2n-2)-cycle u_1..u_{2n-2} plus the leftover pair and spare color.

    Positions are 1-based and taken modulo 2n-2 with residue 0 mapped to
    2n-2. Odd positions hold X-vertices. ``col(i)`` is the graph index on
    the edge u_i u_{i+1}, so position i plays the role of color label i.
    """

    cycle: TransversalWitness
    x: Vertex
    y: Vertex
    free_color: int

    @property
    def length(self) -> int:
        return self.cycle.order

    def pos(self, i: int) -> int:
        return (i - 1) % self.length + 1

    def u(self, i: int) -> Vertex:
        return self.cycle.vertices[(i - 1) % self.length]

    def col(self, i: int) -> int:
        return self.cycle.assignment[(i - 1) % self.length]

    def position_of(self, v: Vertex) -> int:
        return self.cycle.vertices.index(v) + 1

    @property
    def palette(self) -> tuple[int, ...]:
        return tuple(sorted(self.cycle.assignment + (self.free_color,)))

    def odd_positions(self) -> range:
        return range(1, self.length, 2)

    def even_positions(self) -> range:
        return range(2, self.length + 1, 2)

    def edges(self) -> dict[tuple[int, int], int]:
        return _cycle_edges(self.cycle)


def check_config(c: GraphCollection, cfg: CycleConfig) -> None:
    n = c.n
    if cfg.cycle.kind is not Kind.CYCLE or cfg.length != 2 * n - 2:
        raise ValueError(f"config needs a cycle of order {2 * n - 2}")
    rep = validate_witness(c, cfg.cycle)
    if not rep.ok:
        raise ValueError(f"config cycle invalid: {[str(v) for v in rep.violations]}")
    if any(cfg.u(i).side is not Side.X for i in cfg.odd_positions()):
        raise ValueError("odd cycle positions must hold X-vertices")
    if cfg.x.side is not Side.X or cfg.y.side is not Side.Y:
        raise ValueError("leftovers must be one X-vertex and one Y-vertex")
    if cfg.x in cfg.cycle.vertices or cfg.y in cfg.cycle.vertices:
        raise ValueError("leftovers must lie off the cycle")
    if not 0 <= cfg.free_color < c.m or cfg.free_color in cfg.cycle.assignment:
        raise ValueError("free color must be an unused graph index")


@dataclass(frozen=True)
class AuxiliaryDigraph:
    """Arcs u_i -> u for odd i whenever u_i u lies in G_{col(i)} and u != u_{i+1}."""

    out: Mapping[int, frozenset[Vertex]]
    into: Mapping[Vertex, frozenset[int]]

    def outdeg(self, i: int) -> int:
        return len(self.out[i])

    def indeg(self, v: Vertex) -> int:
        return len(self.into.get(v, ()))

    @property
    def arc_count(self) -> int:
        return sum(len(s) for s in self.out.values())

    def arcs(self, cfg: CycleConfig) -> set[tuple[Vertex, Vertex]]:
        return {(cfg.u(i), v) for i, vs in self.out.items() for v in vs}


def arc_count_bound(n: int) -> int:
    return (n - 1) * (ceil_half(n) - 1)


def build_aux_digraph(c: GraphCollection, cfg: CycleConfig) -> AuxiliaryDigraph:
    check_config(c, cfg)
    ys = [Y(j) for j in range(c.n)]
    out: dict[int, frozenset[Vertex]] = {}
    into: dict[Vertex, set[int]] = {v: set() for v in ys}
    for i in cfg.odd_positions():
        ui, nxt, a = cfg.u(i), cfg.u(i + 1), cfg.col(i)
        heads = frozenset(v for v in ys if v != nxt and c.has(a, ui, v))
        out[i] = heads
        for v in heads:
            into[v].add(i)
    d = AuxiliaryDigraph(out, {v: frozenset(s) for v, s in into.items()})
    if _palette_min_degree(c, cfg.palette) >= ceil_half(c.n):
        total_in = sum(d.indeg(v) for v in ys)
        if not (total_in == d.arc_count >= arc_count_bound(c.n)):
            raise InternalExhaustion("arc count below the degree-sum bound", (cfg, d))
    return d


# -- edge-set plumbing --------------------------------------------------------

Edges = dict[tuple[int, int], int]


def _path_edges(vs: list[Vertex] | tuple[Vertex, ...], cols) -> Edges:
    return {edge_key(a, b): col for a, b, col in zip(vs, vs[1:], cols)}


def _cycle_edges(w: TransversalWitness) -> Edges:
    return {edge_key(a, b): col for (a, b), col in zip(w.edges(), w.assignment)}


def _edit(edges: Edges, drop: Iterable[tuple[Vertex, Vertex]] = (),
          add: Mapping[tuple[Vertex, Vertex], int] | Iterable = ()) -> Edges:
    out = dict(edges)
    for a, b in drop:
        out.pop(edge_key(a, b), None)
    items = add.items() if isinstance(add, Mapping) else add
    for (a, b), col in items:
        out[edge_key(a, b)] = col
    return out


def _adjacency(edges: Edges) -> dict[Vertex, list[tuple[Vertex, int]]]:
    adj: dict[Vertex, list[tuple[Vertex, int]]] = {}
    for (i, j), col in edges.items():
        adj.setdefault(X(i), []).append((Y(j), col))
        adj.setdefault(Y(j), []).append((X(i), col))
    return adj


def _walk_path(edges: Edges, start: Vertex) -> TransversalWitness | None:
    adj = _adjacency(edges)
    if len(adj.get(start, ())) != 1:
        return None
    seq, cols, seen = [start], [], {start}
    cur = start
    while True:
        opts = [(v, a) for v, a in adj[cur] if v not in seen]
        if not opts:
            break
        if len(opts) > 1:
            return None
        v, a = opts[0]
        seq.append(v)
        cols.append(a)
        seen.add(v)
        cur = v
    if len(cols) != len(edges):
        return None
    return TransversalWitness.path(seq, cols)


def _walk_cycle(edges: Edges, start: Vertex) -> TransversalWitness | None:
    adj = _adjacency(edges)
    if any(len(v) != 2 for v in adj.values()) or start not in adj:
        return None
    seq, cols = [start], []
    prev, cur = None, start
    while True:
        nxt = [(v, a) for v, a in adj[cur] if v != prev]
        v, a = nxt[0]
        cols.append(a)
        if v == start:
            break
        seq.append(v)
        prev, cur = cur, v
        if len(seq) > len(edges):
            return None
    if len(seq) != len(edges) or len(seq) < 4:
        return None
    return TransversalWitness.cycle(seq, cols)


def _ok(c: GraphCollection, w: TransversalWitness | None, order: int | None = None,
        ends: tuple[Vertex, Vertex] | None = None) -> TransversalWitness | None:
    if w is None or not validate_witness(c, w).ok:
        return None
    if order is not None and w.order != order:
        return None
    if ends is not None and set(w.endpoints) != set(ends):
        return None
    return w


def _oriented(w: TransversalWitness, first: Vertex) -> TransversalWitness:
    return w if w.vertices[0] == first else w.reversed()


def _palette_min_degree(c: GraphCollection, palette: Iterable[int]) -> int:
    return min(min_degree(c.graphs[a]) for a in palette)


def _default_palette(c: GraphCollection) -> tuple[int, ...]:
    return tuple(range(min(c.m, 2 * c.n - 1)))


def _sub(c: GraphCollection, palette: Iterable[int]) -> GraphCollection:
    return GraphCollection(c.n, tuple(c.graphs[a] for a in palette))


def _uncovered(c: GraphCollection, vs: Iterable[Vertex]) -> list[Vertex]:
    covered = set(vs)
    return [v for v in c.vertices() if v not in covered]


def _free(palette: Iterable[int], used: Iterable[int]) -> list[int]:
    used = set(used)
    return [a for a in palette if a not in used]


# -- escape moves (maximality of a path, run forwards) ------------------------

def _extend_tail(c, vs, cols, free, pool, depth):
    if depth == 0:
        return TransversalWitness.path(vs, cols)
    tail = vs[-1]
    for u in pool:
        if u.side == tail.side:
            continue
        mask = c.colors_of(tail, u)
        for a in free:
            if mask >> a & 1:
                rest_free = [b for b in free if b != a]
                rest_pool = [w for w in pool if w != u]
                got = _extend_tail(c, vs + [u], cols + [a], rest_free, rest_pool, depth - 1)
                if got is not None:
                    return got
    return None


def _extend_once(c: GraphCollection, p: TransversalWitness, palette) -> TransversalWitness | None:
    free = _free(palette, p.assignment)
    pool = _uncovered(c, p.vertices)
    for w in (p, p.reversed()):
        got = _extend_tail(c, list(w.vertices), list(w.assignment), free, pool, 1)
        if got is not None:
            return got
    return None


def _escape(c: GraphCollection, cyc: TransversalWitness, palette, target: int) -> TransversalWitness | None:
    """Open the cycle at some vertex and grow the loose end to ``target`` vertices."""
    vs, cols, L = cyc.vertices, cyc.assignment, cyc.order
    free = _free(palette, cols)
    pool = _uncovered(c, vs)
    depth = target - L
    if depth <= 0:
        raise ValueError("escape target must exceed the cycle order")
    for k in range(L):
        for step in (1, -1):
            if step == 1:
                order = [vs[(k + 1 + i) % L] for i in range(L)]
                pcols = [cols[(k + 1 + i) % L] for i in range(L - 1)]
                freed = cols[k]
            else:
                order = [vs[(k - 1 - i) % L] for i in range(L)]
                pcols = [cols[(k - 2 - i) % L] for i in range(L - 1)]
                freed = cols[(k - 1) % L]
            got = _extend_tail(c, order, pcols, sorted(free + [freed]), pool, depth)
            if got is not None:
                return got
    return None


def _swap_escape(c: GraphCollection, cyc: TransversalWitness, palette, target: int) -> TransversalWitness | None:
    """Recolor one cycle edge with a spare color, then try to escape with the freed one."""
    free = _free(palette, cyc.assignment)
    for e, (a, b) in enumerate(cyc.edges()):
        mask = c.colors_of(a, b)
        for t in free:
            if mask >> t & 1:
                cols = list(cyc.assignment)
                cols[e] = t
                got = _escape(c, TransversalWitness.cycle(cyc.vertices, cols), palette, target)
                if got is not None:
                    return got
    return None


# -- path growth ----------------------------------------------------------------

def _check_path(c: GraphCollection, p: TransversalWitness, palette) -> None:
    if p.kind is not Kind.PATH or p.order < 2:
        raise ValueError("expected a path with at least one edge")
    rep = validate_witness(c, p)
    if not rep.ok:
        raise ValueError(f"invalid path: {[str(v) for v in rep.violations]}")
    if any(a not in palette for a in p.assignment):
        raise ValueError("path uses colors outside the palette")


def _rotations(c, p: TransversalWitness, palette):
    """Rotations at the first vertex: y' u_s P u_1 u_{s+1} P u_p."""
    vs, cols = list(p.vertices), list(p.assignment)
    P = len(vs)
    u1 = vs[0]
    free = _free(palette, cols)
    E = _path_edges(vs, cols)
    for yp in _uncovered(c, vs):
        if yp.side == u1.side:
            continue
        for m1 in free:
            s1 = {s for s in range(1, P) if vs[s].side != u1.side and c.has(m1, u1, vs[s])}
            for m2 in free:
                if m2 == m1:
                    continue
                s2 = {s for s in range(1, P) if vs[s - 1].side == u1.side and c.has(m2, yp, vs[s - 1])}
                for s in sorted(s1 & s2):
                    edges = _edit(E, drop=[(vs[s - 1], vs[s])],
                                  add=[((yp, vs[s - 1]), m2), ((u1, vs[s]), m1)])
                    w = _ok(c, _walk_path(edges, yp), P + 1)
                    if w is not None:
                        yield w, PivotSets({"head_links": frozenset(s1), "uncovered_links": frozenset(s2)})


def _closures(c, p: TransversalWitness, palette):
    """Cycles closed through both ends of the path."""
    vs, cols = list(p.vertices), list(p.assignment)
    P = len(vs)
    u1, up = vs[0], vs[-1]
    free = _free(palette, cols)
    E = _path_edges(vs, cols)
    U = lambda i: vs[i - 1]  # noqa: E731
    for m1 in free:
        for m3 in free:
            if m3 == m1:
                continue
            if up.side == u1.side:
                s3 = {s for s in range(2, P - 2, 2) if c.has(m1, u1, U(s + 2))}
                s4 = {s for s in range(2, P, 2) if c.has(m3, up, U(s))}
                for s in sorted(s3 & s4):
                    edges = _edit(E, drop=[(U(s), U(s + 1)), (U(s + 1), U(s + 2))],
                                  add=[((U(s), up), m3), ((u1, U(s + 2)), m1)])
                    w = _ok(c, _walk_cycle(edges, u1), P - 1)
                    if w is not None:
                        yield w, PivotSets({"head_closure": frozenset(s3), "tail_closure": frozenset(s4)})
            else:
                s3 = {s for s in range(1, P, 2) if c.has(m1, u1, U(s + 1))}
                s4 = {s for s in range(1, P, 2) if c.has(m3, up, U(s))}
                for s in sorted(s3 & s4):
                    edges = _edit(E, drop=[(U(s), U(s + 1))],
                                  add=[((U(s), up), m3), ((u1, U(s + 1)), m1)])
                    w = _ok(c, _walk_cycle(edges, u1), P)
                    if w is not None:
                        yield w, PivotSets({"head_closure": frozenset(s3), "tail_closure": frozenset(s4)})


def _leftover_facts(c: GraphCollection, p: TransversalWitness, palette) -> dict[str, object]:
    left = _uncovered(c, p.vertices)
    xs = [v for v in left if v.side is Side.X]
    ys = [v for v in left if v.side is Side.Y]
    complete = [a for a in _free(palette, p.assignment)
                if all(c.has(a, u, v) for u in xs for v in ys)]
    return {
        "leftover_X": tuple(xs),
        "leftover_Y": tuple(ys),
        "n_even": c.n % 2 == 0,
        "complete_leftover_colors": tuple(complete),
    }


def grow_path(c: GraphCollection, p: TransversalWitness, palette: Iterable[int] | None = None):
    """One growth step for a path of order below 2n-2.

    Returns ``LongerPath`` after a direct extension, a rotation, or a
    closure that could be reopened with leftover vertices attached, and
    ``Stuck`` otherwise. Stuck is the signal for the double-complete family.
    """
    palette = tuple(palette) if palette is not None else _default_palette(c)
    _check_path(c, p, palette)
    if p.order >= 2 * c.n - 2:
        raise ValueError(f"path already has order {p.order} >= 2n-2")
    if len(_free(palette, p.assignment)) < 3:
        raise ValueError("growth needs at least three unused colors")

    ext = _extend_once(c, p, palette)
    if ext is not None:
        return LongerPath(ext)

    for w in (p, p.reversed()):
        for got, _ in _rotations(c, w, palette):
            return LongerPath(got)

    first = None
    for w in (p, p.reversed()):
        for cyc, sets in _closures(c, w, palette):
            if first is None:
                first = (cyc, sets)
            got = _escape(c, cyc, palette, p.order + 1)
            if got is not None:
                return LongerPath(got)
    facts = {**_leftover_facts(c, p, palette), "rotation_found": False,
             "closure": None, "closure_sets": None}
    if first is not None:
        cyc, sets = first
        got = _swap_escape(c, cyc, palette, p.order + 1)
        if got is not None:
            return LongerPath(got)
        facts.update(closure=cyc, closure_sets=sets)
    return Stuck(p, facts)


# -- the bridging step between a (2n-2)-path and a (2n-2)-cycle ---------------

def _bridge(c: GraphCollection, vs, cols, l1: int, l2: int, a: Vertex, b: Vertex):
    """Try v_1 P v_s v_{2n-2} P v_{s+1} v_1 for both color orders."""
    L = len(vs)
    V = lambda i: vs[i - 1]  # noqa: E731
    E = _path_edges(vs, cols)
    sets = {}
    for la, lb, tag in ((l1, l2, ""), (l2, l1, "_swapped")):
        s5 = {s for s in range(1, L, 2) if c.has(lb, V(L), V(s))}
        s6 = {s for s in range(1, L, 2) if c.has(la, V(1), V(s + 1))}
        sets["tail_links" + tag], sets["head_links" + tag] = frozenset(s5), frozenset(s6)
        for s in sorted(s5 & s6):
            edges = _edit(E, drop=[(V(s), V(s + 1))], add=[((V(1), V(s + 1)), la), ((V(L), V(s)), lb)])
            w = _ok(c, _walk_cycle(edges, V(1)), L)
            if w is not None:
                return CycleFound(w)
    imps = []
    for la, lb in ((l1, l2), (l2, l1)):
        imps.append(Implication(EdgeFact(V(1), b, la), EdgeFact(V(L), a, lb)))
        imps.append(Implication(EdgeFact(V(L), a, la), EdgeFact(V(1), b, lb)))
    return ForcedEdges(tuple(imps), PivotSets(sets))


def claim2_bridge(c: GraphCollection, p: TransversalWitness, l1: int, l2: int,
                  palette: Iterable[int] | None = None):
    """Close a (2n-2)-path into a (2n-2)-cycle with its two spare colors.

    Returns ``CycleFound``, or ``ForcedEdges`` listing the implications
    that must hold when no such closure exists.
    """
    palette = tuple(palette) if palette is not None else _default_palette(c)
    _check_path(c, p, palette)
    if p.order != 2 * c.n - 2:
        raise ValueError("bridge needs a path of order 2n-2")
    if sorted((l1, l2)) != sorted(_free(palette, p.assignment)) or l1 == l2:
        raise ValueError("l1, l2 must be exactly the two unused palette colors")
    left = _uncovered(c, p.vertices)
    a = next(v for v in left if v.side == p.vertices[0].side)
    b = next(v for v in left if v.side != p.vertices[0].side)
    return _bridge(c, list(p.vertices), list(p.assignment), l1, l2, a, b)


# -- from a path of order 2n-2 to a configuration -----------------------------

def _make_config(c: GraphCollection, cyc: TransversalWitness, palette) -> CycleConfig:
    vs, cols = list(cyc.vertices), list(cyc.assignment)
    if vs[0].side is not Side.X:
        vs, cols = vs[1:] + vs[:1], cols[1:] + cols[:1]
    left = _uncovered(c, vs)
    x = next(v for v in left if v.side is Side.X)
    y = next(v for v in left if v.side is Side.Y)
    (free,) = _free(palette, cols)
    cfg = CycleConfig(TransversalWitness.cycle(vs, cols), x, y, free)
    check_config(c, cfg)
    return cfg


class _Done(Exception):
    def __init__(self, outcome):
        self.outcome = outcome


def _stuck_path_cases(c: GraphCollection, p: TransversalWitness, palette):
    """Case analysis turning a (2n-2)-path into a config or a Hamiltonian path."""
    n = c.n
    L = 2 * n - 2
    f0, f1 = _free(palette, p.assignment)

    def config(w):
        raise _Done(Config(_make_config(c, w, palette)))

    def ham(edges, start):
        w = _ok(c, _walk_path(edges, start), 2 * n)
        if w is None:
            return
        raise _Done(HamPath(w))

    def bridge_or_fact(vs_, cols_, l1, l2, a, b, fact: EdgeFact, why: str):
        res = _bridge(c, vs_, cols_, l1, l2, a, b)
        if isinstance(res, CycleFound):
            config(res.witness)
        if not fact.holds(c):
            raise InternalExhaustion(f"forced edge missing ({why})", (vs_, cols_, fact))

    try:
        combos = []
        for w in (p, p.reversed()):
            vs, cols = list(w.vertices), list(w.assignment)
            U = lambda i, vs=vs: vs[i - 1]  # noqa: E731
            left = _uncovered(c, vs)
            xh = next(v for v in left if v.side == vs[0].side)
            yh = next(v for v in left if v.side != vs[0].side)
            E = _path_edges(vs, cols)
            for fa in (f0, f1):
                if c.has(fa, U(1), U(L)):
                    cyc = _ok(c, _walk_cycle(_edit(E, add=[((U(1), U(L)), fa)]), U(1)), L)
                    if cyc is not None:
                        config(cyc)
            for fa, fb in ((f0, f1), (f1, f0)):
                if c.has(fa, U(L), xh) and c.has(fb, U(1), yh):
                    ham(_edit(E, add=[((yh, U(1)), fb), ((U(L), xh), fa)]), yh)
                combos.append((vs, cols, xh, yh, fa, fb))

        for vs, cols, x, y, fa, fb in combos:
            U = lambda i, vs=vs: vs[i - 1]  # noqa: E731
            col = lambda i, cols=cols: cols[i - 1]  # noqa: E731
            if c.has(fa, U(L), x):
                continue
            E = _path_edges(vs, cols)
            bridge_or_fact(vs, cols, fa, fb, x, y, EdgeFact(U(1), y, fb), "u_1 y")

            if c.has(fa, U(L - 2), x):
                E1 = _edit(E, drop=[(U(L - 2), U(L - 1)), (U(L - 1), U(L))],
                           add=[((y, U(1)), fb), ((U(L - 2), x), fa)])
                if c.has(col(L - 2), U(L), x):
                    ham(_edit(E1, add=[((U(L - 1), U(L)), col(L - 1)), ((U(L), x), col(L - 2))]), U(L - 1))
                p1 = _walk_path(E1, y)
                bridge_or_fact(list(p1.vertices), list(p1.assignment), col(L - 2), col(L - 1),
                               U(L), U(L - 1), EdgeFact(U(L - 1), y, col(L - 1)), "u_{2n-3} y")
                cyc = _walk_cycle(_edit(E, drop=[(U(L - 1), U(L))],
                                        add=[((y, U(1)), fb), ((U(L - 1), y), col(L - 1))]), y)
                if _ok(c, cyc, L) is None:
                    raise InternalExhaustion("cycle through y failed", (vs, cols))
                config(cyc)

            if c.has(fa, x, y):
                ham(_edit(E, add=[((x, y), fa), ((y, U(1)), fb)]), x)

            s7 = {s for s in range(2, L - 3, 2) if c.has(fb, U(1), U(s + 2))}
            s8 = {s for s in range(2, L - 3, 2) if c.has(fa, x, U(s))}
            for s in sorted(s7 & s8):
                if c.has(col(s + 1), U(L), U(s + 1)):
                    cyc = _walk_cycle(_edit(E, drop=[(U(s + 1), U(s + 2))],
                                            add=[((U(s + 1), U(L)), col(s + 1)), ((U(s + 2), U(1)), fb)]), U(1))
                    if _ok(c, cyc, L) is not None:
                        config(cyc)
                E2 = _edit(E, drop=[(U(s), U(s + 1)), (U(s + 1), U(s + 2))],
                           add=[((x, U(s)), fa), ((U(1), U(s + 2)), fb)])
                p2 = _walk_path(E2, x)
                if _ok(c, p2, L) is None:
                    continue
                bridge_or_fact(list(p2.vertices), list(p2.assignment), col(s), col(s + 1),
                               U(s + 1), y, EdgeFact(x, y, col(s)), "x y")
                if c.has(col(s + 1), U(s + 1), y):
                    ham(_edit(E2, add=[((U(s + 1), y), col(s + 1)), ((y, x), col(s))]), U(s + 1))
                E3 = _edit(E, drop=[(U(s + 1), U(s + 2))], add=[((U(1), U(s + 2)), fb)])
                p3 = _walk_path(E3, U(s + 1))
                if _ok(c, p3, L) is None:
                    continue
                res = _bridge(c, list(p3.vertices), list(p3.assignment), col(s + 1), fa, x, y)
                if isinstance(res, CycleFound):
                    config(res.witness)
            raise InternalExhaustion("no pivot closed the (2n-2)-path", (vs, cols))
        raise InternalExhaustion("no orientation satisfied the case split", p)
    except _Done as done:
        return done.outcome


@dataclass(frozen=True)
class Config:
    config: CycleConfig


def _start_path(c: GraphCollection, palette) -> TransversalWitness:
    for a in palette:
        for i in range(c.n):
            for j in range(c.n):
                if c.graphs[a].has_edge(i, j):
                    return TransversalWitness.path([X(i), Y(j)], [a])
    raise NotApplicable("the palette graphs have no edges")


def _long_path(c: GraphCollection, palette):
    """Drive growth to order >= 2n-2; returns a path or an outcome."""
    n = c.n
    p = _start_path(c, palette)
    while p.order < 2 * n - 2:
        res = grow_path(c, p, palette)
        if isinstance(res, LongerPath):
            p = res.witness
            continue
        cert = double_complete_certificate(_sub(c, palette))
        if cert is None:
            raise InternalExhaustion("path growth stuck", res)
        return Extremal(cert)
    if p.order == 2 * n:
        return HamPath(p)
    if p.order == 2 * n - 1:
        ext = _extend_once(c, p, palette)
        if ext is not None:
            return HamPath(ext)
        p = TransversalWitness.path(p.vertices[:-1], p.assignment[:-1])
    return p


def build_cycle_config(c: GraphCollection, palette: Iterable[int] | None = None):
    """Grow a partial transversal to a normalized (2n-2)-cycle configuration.

    Returns ``Config``, or ``HamPath`` when a shortcut already covers every
    vertex, or ``Extremal`` for the double-complete family.
    """
    n = c.n
    palette = tuple(palette) if palette is not None else _default_palette(c)
    _require_thm13(c, palette)
    if n < 3:
        raise NotApplicable("configurations need n >= 3")
    got = _long_path(c, palette)
    if not isinstance(got, TransversalWitness):
        return got
    return _stuck_path_cases(c, got, palette)


# -- cycle surgeries ----------------------------------------------------------

def _rewire(c: GraphCollection, cfg: CycleConfig, drop_positions: Iterable[int],
            add: list[tuple[tuple[Vertex, Vertex], int]], start: Vertex,
            ends: tuple[Vertex, Vertex] | None = None) -> TransversalWitness | None:
    U = cfg.u
    edges = _edit(cfg.edges(), drop=[(U(i), U(i + 1)) for i in drop_positions], add=add)
    return _ok(c, _walk_path(edges, start), 2 * c.n, ends)


def _check_k(cfg: CycleConfig, d: AuxiliaryDigraph, k: int) -> None:
    if k % 2 or not 2 <= k <= cfg.length:
        raise ValueError(f"k must be an even position in [2, {cfg.length}]")
    if set(d.out) != set(cfg.odd_positions()):
        raise ValueError("digraph does not belong to this configuration")


def _side_nbrs(c: GraphCollection, cfg: CycleConfig, color: int, v: Vertex) -> set[Vertex]:
    return {u for u in cfg.cycle.vertices if u.side != v.side and c.has(color, v, u)}


def surgery_lemma21(c: GraphCollection, cfg: CycleConfig, d: AuxiliaryDigraph, k: int) -> TransversalWitness | None:
    """x--y path from a Y-vertex u_k of high in-degree.

    Needs in-degree of u_k at least floor(n/2) and the spare-color
    neighbourhood of x together with the G_{col(k)} neighbourhood of y
    covering n-1 cycle vertices.
    """
    n = c.n
    _check_k(cfg, d, k)
    U, col, f, x, y = cfg.u, cfg.col, cfg.free_color, cfg.x, cfg.y
    if _palette_min_degree(c, cfg.palette) < ceil_half(n):
        raise NotApplicable("minimum degree below ceil(n/2)")
    if d.indeg(U(k)) < n // 2:
        raise NotApplicable(f"in-degree of u_{k} is {d.indeg(U(k))} < floor(n/2)")
    cover = _side_nbrs(c, cfg, f, x) | _side_nbrs(c, cfg, col(k), y)
    if len(cover) < n - 1:
        raise NotApplicable(f"neighbourhood union covers {len(cover)} < n-1 cycle vertices")

    s_minus = set(d.into[U(k)])
    for t in cfg.even_positions():
        if not c.has(f, x, U(t)):
            continue
        for step in (1, -1):
            if not c.has(col(k), y, U(t + step)):
                continue
            if step == 1:
                gone, tcol = t, col(t)
                if cfg.pos(t) == k:
                    w = _rewire(c, cfg, [t], [((y, U(t + 1)), col(k)), ((x, U(t)), f)], y, (x, y))
                    if w is not None:
                        return w
            else:
                gone, tcol = t - 1, col(t - 1)
            if c.has(tcol, U(k), U(k + 1)):
                w = _rewire(c, cfg, [gone, k], [((y, U(t + step)), col(k)), ((x, U(t)), f),
                                               ((U(k), U(k + 1)), tcol)], y, (x, y))
                if w is not None:
                    return w
            s_t = {s for s in cfg.odd_positions() if c.has(tcol, U(s + 1), U(k + 1))}
            banned = {cfg.pos(k - 1), cfg.pos(gone)}
            for s in sorted((s_minus & s_t) - banned):
                w = _rewire(c, cfg, [k, s, gone],
                            [((x, U(t)), f), ((U(k + 1), U(s + 1)), tcol),
                             ((U(k), U(s)), col(s)), ((y, U(t + step)), col(k))], y, (x, y))
                if w is not None:
                    return w
    raise InternalExhaustion(f"lemma surgery at k={k} found no pivot", (cfg, k))


def surgery_lemma22(c: GraphCollection, cfg: CycleConfig, d: AuxiliaryDigraph, k: int) -> TransversalWitness | None:
    """x--y path when d^-(u_k) + |N_{G_{col(k)}}(x) on C| >= n-1 and u_{k+1} y is spare-colored."""
    n = c.n
    _check_k(cfg, d, k)
    U, col, f, x, y = cfg.u, cfg.col, cfg.free_color, cfg.x, cfg.y
    if not c.has(f, U(k + 1), y):
        raise NotApplicable(f"u_{k + 1} y is not in the spare graph")
    nx = _side_nbrs(c, cfg, col(k), x)
    if d.indeg(U(k)) + len(nx) < n - 1:
        raise NotApplicable(f"d^-(u_{k}) + |N(x) on C| = {d.indeg(U(k)) + len(nx)} < n-1")
    if c.has(col(k), x, U(k)):
        w = _rewire(c, cfg, [k], [((x, U(k)), col(k)), ((U(k + 1), y), f)], x, (x, y))
        if w is not None:
            return w
    s_minus = set(d.into[U(k)])
    s_x = {s for s in cfg.odd_positions() if U(s + 1) in nx}
    for s in sorted((s_minus & s_x) - {cfg.pos(k - 1)}):
        w = _rewire(c, cfg, [s, k], [((x, U(s + 1)), col(k)), ((U(k), U(s)), col(s)), ((U(k + 1), y), f)], x, (x, y))
        if w is not None:
            return w
    raise InternalExhaustion(f"lemma surgery at k={k} found no pivot", (cfg, k))


def _try(fn, *args):
    try:
        return fn(*args)
    except NotApplicable:
        return None


# -- endgames -------------------------------------------------------------------

def _endgame13(c: GraphCollection, cfg: CycleConfig, d: AuxiliaryDigraph) -> TransversalWitness:
    n = c.n
    U, col, f, x, y = cfg.u, cfg.col, cfg.free_color, cfg.x, cfg.y
    evens = cfg.even_positions()

    def rw(drop, add, start):
        return _rewire(c, cfg, drop, add, start)

    if c.has(f, x, y):
        for s in sorted(d.into[y]):
            w = rw([s], [((x, y), f), ((y, U(s)), col(s))], x)
            if w:
                return w
        for t in evens:
            for s in evens:
                if not c.has(col(t), x, U(s)):
                    continue
                if s == t:
                    w = rw([t], [((y, x), f), ((x, U(t)), col(t))], y)
                elif c.has(col(s - 1), U(s - 1), U(t)):
                    w = rw([t, s - 1], [((x, y), f), ((x, U(s)), col(t)), ((U(s - 1), U(t)), col(s - 1))], y)
                else:
                    continue
                if w:
                    return w
        for t in evens:
            if c.has(f, x, U(t)) and c.has(col(t), x, y):
                w = rw([t], [((x, y), col(t)), ((x, U(t)), f)], y)
                if w:
                    return w
        raise InternalExhaustion("spare-colored xy edge admitted no shortcut", cfg)

    if d.indeg(y) >= n // 2:
        for s in sorted(d.into[y]):
            if c.has(f, U(s + 1), x):
                w = rw([s], [((x, U(s + 1)), f), ((U(s), y), col(s))], x)
                if w:
                    return w
        raise InternalExhaustion("high in-degree at y admitted no shortcut", cfg)

    for k in sorted(evens, key=lambda k: (-d.indeg(U(k)), k)):
        if d.indeg(U(k)) >= n // 2:
            w = _try(surgery_lemma21, c, cfg, d, k)
            if w is not None:
                return w

    cands = [k for k in evens if c.has(f, U(k + 1), y)]
    for k in sorted(cands, key=lambda k: (-d.indeg(U(k)), k)):
        if c.has(col(k), x, y):
            w = rw([k], [((x, y), col(k)), ((y, U(k + 1)), f)], x)
            if w:
                return w
        w = _try(surgery_lemma22, c, cfg, d, k)
        if w is not None:
            return w
    raise InternalExhaustion("no endgame move applied", (cfg, d))


def _endgame14(c: GraphCollection, cfg: CycleConfig, d: AuxiliaryDigraph) -> TransversalWitness:
    n = c.n
    U, col, f, x, y = cfg.u, cfg.col, cfg.free_color, cfg.x, cfg.y
    evens = cfg.even_positions()

    def rw(drop, add):
        return _rewire(c, cfg, drop, add, x, (x, y))

    if d.indeg(y) >= n // 2:
        for t in evens:
            if not c.has(f, x, U(t)):
                continue
            for s in sorted(d.into[y]):
                if c.has(col(t), U(s + 1), U(t + 1)):
                    w = rw([t, s], [((x, U(t)), f), ((U(s + 1), U(t + 1)), col(t)), ((U(s), y), col(s))])
                    if w:
                        return w
            if c.has(col(t), U(t + 1), y):
                w = rw([t], [((x, U(t)), f), ((U(t + 1), y), col(t))])
                if w:
                    return w
        raise InternalExhaustion("high in-degree at y admitted no x-y path", cfg)

    order = sorted(evens, key=lambda k: (-d.indeg(U(k)), k))
    for k in order:
        if d.indeg(U(k)) >= ceil_half(n):
            w = _try(surgery_lemma21, c, cfg, d, k)
            if w is not None:
                return w
    for k in order:
        if c.has(f, U(k + 1), y):
            w = _try(surgery_lemma22, c, cfg, d, k)
            if w is not None:
                return w
    raise InternalExhaustion("no endgame move applied", (cfg, d))


# -- theorem drivers ----------------------------------------------------------

ConfigHook = Callable[[GraphCollection, CycleConfig], None] | None


def _require_thm13(c: GraphCollection, palette) -> None:
    if len(palette) < 2 * c.n - 1:
        raise NotApplicable(f"need at least 2n-1 = {2 * c.n - 1} graphs")
    if _palette_min_degree(c, palette) < ceil_half(c.n):
        raise NotApplicable(f"minimum degree below ceil(n/2) = {ceil_half(c.n)}")


def _thm13_on(c: GraphCollection, palette, hook: ConfigHook):
    res = build_cycle_config(c, palette)
    if not isinstance(res, Config):
        return res
    cfg = res.config
    if hook is not None:
        hook(c, cfg)
    d = build_aux_digraph(c, cfg)
    return HamPath(_endgame13(c, cfg, d))


def solve_thm13(c: GraphCollection, on_config: ConfigHook = None):
    """``HamPath`` with a transversal Hamiltonian path, or ``Extremal``.

    Needs m >= 2n-1 and every graph of minimum degree at least ceil(n/2).
    """
    n = c.n
    if c.m < 2 * n - 1:
        raise NotApplicable(f"need at least 2n-1 = {2 * n - 1} graphs, got {c.m}")
    if min(min_degree(g) for g in c.graphs) < ceil_half(n):
        raise NotApplicable(f"minimum degree below ceil(n/2) = {ceil_half(n)}")
    if n <= 2:
        w = exact.find_thp(c)
        if w is not None:
            return HamPath(w)
        cert = double_complete_certificate(c)
        if cert is None:
            raise InternalExhaustion("small case without path or certificate", c)
        return Extremal(cert)

    palette = list(range(2 * n - 1))
    out = _thm13_on(c, palette, on_config)
    if isinstance(out, Extremal):
        cert = double_complete_certificate(c)
        if cert is not None:
            return Extremal(cert)
        ref = c.graphs[palette[0]].rows
        j = next(j for j in range(len(palette), c.m) if c.graphs[j].rows != ref)
        out = _thm13_on(c, palette[:-1] + [j], on_config)
        if not isinstance(out, HamPath):
            raise InternalExhaustion("palette swap did not leave the exceptional family", c)
    _assert_ham(c, out.witness)
    return out


def _assert_ham(c: GraphCollection, w: TransversalWitness, ends=None) -> None:
    if _ok(c, w, 2 * c.n, ends) is None:
        raise InternalExhaustion("engine produced an invalid witness", w)


def _delete_pair(c: GraphCollection, palette, x: Vertex, y: Vertex):
    xs = [i for i in range(c.n) if i != x.index]
    ys = [j for j in range(c.n) if j != y.index]
    graphs = []
    for a in palette:
        g = c.graphs[a]
        rows = tuple(sum(1 << jj for jj, j in enumerate(ys) if g.rows[i] >> j & 1) for i in xs)
        graphs.append(BipartiteGraph(c.n - 1, rows))
    h = GraphCollection(c.n - 1, tuple(graphs))

    def lift(v: Vertex) -> Vertex:
        return X(xs[v.index]) if v.side is Side.X else Y(ys[v.index])

    return h, lift, xs, ys


def _thm14_on(c: GraphCollection, palette, x: Vertex, y: Vertex, hook: ConfigHook):
    n = c.n
    h, lift, xs, ys = _delete_pair(c, palette, x, y)
    sub = solve_thm13(h, on_config=hook)
    if isinstance(sub, Extremal):
        for a in palette:
            for j in range(n):
                if j != y.index and not c.has(a, x, Y(j)):
                    raise InternalExhaustion("apex x not fully joined", (a, j))
                if j != x.index and not c.has(a, X(j), y):
                    raise InternalExhaustion("apex y not fully joined", (a, j))
        frame = FFrame.build(n, x.index, y.index,
                             {xs[i] for i in sub.certificate.x1}, {ys[j] for j in sub.certificate.y1})
        cert = f_family_certificate(_sub(c, palette), frame)
        if cert is None:
            raise InternalExhaustion("deleted pair is double complete but graphs are not F/F'", frame)
        return Extremal(cert)

    hw = sub.witness
    p = TransversalWitness.path([lift(v) for v in hw.vertices], [palette[a] for a in hw.assignment])
    if not validate_witness(c, p).ok:
        raise InternalExhaustion("lifted path invalid", p)
    res = _endpoint_path_cases(c, p, palette, x, y)
    if isinstance(res, HamPath):
        return res
    cfg = res
    if hook is not None:
        hook(c, cfg)
    d = build_aux_digraph(c, cfg)
    return HamPath(_endgame14(c, cfg, d))


def _endpoint_path_cases(c: GraphCollection, p: TransversalWitness, palette, x: Vertex, y: Vertex):
    L = 2 * c.n - 2
    f0, f1 = _free(palette, p.assignment)
    combos = []
    for w in (p, p.reversed()):
        vs, cols = list(w.vertices), list(w.assignment)
        U = lambda i, vs=vs: vs[i - 1]  # noqa: E731
        xh = x if vs[0].side is Side.X else y
        yh = y if xh is x else x
        E = _path_edges(vs, cols)
        for fa in (f0, f1):
            if c.has(fa, U(1), U(L)):
                cyc = _ok(c, _walk_cycle(_edit(E, add=[((U(1), U(L)), fa)]), U(1)), L)
                if cyc is not None:
                    return _make_config(c, cyc, palette)
        for fa, fb in ((f0, f1), (f1, f0)):
            if c.has(fb, U(L), xh) and c.has(fa, U(1), yh):
                got = _ok(c, _walk_path(_edit(E, add=[((yh, U(1)), fa), ((U(L), xh), fb)]), yh), 2 * c.n)
                if got is not None:
                    return HamPath(_oriented(got, x))
            combos.append((vs, cols, xh, fa, fb))
    for vs, cols, xh, fa, fb in combos:
        U = lambda i, vs=vs: vs[i - 1]  # noqa: E731
        if c.has(fb, U(L), xh):
            continue
        E = _path_edges(vs, cols)
        s9 = {s for s in range(3, L, 2) if c.has(fb, U(L), U(s))}
        s10 = {s for s in range(1, L - 2, 2) if c.has(fa, U(1), U(s + 1))}
        for s in sorted(s9 & s10):
            cyc = _walk_cycle(_edit(E, drop=[(U(s), U(s + 1))],
                                    add=[((U(L), U(s)), fb), ((U(1), U(s + 1)), fa)]), U(1))
            if _ok(c, cyc, L) is not None:
                return _make_config(c, cyc, palette)
        raise InternalExhaustion("no pivot closed the deleted-pair path", (vs, cols))
    raise InternalExhaustion("no orientation satisfied the case split", p)


def solve_thm14(c: GraphCollection, x: Vertex, y: Vertex, on_config: ConfigHook = None):
    """``HamPath`` from ``x`` to ``y``, or ``Extremal`` with an F/F' certificate.

    Needs m >= 2n-1 and every graph of minimum degree at least ceil((n+1)/2).
    """
    n = c.n
    if x.side is not Side.X or y.side is not Side.Y or not (0 <= x.index < n and 0 <= y.index < n):
        raise ValueError("endpoints must be an X-vertex and a Y-vertex in range")
    if c.m < 2 * n - 1:
        raise NotApplicable(f"need at least 2n-1 = {2 * n - 1} graphs, got {c.m}")
    if min(min_degree(g) for g in c.graphs) < ceil_half(n + 1):
        raise NotApplicable(f"minimum degree below ceil((n+1)/2) = {ceil_half(n + 1)}")
    if n <= 2:
        w = exact.find_thp_between(c, x, y)
        if w is None:
            raise InternalExhaustion("small case without an x-y path", c)
        return HamPath(w)

    palette = list(range(2 * n - 1))
    out = _thm14_on(c, palette, x, y, on_config)
    if isinstance(out, Extremal):
        frame = FFrame.build(n, out.certificate.x_star, out.certificate.y_star,
                             out.certificate.x1, out.certificate.y1)
        cert = f_family_certificate(c, frame)
        if cert is not None:
            return Extremal(cert)
        allowed = {make_F(frame).rows, make_F_prime(frame).rows}
        j = next(j for j in range(len(palette), c.m) if c.graphs[j].rows not in allowed)
        out = _thm14_on(c, palette[:-1] + [j], x, y, on_config)
        if not isinstance(out, HamPath):
            raise InternalExhaustion("palette swap did not leave the exceptional family", c)
    w = _oriented(out.witness, x)
    _assert_ham(c, w, (x, y))
    return HamPath(w)
