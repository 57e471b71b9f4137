"""Data model for bipartite graph collections and the witness validator.

Vertices are ``(side, index)`` pairs; a graph on parts of size ``n`` stores
one bitmask row per X-vertex (bit ``j`` of row ``i`` is the edge X_i--Y_j).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence


class Side(enum.IntEnum):
    X = 0
    Y = 1

    def other(self) -> "Side":
        return Side.Y if self is Side.X else Side.X


class Vertex(NamedTuple):
    side: Side
    index: int

    def __str__(self) -> str:
        return f"{self.side.name}{self.index}"

    def __repr__(self) -> str:
        return f"Vertex({self.side.name}, {self.index})"


def X(i: int) -> Vertex:
    return Vertex(Side.X, i)


def Y(j: int) -> Vertex:
    return Vertex(Side.Y, j)


def edge_key(u: Vertex, v: Vertex) -> tuple[int, int]:
    """(x_index, y_index) of an X--Y pair given in either order."""
    if u.side == v.side:
        raise ValueError(f"{u} and {v} are on the same side")
    return (u.index, v.index) if u.side is Side.X else (v.index, u.index)


@dataclass(frozen=True)
class BipartiteGraph:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("part size must be positive")
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for i, r in enumerate(self.rows):
            if r < 0 or r & ~full:
                raise ValueError(f"row {i} has bits outside [0, {self.n})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "BipartiteGraph":
        rows = [0] * n
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            rows[i] |= 1 << j
        return cls(n, tuple(rows))

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[bool]]) -> "BipartiteGraph":
        n = len(matrix)
        rows = []
        for row in matrix:
            if len(row) != n:
                raise ValueError("adjacency matrix must be square")
            rows.append(sum(1 << j for j, b in enumerate(row) if b))
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "BipartiteGraph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "BipartiteGraph":
        return cls(n, ((1 << n) - 1,) * n)

    @cached_property
    def cols(self) -> tuple[int, ...]:
        return tuple(
            sum(1 << i for i in range(self.n) if self.rows[i] >> j & 1)
            for j in range(self.n)
        )

    @property
    def adj(self) -> list[list[bool]]:
        return [[bool(r >> j & 1) for j in range(self.n)] for r in self.rows]

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def adjacent(self, u: Vertex, v: Vertex) -> bool:
        i, j = edge_key(u, v)
        return self.has_edge(i, j)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(self.n) if self.rows[i] >> j & 1]

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def neighbors(self, v: Vertex) -> list[Vertex]:
        _check_vertex(v, self.n)
        if v.side is Side.X:
            mask, side = self.rows[v.index], Side.Y
        else:
            mask, side = self.cols[v.index], Side.X
        return [Vertex(side, k) for k in range(self.n) if mask >> k & 1]

    def with_edge(self, i: int, j: int, present: bool = True) -> "BipartiteGraph":
        rows = list(self.rows)
        if present:
            rows[i] |= 1 << j
        else:
            rows[i] &= ~(1 << j)
        return BipartiteGraph(self.n, tuple(rows))

    def toggled(self, i: int, j: int) -> "BipartiteGraph":
        rows = list(self.rows)
        rows[i] ^= 1 << j
        return BipartiteGraph(self.n, tuple(rows))


def _check_vertex(v: Vertex, n: int) -> None:
    if not 0 <= v.index < n:
        raise ValueError(f"vertex {v} out of range for n={n}")


def degree(g: BipartiteGraph, v: Vertex) -> int:
    _check_vertex(v, g.n)
    if v.side is Side.X:
        return g.rows[v.index].bit_count()
    return g.cols[v.index].bit_count()


def min_degree(g: BipartiteGraph) -> int:
    return min(min(r.bit_count() for r in g.rows), min(c.bit_count() for c in g.cols))


@dataclass(frozen=True)
class GraphCollection:
    n: int
    graphs: tuple[BipartiteGraph, ...]

    def __post_init__(self):
        object.__setattr__(self, "graphs", tuple(self.graphs))
        for k, g in enumerate(self.graphs):
            if g.n != self.n:
                raise ValueError(f"graph {k} has n={g.n}, collection has n={self.n}")

    @classmethod
    def of(cls, graphs: Sequence[BipartiteGraph]) -> "GraphCollection":
        if not graphs:
            raise ValueError("a collection needs at least one graph")
        return cls(graphs[0].n, tuple(graphs))

    @classmethod
    def copies(cls, g: BipartiteGraph, m: int) -> "GraphCollection":
        return cls(g.n, (g,) * m)

    @property
    def m(self) -> int:
        return len(self.graphs)

    def __len__(self) -> int:
        return len(self.graphs)

    def __getitem__(self, i: int) -> BipartiteGraph:
        return self.graphs[i]

    @cached_property
    def edge_colors(self) -> tuple[tuple[int, ...], ...]:
        """``edge_colors[i][j]``: bitmask of graph indices containing X_i--Y_j."""
        table = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                mask = 0
                for k, g in enumerate(self.graphs):
                    if g.rows[i] >> j & 1:
                        mask |= 1 << k
                row.append(mask)
            table.append(tuple(row))
        return tuple(table)

    def colors_of(self, u: Vertex, v: Vertex) -> int:
        i, j = edge_key(u, v)
        return self.edge_colors[i][j]

    def has(self, color: int, u: Vertex, v: Vertex) -> bool:
        i, j = edge_key(u, v)
        return bool(self.edge_colors[i][j] >> color & 1)

    def vertices(self) -> list[Vertex]:
        return [X(i) for i in range(self.n)] + [Y(j) for j in range(self.n)]

    def replace(self, k: int, g: BipartiteGraph) -> "GraphCollection":
        graphs = list(self.graphs)
        graphs[k] = g
        return GraphCollection(self.n, tuple(graphs))

    def permuted(self, order: Sequence[int]) -> "GraphCollection":
        """Collection whose graph ``k`` is ``self.graphs[order[k]]``."""
        return GraphCollection(self.n, tuple(self.graphs[k] for k in order))


def collection_min_degree(c: GraphCollection) -> int:
    if not c.graphs:
        raise ValueError("empty collection")
    return min(min_degree(g) for g in c.graphs)


class Kind(enum.Enum):
    PATH = "path"
    CYCLE = "cycle"


@dataclass(frozen=True)
class TransversalWitness:
    """A path or cycle with a positional color assignment.

    ``assignment[k]`` is the graph index for the edge between
    ``vertices[k]`` and ``vertices[k + 1]``; for a cycle the last entry
    colors the closing edge back to ``vertices[0]``.
    """

    kind: Kind
    vertices: tuple[Vertex, ...]
    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(Vertex(Side(v[0]), v[1]) for v in self.vertices))
        object.__setattr__(self, "assignment", tuple(self.assignment))

    @classmethod
    def path(cls, vertices: Sequence[Vertex], assignment: Sequence[int]) -> "TransversalWitness":
        return cls(Kind.PATH, tuple(vertices), tuple(assignment))

    @classmethod
    def cycle(cls, vertices: Sequence[Vertex], assignment: Sequence[int]) -> "TransversalWitness":
        return cls(Kind.CYCLE, tuple(vertices), tuple(assignment))

    @property
    def order(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[Vertex, Vertex]]:
        vs = self.vertices
        pairs = list(zip(vs, vs[1:]))
        if self.kind is Kind.CYCLE and len(vs) > 1:
            pairs.append((vs[-1], vs[0]))
        return pairs

    @property
    def endpoints(self) -> tuple[Vertex, Vertex]:
        return self.vertices[0], self.vertices[-1]

    def reversed(self) -> "TransversalWitness":
        if self.kind is Kind.PATH:
            return TransversalWitness.path(self.vertices[::-1], self.assignment[::-1])
        vs = (self.vertices[0],) + self.vertices[:0:-1]
        return TransversalWitness.cycle(vs, self.assignment[::-1])

    def relabeled(self, mapping: Sequence[int]) -> "TransversalWitness":
        return TransversalWitness(self.kind, self.vertices, tuple(mapping[a] for a in self.assignment))


@dataclass(frozen=True)
class Violation:
    rule: str
    position: int
    detail: str

    def __str__(self) -> str:
        return f"{self.rule}@{self.position}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}


def validate_witness(c: GraphCollection, w: TransversalWitness) -> ValidationReport:
    """Check every witness invariant against ``c`` and report all violations."""
    out: list[Violation] = []
    vs = w.vertices
    nedges = len(vs) if w.kind is Kind.CYCLE else max(len(vs) - 1, 0)

    if not vs:
        out.append(Violation("empty", 0, "no vertices"))
    if w.kind is Kind.CYCLE and (len(vs) % 2 or len(vs) < 4):
        out.append(Violation("cycle_length", len(vs), "cycle order must be even and at least 4"))
    if len(w.assignment) != nedges:
        out.append(Violation("assignment_length", len(w.assignment),
                             f"{nedges} edges but {len(w.assignment)} colors"))

    in_range = []
    for k, v in enumerate(vs):
        ok = 0 <= v.index < c.n
        in_range.append(ok)
        if not ok:
            out.append(Violation("vertex_range", k, f"{v} outside [0, {c.n})"))

    seen: dict[Vertex, int] = {}
    for k, v in enumerate(vs):
        if v in seen:
            out.append(Violation("distinct_vertices", k, f"{v} repeats position {seen[v]}"))
        else:
            seen[v] = k

    first_color: dict[int, int] = {}
    for k, a in enumerate(w.assignment):
        if not 0 <= a < c.m:
            out.append(Violation("color_range", k, f"color {a} outside [0, {c.m})"))
        elif a in first_color:
            out.append(Violation("injectivity", k, f"color {a} already used at edge {first_color[a]}"))
        else:
            first_color[a] = k

    for k, (u, v) in enumerate(w.edges()):
        if u.side == v.side:
            out.append(Violation("alternation", k, f"{u} and {v} on the same side"))
            continue
        if k >= len(w.assignment):
            continue
        a = w.assignment[k]
        iu, iv = k, (k + 1) % len(vs)
        if not (in_range[iu] and in_range[iv]) or not 0 <= a < c.m:
            continue
        if not c.has(a, u, v):
            out.append(Violation("membership", k, f"edge {u}-{v} not in graph {a}"))

    return ValidationReport(tuple(out))


def is_hamiltonian_path(c: GraphCollection, w: TransversalWitness) -> bool:
    return w.kind is Kind.PATH and w.order == 2 * c.n and validate_witness(c, w).ok


class FamilyKind(enum.Enum):
    DOUBLE_COMPLETE = "double_complete"
    F_FAMILY = "f_family"


@dataclass(frozen=True)
class ExtremalCertificate:
    """Membership proof for one of the two exceptional families.

    ``x1``/``y1`` are index sets; for the F family ``x_star``/``y_star`` are
    the apex indices and ``variants[i]`` is true when graph ``i`` is F'.
    """

    family: FamilyKind
    x1: frozenset[int]
    y1: frozenset[int]
    x_star: int | None = None
    y_star: int | None = None
    variants: tuple[bool, ...] = ()
