"""Complete backtracking search for transversal Hamiltonian paths and cycles.

The search only grows the vertex sequence. Colors are never branched on:
each new edge becomes a slot whose admissible colors are the graphs
containing it, and a slot->color matching is kept up to date by one
augmenting-path step per slot. A prefix survives only while that matching
saturates every slot. The final injection comes from a fresh matching pass
over the finished slot list.
"""
from __future__ import annotations

from functools import lru_cache

from .core import GraphCollection, Side, TransversalWitness, Vertex

COUNT_LIMIT = 5


def _lowbits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _match_slots(slot_masks: list[int]) -> list[int] | None:
    """Kuhn matching of slots to colors, slots in order, lowest color first."""
    owner: dict[int, int] = {}
    assign = [-1] * len(slot_masks)

    def augment(k: int, seen: set[int]) -> bool:
        for c in _lowbits(slot_masks[k]):
            if c in seen:
                continue
            seen.add(c)
            if c not in owner or augment(owner[c], seen):
                owner[c] = k
                assign[k] = c
                return True
        return False

    for k in range(len(slot_masks)):
        if not augment(k, set()):
            return None
    return assign


@lru_cache(maxsize=4096)
def _count_injections(slot_masks: tuple[int, ...]) -> int:
    states = {0: 1}
    for mask in slot_masks:
        nxt: dict[int, int] = {}
        for used, cnt in states.items():
            for c in _lowbits(mask & ~used):
                key = used | (1 << c)
                nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
        if not states:
            return 0
    return sum(states.values())


class _Search:
    """Search state over vertex ids: X_i -> i, Y_j -> n + j."""

    def __init__(self, c: GraphCollection):
        n = self.n = c.n
        self.c = c
        self.all = (1 << (2 * n)) - 1
        self.cmask = [[0] * (2 * n) for _ in range(2 * n)]
        self.nbr = [0] * (2 * n)
        for i in range(n):
            for j in range(n):
                mk = c.edge_colors[i][j]
                if mk:
                    self.cmask[i][n + j] = self.cmask[n + j][i] = mk
                    self.nbr[i] |= 1 << (n + j)
                    self.nbr[n + j] |= 1 << i
        self.slots: list[int] = []
        self.slot_color: list[int] = []
        self.owner: dict[int, int] = {}

    # -- vertex ids ---------------------------------------------------------
    def vid(self, v: Vertex) -> int:
        if not 0 <= v.index < self.n:
            raise ValueError(f"vertex {v} out of range for n={self.n}")
        return v.index if v.side is Side.X else self.n + v.index

    def vertex(self, k: int) -> Vertex:
        return Vertex(Side.X, k) if k < self.n else Vertex(Side.Y, k - self.n)

    # -- incremental Hall feasibility ---------------------------------------
    def _augment(self, k: int, seen: list[int]) -> bool:
        mask = self.slots[k] & ~seen[0]
        for c in _lowbits(mask):
            if c not in self.owner:
                self.owner[c] = k
                self.slot_color[k] = c
                return True
        for c in _lowbits(mask):
            if seen[0] >> c & 1:
                continue
            seen[0] |= 1 << c
            if self._augment(self.owner[c], seen):
                self.owner[c] = k
                self.slot_color[k] = c
                return True
        return False

    def push_slot(self, mask: int):
        """Add a slot; returns an undo token, or None if Hall fails."""
        token = (list(self.slot_color), dict(self.owner))
        self.slots.append(mask)
        self.slot_color.append(-1)
        if self._augment(len(self.slots) - 1, [0]):
            return token
        self.pop_slot(token)
        return None

    def pop_slot(self, token) -> None:
        self.slots.pop()
        self.slot_color, self.owner = token[0], token[1]
        del self.slot_color[len(self.slots):]

    # -- pruning --------------------------------------------------------------
    def _reach(self, start: int, allowed: int) -> int:
        seen = 1 << start
        frontier = seen
        while frontier:
            nxt = 0
            for v in _lowbits(frontier):
                nxt |= self.nbr[v] & allowed
            frontier = nxt & ~seen
            seen |= frontier
        return seen

    def viable(self, cur: int, visited: int, end: int | None) -> bool:
        rest = self.all & ~visited
        if not rest:
            return True
        avail = rest | (1 << cur)
        if end is None:
            if self._reach(cur, avail) & rest != rest:
                return False
            ones = 0
            for w in _lowbits(rest):
                d = (self.nbr[w] & avail).bit_count()
                if d == 0:
                    return False
                if d == 1:
                    ones += 1
                    if ones > 1:
                        return False
            return True
        inner = rest & ~(1 << end)
        if not inner:
            return bool(self.nbr[cur] >> end & 1)
        if not self.nbr[end] & inner:
            return False
        if self._reach(cur, inner | (1 << cur)) & inner != inner:
            return False
        for w in _lowbits(inner):
            if (self.nbr[w] & avail).bit_count() < 2:
                return False
        return True

    # -- path search ----------------------------------------------------------
    def ordered(self, cand: int, visited: int) -> list[int]:
        free = self.all & ~visited
        return sorted(_lowbits(cand), key=lambda v: ((self.nbr[v] & free).bit_count(), v))

    def extend(self, path: list[int], visited: int, end: int | None, collect=None) -> bool:
        target = 2 * self.n
        if len(path) == target:
            if collect is None:
                return True
            collect(path)
            return False
        cur = path[-1]
        cand = self.nbr[cur] & ~visited
        if end is not None and len(path) < target - 1:
            cand &= ~(1 << end)
        for v in self.ordered(cand, visited):
            token = self.push_slot(self.cmask[cur][v])
            if token is None:
                continue
            path.append(v)
            nv = visited | (1 << v)
            if self.viable(v, nv, end) and self.extend(path, nv, end, collect):
                return True
            path.pop()
            self.pop_slot(token)
        return False

    def witness_path(self, path: list[int]) -> TransversalWitness:
        masks = [self.cmask[a][b] for a, b in zip(path, path[1:])]
        assign = _match_slots(masks)
        assert assign is not None
        return TransversalWitness.path([self.vertex(v) for v in path], assign)

    def roots(self) -> list[int]:
        return sorted(range(self.n), key=lambda v: (self.nbr[v].bit_count(), v))


def _require_edges(c: GraphCollection, needed: int) -> None:
    if c.m < needed:
        raise ValueError(f"need at least {needed} graphs, collection has {c.m}")


def find_thp(c: GraphCollection) -> TransversalWitness | None:
    """A transversal Hamiltonian path, or None if the collection has none."""
    _require_edges(c, 2 * c.n - 1)
    s = _Search(c)
    for r in s.roots():
        path = [r]
        if s.viable(r, 1 << r, None) and s.extend(path, 1 << r, None):
            return s.witness_path(path)
    return None


def find_thp_between(c: GraphCollection, x: Vertex, y: Vertex) -> TransversalWitness | None:
    """A transversal Hamiltonian path from ``x`` (in X) to ``y`` (in Y)."""
    _require_edges(c, 2 * c.n - 1)
    if x.side is not Side.X or y.side is not Side.Y:
        raise ValueError("endpoints must be an X-vertex and a Y-vertex")
    s = _Search(c)
    rx, ry = s.vid(x), s.vid(y)
    path = [rx]
    if s.viable(rx, 1 << rx, ry) and s.extend(path, 1 << rx, ry):
        return s.witness_path(path)
    return None


def is_ham_connected(c: GraphCollection) -> tuple[bool, tuple[Vertex, Vertex] | None]:
    _require_edges(c, 2 * c.n - 1)
    for i in range(c.n):
        for j in range(c.n):
            x, y = Vertex(Side.X, i), Vertex(Side.Y, j)
            if find_thp_between(c, x, y) is None:
                return False, (x, y)
    return True, None


def find_partial_cycle(c: GraphCollection, length: int) -> TransversalWitness | None:
    """A transversal cycle on ``length`` vertices using distinct colors."""
    if length % 2 or length < 4 or length > 2 * c.n:
        raise ValueError(f"cycle order must be even and in [4, {2 * c.n}], got {length}")
    _require_edges(c, length)
    s = _Search(c)

    def grow(path: list[int], visited: int) -> bool:
        cur = path[-1]
        if len(path) == length:
            token = s.push_slot(s.cmask[cur][path[0]]) if s.cmask[cur][path[0]] else None
            if token is None:
                return False
            return True
        for v in s.ordered(s.nbr[cur] & ~visited, visited):
            token = s.push_slot(s.cmask[cur][v])
            if token is None:
                continue
            path.append(v)
            if grow(path, visited | (1 << v)):
                return True
            path.pop()
            s.pop_slot(token)
        return False

    for r in range(c.n):
        # r is the smallest X index on the cycle
        below = (1 << r) - 1
        path = [r]
        if grow(path, below | (1 << r)):
            masks = [s.cmask[a][b] for a, b in zip(path, path[1:] + path[:1])]
            assign = _match_slots(masks)
            assert assign is not None
            return TransversalWitness.cycle([s.vertex(v) for v in path], assign)
    return None


def count_thp(c: GraphCollection) -> int:
    """Number of (path, injection) pairs; a path and its reversal count once.

    Paths are oriented X-end first, which is the canonical orientation
    under (side, index) order.
    """
    if c.n > COUNT_LIMIT:
        raise ValueError(f"count_thp is limited to n <= {COUNT_LIMIT}")
    _require_edges(c, 2 * c.n - 1)
    s = _Search(c)
    total = 0

    def collect(path: list[int]) -> None:
        nonlocal total
        total += _count_injections(tuple(s.cmask[a][b] for a, b in zip(path, path[1:])))

    for r in range(c.n):
        s.extend([r], 1 << r, None, collect)
    return total
