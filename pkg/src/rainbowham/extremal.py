"""The two exceptional families: K_{n/2,n/2} u K_{n/2,n/2} and F / F'."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import (
    BipartiteGraph,
    ExtremalCertificate,
    FamilyKind,
    GraphCollection,
)


def _mask(indices: Iterable[int]) -> int:
    return sum(1 << i for i in indices)


def _check_subset(name: str, s: frozenset[int], n: int) -> None:
    if any(not 0 <= i < n for i in s):
        raise ValueError(f"{name} has indices outside [0, {n})")


def make_double_complete(n: int, x1: Iterable[int], y1: Iterable[int]) -> BipartiteGraph:
    """(X1 x Y1) u ((X - X1) x (Y - Y1))."""
    x1, y1 = frozenset(x1), frozenset(y1)
    if n % 2:
        raise ValueError("double complete graphs need even n")
    _check_subset("X1", x1, n)
    _check_subset("Y1", y1, n)
    if len(x1) != n // 2 or len(y1) != n // 2:
        raise ValueError(f"X1 and Y1 must have exactly {n // 2} elements")
    full = (1 << n) - 1
    m1 = _mask(y1)
    rows = tuple(m1 if i in x1 else full & ~m1 for i in range(n))
    return BipartiteGraph(n, rows)


@dataclass(frozen=True)
class FFrame:
    n: int
    x_star: int
    y_star: int
    x1: frozenset[int]
    x2: frozenset[int]
    y1: frozenset[int]
    y2: frozenset[int]

    def __post_init__(self):
        n = self.n
        if n % 2 == 0:
            raise ValueError("the F family needs odd n")
        half = (n - 1) // 2
        for name in ("x1", "x2", "y1", "y2"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if not (0 <= self.x_star < n and 0 <= self.y_star < n):
            raise ValueError("apex out of range")
        for name, part, apex in (("X", (self.x1, self.x2), self.x_star),
                                 ("Y", (self.y1, self.y2), self.y_star)):
            a, b = part
            if len(a) != half or len(b) != half:
                raise ValueError(f"{name} blocks must have {half} elements each")
            if a & b or apex in a or apex in b or (a | b | {apex}) != frozenset(range(n)):
                raise ValueError(f"{name} blocks and apex must partition {name}")

    @classmethod
    def build(cls, n: int, x_star: int, y_star: int, x1: Iterable[int], y1: Iterable[int]) -> "FFrame":
        x1, y1 = frozenset(x1), frozenset(y1)
        x2 = frozenset(range(n)) - x1 - {x_star}
        y2 = frozenset(range(n)) - y1 - {y_star}
        return cls(n, x_star, y_star, x1, x2, y1, y2)

    @classmethod
    def canonical(cls, n: int) -> "FFrame":
        """Apexes at index 0, first blocks at indices 1..(n-1)/2."""
        half = (n - 1) // 2
        return cls.build(n, 0, 0, range(1, half + 1), range(1, half + 1))

    def normalized(self) -> "FFrame":
        """Block labels swapped so that X1 holds the smallest non-apex index."""
        if self.x2 and (not self.x1 or min(self.x2) < min(self.x1)):
            return FFrame(self.n, self.x_star, self.y_star, self.x2, self.x1, self.y2, self.y1)
        return self


def make_F(frame: FFrame) -> BipartiteGraph:
    n = frame.n
    rows = [0] * n
    rows[frame.x_star] = _mask(frame.y1 | frame.y2)
    for block_x, block_y in ((frame.x1, frame.y1), (frame.x2, frame.y2)):
        m = _mask(block_y) | (1 << frame.y_star)
        for i in block_x:
            rows[i] = m
    return BipartiteGraph(n, tuple(rows))


def make_F_prime(frame: FFrame) -> BipartiteGraph:
    return make_F(frame).with_edge(frame.x_star, frame.y_star)


def recognize_double_complete(c: GraphCollection) -> tuple[frozenset[int], frozenset[int]] | None:
    n = c.n
    if n % 2 or not c.graphs:
        return None
    g = c.graphs[0]
    if any(h.rows != g.rows for h in c.graphs[1:]):
        return None
    y1 = frozenset(j for j in range(n) if g.rows[0] >> j & 1)
    x1 = frozenset(i for i in range(n) if g.rows[i] == g.rows[0])
    if len(x1) != n // 2 or len(y1) != n // 2:
        return None
    if make_double_complete(n, x1, y1).rows != g.rows:
        return None
    return x1, y1


def _frame_candidates(g: BipartiteGraph):
    n = g.n
    xs = [i for i in range(n) if g.rows[i].bit_count() >= n - 1]
    ys = [j for j in range(n) if g.cols[j].bit_count() >= n - 1]
    for xs_ in xs:
        for ys_ in ys:
            rest = [i for i in range(n) if i != xs_]
            if not rest:
                yield FFrame.build(n, xs_, ys_, (), ())
                continue
            a = rest[0]
            nb = g.rows[a] & ~(1 << ys_)
            x1 = [i for i in rest if g.rows[i] & ~(1 << ys_) == nb]
            y1 = [j for j in range(n) if nb >> j & 1]
            half = (n - 1) // 2
            if len(x1) != half or len(y1) != half:
                continue
            yield FFrame.build(n, xs_, ys_, x1, y1)


def f_variants(c: GraphCollection, frame: FFrame) -> tuple[bool, ...] | None:
    """Per-graph F' flags if every graph is F or F' on ``frame``."""
    f, fp = make_F(frame).rows, make_F_prime(frame).rows
    flags = []
    for g in c.graphs:
        if g.rows == f:
            flags.append(False)
        elif g.rows == fp:
            flags.append(True)
        else:
            return None
    return tuple(flags)


def recognize_F_family(c: GraphCollection) -> tuple[FFrame, tuple[bool, ...]] | None:
    """Find one frame on which every graph is F or F'.

    Apex candidates come from the first graph's degree profile and the
    blocks from its neighborhoods once the apexes are removed, so the cost
    is polynomial. When several frames fit (the 6-cycle at n=3 fits three)
    the first in apex order wins.
    """
    n = c.n
    if n % 2 == 0 or not c.graphs:
        return None
    for frame in _frame_candidates(c.graphs[0]):
        flags = f_variants(c, frame)
        if flags is not None:
            return frame.normalized(), flags
    return None


def double_complete_certificate(c: GraphCollection) -> ExtremalCertificate | None:
    found = recognize_double_complete(c)
    if found is None:
        return None
    return ExtremalCertificate(FamilyKind.DOUBLE_COMPLETE, found[0], found[1])


def f_family_certificate(c: GraphCollection, frame: FFrame) -> ExtremalCertificate | None:
    flags = f_variants(c, frame)
    if flags is None:
        return None
    frame = frame.normalized()
    return ExtremalCertificate(FamilyKind.F_FAMILY, frame.x1, frame.y1,
                               frame.x_star, frame.y_star, flags)


def certificate_holds(c: GraphCollection, cert: ExtremalCertificate) -> bool:
    """Re-check a certificate against the collection it claims to describe."""
    if cert.family is FamilyKind.DOUBLE_COMPLETE:
        try:
            g = make_double_complete(c.n, cert.x1, cert.y1)
        except ValueError:
            return False
        return all(h.rows == g.rows for h in c.graphs)
    try:
        frame = FFrame.build(c.n, cert.x_star, cert.y_star, cert.x1, cert.y1)
    except (ValueError, TypeError):
        return False
    return f_variants(c, frame) == tuple(cert.variants)
