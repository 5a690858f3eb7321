"""Combinatorics of n labeled points in convex position.

Points are the indices 0..n-1 in counterclockwise order around a convex
polygon.  Every geometric predicate reduces to cyclic-order arithmetic on
those indices, so nothing in this module touches coordinates or floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

Edge = tuple[int, int]


def edge(a: int, b: int) -> Edge:
    """Canonical (min, max) form of an undirected edge."""
    if a == b:
        raise ValueError(f"degenerate edge ({a}, {b})")
    return (a, b) if a < b else (b, a)


def _check_point(p: int, n: int) -> None:
    if n < 3:
        raise ValueError(f"need at least 3 points, got n={n}")
    if not 0 <= p < n:
        raise ValueError(f"point {p} out of range for n={n}")


def is_boundary(e: Edge, n: int) -> bool:
    """True iff the edge joins two cyclically consecutive points."""
    a, b = edge(*e)
    _check_point(a, n)
    _check_point(b, n)
    d = b - a
    return d == 1 or d == n - 1


def edges_cross(e1: Edge, e2: Edge, n: int) -> bool:
    """True iff the two chords properly cross inside the polygon.

    Two chords cross exactly when their endpoints strictly interleave in
    cyclic order; chords sharing an endpoint never cross.
    """
    a, b = edge(*e1)
    c, d = edge(*e2)
    for p in (a, b, c, d):
        _check_point(p, n)
    if a in (c, d) or b in (c, d):
        return False
    span = (b - a) % n
    c_inside = 0 < (c - a) % n < span
    d_inside = 0 < (d - a) % n < span
    return c_inside != d_inside


@dataclass(frozen=True)
class DihedralElement:
    """A symmetry of the convex n-gon acting on point indices.

    Plain elements rotate: i -> (i + rotation) mod n.  Reflected elements
    flip: i -> (rotation - i) mod n.  There are exactly 2n of them.
    """

    n: int
    rotation: int
    reflected: bool = False

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError(f"need at least 3 points, got n={self.n}")
        object.__setattr__(self, "rotation", self.rotation % self.n)

    @classmethod
    def identity(cls, n: int) -> "DihedralElement":
        return cls(n, 0, False)

    def apply_point(self, p: int) -> int:
        _check_point(p, self.n)
        if self.reflected:
            return (self.rotation - p) % self.n
        return (self.rotation + p) % self.n

    def apply_edge(self, e: Edge) -> Edge:
        a, b = e
        return edge(self.apply_point(a), self.apply_point(b))

    def compose(self, other: "DihedralElement") -> "DihedralElement":
        """The element acting as self after other: x -> self(other(x))."""
        if self.n != other.n:
            raise ValueError("cannot compose symmetries of different n")
        if self.reflected:
            rot = self.rotation - other.rotation
        else:
            rot = self.rotation + other.rotation
        return DihedralElement(self.n, rot % self.n, self.reflected != other.reflected)

    def inverse(self) -> "DihedralElement":
        if self.reflected:
            return self
        return DihedralElement(self.n, (-self.rotation) % self.n, False)

    def point_table(self) -> list[int]:
        """Image of every point, as a lookup list."""
        if self.reflected:
            return [(self.rotation - p) % self.n for p in range(self.n)]
        return [(self.rotation + p) % self.n for p in range(self.n)]


def dihedral_elements(n: int) -> list[DihedralElement]:
    """All 2n symmetries: the n rotations first, then the n reflections."""
    if n < 3:
        raise ValueError(f"need at least 3 points, got n={n}")
    rotations = [DihedralElement(n, r, False) for r in range(n)]
    reflections = [DihedralElement(n, r, True) for r in range(n)]
    return rotations + reflections


def dihedral_apply(g: DihedralElement, x):
    """Apply a symmetry to a point, an edge, or a spanning path."""
    if isinstance(x, int):
        return g.apply_point(x)
    if isinstance(x, tuple) and len(x) == 2:
        return g.apply_edge(x)
    seq = getattr(x, "seq", None)
    if seq is not None:
        from .paths import SpanningPath

        table = g.point_table()
        return SpanningPath.from_seq((table[p] for p in seq), g.n)
    raise TypeError(f"cannot apply a dihedral element to {x!r}")


class EdgeTable:
    """Precomputed edge indexing and crossing masks for one point count.

    Edges are ranked by their canonical (min, max) pair in lexicographic
    order; an edge set is then a bitmask over those ranks.  cross_mask[r]
    has a bit for every edge that properly crosses edge r, which makes
    "does this chord cross anything in that set" a single AND.
    """

    __slots__ = (
        "n",
        "edge_count",
        "rank_of",
        "pair_of",
        "cross_mask",
        "boundary_rank",
        "boundary_rank_mask",
    )

    def __init__(self, n: int):
        if n < 3:
            raise ValueError(f"need at least 3 points, got n={n}")
        self.n = n
        pairs = list(combinations(range(n), 2))
        self.pair_of = pairs
        self.edge_count = len(pairs)
        rank = [[-1] * n for _ in range(n)]
        for r, (a, b) in enumerate(pairs):
            rank[a][b] = r
            rank[b][a] = r
        self.rank_of = rank
        cross = [0] * len(pairs)
        for r1, e1 in enumerate(pairs):
            for r2 in range(r1 + 1, len(pairs)):
                if edges_cross(e1, pairs[r2], n):
                    cross[r1] |= 1 << r2
                    cross[r2] |= 1 << r1
        self.cross_mask = cross
        # boundary edge j is (j, j+1 mod n); its rank in the global ordering
        self.boundary_rank = [rank[j][(j + 1) % n] for j in range(n)]
        mask = 0
        for r in self.boundary_rank:
            mask |= 1 << r
        self.boundary_rank_mask = mask


@lru_cache(maxsize=None)
def edge_table(n: int) -> EdgeTable:
    return EdgeTable(n)
