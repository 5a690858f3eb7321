"""Non-crossing spanning paths of a convex point set.

A spanning path visits all n points; it is non-crossing when no two of its
edges properly cross.  Paths are stored in a canonical orientation and keyed
by the bitmask of their edge set, which identifies them uniquely.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .geometry import Edge, EdgeTable, edge_table, is_boundary

MIN_POINTS = 5


class UnsupportedN(ValueError):
    """Point counts below 5 are rejected everywhere.

    With 3 or 4 points the flip graph degenerates (its diameter and clique
    structure do not follow the general laws), so nothing here supports them.
    """


class NotPermutation(ValueError):
    """The vertex sequence is not a permutation of 0..n-1."""


class CrossingEdges(ValueError):
    """Two edges of the proposed path properly cross."""

    def __init__(self, e1: Edge, e2: Edge):
        super().__init__(f"edges {e1} and {e2} cross")
        self.pair = (e1, e2)


class SpanningPath:
    """A non-crossing spanning path, canonically oriented.

    seq is the visiting order with seq[0] < seq[-1]; key is the bitmask of
    the path's edges over the canonical edge ranking of edge_table(n).
    Instances are immutable and hash/compare by (n, key).
    """

    __slots__ = ("n", "seq", "key")

    def __init__(self, n: int, seq: tuple[int, ...], key: int):
        self.n = n
        self.seq = seq
        self.key = key

    @classmethod
    def from_seq(cls, seq: Iterable[int], n: int) -> "SpanningPath":
        """Build from a visiting order, canonicalizing orientation.

        Performs no validity checks; use validate_path for untrusted input.
        """
        s = tuple(seq)
        if s[0] > s[-1]:
            s = s[::-1]
        rank = edge_table(n).rank_of
        key = 0
        for i in range(len(s) - 1):
            key |= 1 << rank[s[i]][s[i + 1]]
        return cls(n, s, key)

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.seq[0], self.seq[-1])

    @property
    def edges(self) -> tuple[Edge, ...]:
        s = self.seq
        return tuple(
            (s[i], s[i + 1]) if s[i] < s[i + 1] else (s[i + 1], s[i])
            for i in range(len(s) - 1)
        )

    @property
    def boundary_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if is_boundary(e, self.n))

    @property
    def diagonals(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if not is_boundary(e, self.n))

    @property
    def level(self) -> int:
        """Number of diagonals (non-boundary edges)."""
        return len(self.diagonals)

    def boundary_index_mask(self) -> int:
        """n-bit mask with bit j set iff boundary edge (j, j+1 mod n) is used."""
        t = edge_table(self.n)
        mask = 0
        for j, r in enumerate(t.boundary_rank):
            if self.key >> r & 1:
                mask |= 1 << j
        return mask

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SpanningPath)
            and self.n == other.n
            and self.key == other.key
        )

    def __hash__(self) -> int:
        return hash((self.n, self.key))

    def __repr__(self) -> str:
        return f"SpanningPath({'-'.join(map(str, self.seq))})"


def validate_path(seq: Iterable[int], n: int) -> SpanningPath:
    """Check a visiting order and return the canonical path.

    Raises UnsupportedN, NotPermutation, or CrossingEdges (with the
    offending pair) when the sequence is not a non-crossing spanning path.
    """
    if n < MIN_POINTS:
        raise UnsupportedN(f"need at least {MIN_POINTS} points, got n={n}")
    s = tuple(seq)
    if sorted(s) != list(range(n)):
        raise NotPermutation(f"sequence {s} is not a permutation of 0..{n - 1}")
    p = SpanningPath.from_seq(s, n)
    t = edge_table(n)
    ranks = [t.rank_of[p.seq[i]][p.seq[i + 1]] for i in range(n - 1)]
    for i in range(len(ranks)):
        for j in range(i + 1, len(ranks)):
            if t.cross_mask[ranks[i]] >> ranks[j] & 1:
                raise CrossingEdges(t.pair_of[ranks[i]], t.pair_of[ranks[j]])
    return p


def enumerate_paths(n: int) -> list[SpanningPath]:
    """All non-crossing spanning paths on n convex points, sorted by key.

    Construction: pick a start point, then repeatedly consume an extreme of
    the remaining contiguous cyclic interval of unvisited points (any other
    choice would strand points behind a chord).  Each undirected path arises
    from exactly two (start, choices) runs, so keeping only canonically
    oriented outputs yields every path exactly once: n * 2^(n-3) in total.
    """
    if n < MIN_POINTS:
        raise UnsupportedN(f"need at least {MIN_POINTS} points, got n={n}")
    out = []
    for start in range(n):
        for bits in range(1 << (n - 2)):
            seq = [start]
            lo = (start + 1) % n
            hi = (start - 1) % n
            for b in range(n - 2):
                if bits >> b & 1:
                    seq.append(hi)
                    hi = (hi - 1) % n
                else:
                    seq.append(lo)
                    lo = (lo + 1) % n
            seq.append(lo)  # lo == hi: last unvisited point
            if seq[0] < seq[-1]:
                out.append(SpanningPath.from_seq(seq, n))
    out.sort(key=lambda p: p.key)
    return out


def _neighbor_moves(
    seq: tuple[int, ...], key: int, t: EdgeTable
) -> Iterator[tuple[int, int, int, int]]:
    """All single edge-exchange moves from a path.

    Deleting edge i splits the path in two; a move reconnects the halves by
    a different edge between their free ends that crosses nothing remaining.
    Yields (cut index, left end, right end, resulting key), each resulting
    neighbor exactly once.
    """
    n = len(seq)
    rank = t.rank_of
    cross = t.cross_mask
    for i in range(n - 1):
        dr = rank[seq[i]][seq[i + 1]]
        base = key ^ (1 << dr)
        left_ends = (seq[0],) if i == 0 else (seq[0], seq[i])
        right_ends = (seq[-1],) if i == n - 2 else (seq[i + 1], seq[-1])
        for x in left_ends:
            for y in right_ends:
                r = rank[x][y]
                if r == dr or cross[r] & base:
                    continue
                yield i, x, y, base | (1 << r)


def neighbor_keys(p: SpanningPath) -> list[int]:
    """Keys of all paths reachable by one edge exchange."""
    t = edge_table(p.n)
    return [k for _, _, _, k in _neighbor_moves(p.seq, p.key, t)]


def path_neighbors(p: SpanningPath) -> set[SpanningPath]:
    """All paths differing from p by deleting one edge and adding one."""
    t = edge_table(p.n)
    seq = p.seq
    out = set()
    for i, x, y, _ in _neighbor_moves(seq, p.key, t):
        left = list(seq[: i + 1])
        if left[-1] != x:
            left.reverse()
        right = list(seq[i + 1 :])
        if right[0] != y:
            right.reverse()
        out.add(SpanningPath.from_seq(left + right, p.n))
    return out


def path_type(p: SpanningPath) -> int | None:
    """Sum of the two boundary-run lengths at the ends of the edge sequence.

    For a path whose edges are e_1..e_(n-1) in visiting order, the type is
    k + l where e_k is the first diagonal and e_(n-l) is the last.  Defined
    only for paths with at least two diagonals (returns None otherwise); for
    those, the degree in the flip graph is at most 3 * type.
    """
    n = p.n
    flags = [not is_boundary(e, n) for e in p.edges]
    if sum(flags) < 2:
        return None
    k = flags.index(True) + 1
    l = (n - 1) - (len(flags) - 1 - flags[::-1].index(True))
    return k + l
