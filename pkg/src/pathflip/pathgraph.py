"""The flip graph: vertices are non-crossing spanning paths, edges are
single edge exchanges.

build(n) enumerates the paths and wires adjacency through the canonical
key index, so construction touches each neighbor relation a constant
number of times instead of comparing all pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .geometry import edge_table
from .paths import SpanningPath, UnsupportedN, _neighbor_moves, enumerate_paths
from .rng import seeded_permutation


class NotAnEdge(ValueError):
    """The two vertices are not adjacent in the graph."""


class DiameterTooExpensive(RuntimeError):
    """Diameter was requested for a graph above the configured size cap."""


class AbstractGraph:
    """An unlabeled simple undirected graph as sorted adjacency lists."""

    __slots__ = ("adjacency",)

    def __init__(self, adjacency: list[list[int]]):
        self.adjacency = adjacency

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        """All edges (u, v) with u < v, in lexicographic order."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if v > u:
                    yield (u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Sequence[tuple[int, int]]) -> "AbstractGraph":
        adjacency: list[list[int]] = [[] for _ in range(n_vertices)]
        for u, v in edges:
            if not (0 <= u < n_vertices and 0 <= v < n_vertices) or u == v:
                raise ValueError(f"edge ({u}, {v}) out of range for {n_vertices} vertices")
            adjacency[u].append(v)
            adjacency[v].append(u)
        for a in adjacency:
            a.sort()
            for i in range(len(a) - 1):
                if a[i] == a[i + 1]:
                    raise ValueError("duplicate edge")
        return cls(adjacency)


class PathGraph:
    """Flip graph together with its path labels.

    labels[i] is the path at vertex i; index maps a path key back to its
    vertex id.  Vertex ids follow the sorted key order of enumerate_paths,
    so builds are deterministic.
    """

    __slots__ = ("n", "labels", "index", "adjacency")

    def __init__(
        self,
        n: int,
        labels: list[SpanningPath],
        index: dict[int, int],
        adjacency: list[list[int]],
    ):
        self.n = n
        self.labels = labels
        self.index = index
        self.adjacency = adjacency

    @property
    def vertex_count(self) -> int:
        return len(self.labels)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if v > u:
                    yield (u, v)

    def as_abstract(self) -> AbstractGraph:
        """The same graph without labels (adjacency is shared, not copied)."""
        return AbstractGraph(self.adjacency)


def build(n: int) -> PathGraph:
    """Construct the flip graph on n convex points."""
    labels = enumerate_paths(n)
    index = {p.key: i for i, p in enumerate(labels)}
    t = edge_table(n)
    adjacency = []
    for p in labels:
        ids = sorted(index[k] for _, _, _, k in _neighbor_moves(p.seq, p.key, t))
        adjacency.append(ids)
    return PathGraph(n, labels, index, adjacency)


def anonymize(g: PathGraph, seed: int) -> tuple[AbstractGraph, list[int]]:
    """Relabel vertices by a seeded permutation.

    Returns the shuffled graph and the secret: secret[abstract_id] is the
    original vertex id.  The permutation is reproducible from the seed (see
    rng.seeded_permutation for the exact generator).
    """
    count = g.vertex_count
    perm = seeded_permutation(count, seed)
    adjacency: list[list[int]] = [[] for _ in range(count)]
    secret = [0] * count
    for v in range(count):
        nv = perm[v]
        secret[nv] = v
        adjacency[nv] = sorted(perm[w] for w in g.adjacency[v])
    return AbstractGraph(adjacency), secret


@dataclass
class StatsReport:
    """Structural numbers of a graph; diameter is None when not computed."""

    vertex_count: int
    edge_count: int
    max_degree: int
    degree_histogram: dict[int, int] = field(default_factory=dict)
    diameter: float | None = None


def _diameter_bfs(adjacency: list[list[int]]) -> float:
    """Largest eccentricity via all-sources BFS (scipy, batched)."""
    import numpy as np
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import shortest_path

    count = len(adjacency)
    if count == 0:
        return 0
    indptr = [0]
    indices = []
    for nbrs in adjacency:
        indices.extend(nbrs)
        indptr.append(len(indices))
    mat = csr_matrix(
        (np.ones(len(indices), dtype=np.int8), np.array(indices), np.array(indptr)),
        shape=(count, count),
    )
    best = 0.0
    batch = 256
    for lo in range(0, count, batch):
        srcs = list(range(lo, min(lo + batch, count)))
        dist = shortest_path(mat, method="D", unweighted=True, indices=srcs)
        m = dist.max()
        if math.isinf(m):
            return math.inf
        best = max(best, float(m))
    return best


def stats(
    g: PathGraph | AbstractGraph,
    *,
    include_diameter: bool = False,
    diameter_cap: int = 10_000,
) -> StatsReport:
    """Degree statistics and, on request, the exact diameter.

    Raises DiameterTooExpensive when the diameter is requested for a graph
    with more than diameter_cap vertices.
    """
    adjacency = g.adjacency
    hist: dict[int, int] = {}
    for nbrs in adjacency:
        hist[len(nbrs)] = hist.get(len(nbrs), 0) + 1
    report = StatsReport(
        vertex_count=len(adjacency),
        edge_count=sum(len(a) for a in adjacency) // 2,
        max_degree=max(hist) if hist else 0,
        degree_histogram=dict(sorted(hist.items())),
    )
    if include_diameter:
        if len(adjacency) > diameter_cap:
            raise DiameterTooExpensive(
                f"{len(adjacency)} vertices exceeds diameter cap {diameter_cap}"
            )
        d = _diameter_bfs(adjacency)
        report.diameter = int(d) if not math.isinf(d) else math.inf
    return report


@dataclass(frozen=True)
class CliqueClassification:
    """Sizes of the two maximal cliques through one flip-graph edge."""

    intersection_size: int
    union_size: int


def _common_neighbors(adjacency: list[list[int]], u: int, v: int) -> Iterator[int]:
    """Intersection of two sorted adjacency lists."""
    a, b = adjacency[u], adjacency[v]
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            yield a[i]
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1


def classify_edge_cliques(g: PathGraph, u: int, v: int) -> CliqueClassification:
    """Classify every common neighbor of an adjacent pair (u, v).

    The paths adjacent to both u and v fall into exactly two camps: those
    containing all edges shared by u and v (they extend the intersection
    clique) and those contained in the union of u's and v's edges (the
    union clique).  Including u and v themselves, the intersection clique
    has size 2 or 4 and the union clique size 2 or n.
    """
    if v not in g.adjacency[u]:
        raise NotAnEdge(f"({u}, {v}) is not an edge")
    ku = g.labels[u].key
    kv = g.labels[v].key
    inter = ku & kv
    union = ku | kv
    n_inter = 0
    n_union = 0
    for w in _common_neighbors(g.adjacency, u, v):
        kw = g.labels[w].key
        in_inter = (kw & inter) == inter
        in_union = (kw & ~union) == 0
        if in_inter == in_union:
            raise AssertionError(
                f"common neighbor {w} of ({u}, {v}) fits {'both' if in_inter else 'neither'} clique form"
            )
        if in_inter:
            n_inter += 1
        else:
            n_union += 1
    return CliqueClassification(2 + n_inter, 2 + n_union)


def _union_clique_members(g: PathGraph, u: int, v: int) -> tuple[int, ...]:
    """Vertices of the union clique through (u, v), including u and v."""
    union = g.labels[u].key | g.labels[v].key
    members = [u, v]
    for w in _common_neighbors(g.adjacency, u, v):
        if (g.labels[w].key & ~union) == 0:
            members.append(w)
    return tuple(sorted(members))
