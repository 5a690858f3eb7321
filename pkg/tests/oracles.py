"""Independent reference implementations used to cross-check the package.

Everything here is deliberately done another way than the library: float
coordinates instead of cyclic index arithmetic, permutation filtering
instead of constructive enumeration, symmetric-difference counting instead
of flip moves, plain BFS instead of scipy.  Slow but obviously correct at
small n.
"""

import math
from collections import deque
from functools import lru_cache
from itertools import permutations


def circle_points(n):
    """n points on the unit circle, counterclockwise, index order."""
    step = 2.0 * math.pi / n
    return [(math.cos(i * step), math.sin(i * step)) for i in range(n)]


def _orient(p, q, r):
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def segments_cross(pts, e1, e2):
    """Proper interior crossing of two chords, by orientation tests.

    Circle points admit no collinear triple, so the signs are never zero
    for distinct indices and the classic test needs no special cases
    beyond shared endpoints.
    """
    if set(e1) & set(e2):
        return False
    a, b = pts[e1[0]], pts[e1[1]]
    c, d = pts[e2[0]], pts[e2[1]]
    return (_orient(a, b, c) > 0) != (_orient(a, b, d) > 0) and (
        _orient(c, d, a) > 0
    ) != (_orient(c, d, b) > 0)


def is_noncrossing_path(pts, seq):
    edges = list(zip(seq, seq[1:]))
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            if segments_cross(pts, edges[i], edges[j]):
                return False
    return True


@lru_cache(maxsize=None)
def path_seqs(n):
    """Every non-crossing spanning path as a tuple with seq[0] < seq[-1]."""
    pts = circle_points(n)
    return tuple(
        perm
        for perm in permutations(range(n))
        if perm[0] < perm[-1] and is_noncrossing_path(pts, perm)
    )


def edge_set(seq):
    return frozenset(frozenset(e) for e in zip(seq, seq[1:]))


def adjacent_pairs(edge_sets):
    """Index pairs of paths that differ in exactly one edge exchange."""
    m = len(edge_sets)
    return {
        (i, j)
        for i in range(m)
        for j in range(i + 1, m)
        if len(edge_sets[i] ^ edge_sets[j]) == 2
    }


def boundary_mask(seq, n):
    """Bit j set iff the path walks boundary edge (j, j+1 mod n)."""
    mask = 0
    for a, b in zip(seq, seq[1:]):
        if (b - a) % n == 1:
            mask |= 1 << a
        elif (a - b) % n == 1:
            mask |= 1 << b
    return mask


@lru_cache(maxsize=None)
def paths_by_boundary_mask(n):
    """All paths grouped by which boundary edges they use."""
    groups = {}
    for seq in path_seqs(n):
        groups.setdefault(boundary_mask(seq, n), []).append(seq)
    return groups


def bfs_distances(adjacency, source):
    dist = [-1] * len(adjacency)
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in adjacency[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def diameter_by_bfs(adjacency):
    best = 0
    for v in range(len(adjacency)):
        best = max(best, max(bfs_distances(adjacency, v)))
    return best


def is_automorphism(adjacency, perm):
    edges = {(v, w) for v in range(len(adjacency)) for w in adjacency[v]}
    return all((perm[v], perm[w]) in edges for v, w in edges)
