"""Recovery of every path label from the anonymous flip graph alone.

Given nothing but adjacency, the pipeline infers the point count from the
vertex count, pins down the n boundary-path vertices by degree, orders them
into a cycle via common-neighbor structure, fixes one of the 2n equivalent
labelings (the gauge), and then recovers each vertex's boundary edges,
endpoints, and diagonals level by level, where a vertex's level is both its
diagonal count and its graph distance from the boundary class.

Any input that is not the flip graph of a convex point set is rejected with
an error naming the stage that failed; the final stage re-derives the whole
adjacency from the recovered labels, so a wrong labeling can never be
returned silently.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .geometry import edge_table
from .paths import SpanningPath, _neighbor_moves
from .pathgraph import AbstractGraph, _common_neighbors


class NotAPathGraphError(Exception):
    """The input graph is not the flip graph of any convex point set."""

    stage: str = "unknown"

    def __init__(self, message: str, *, stage: str | None = None):
        super().__init__(message)
        if stage is not None:
            self.stage = stage


class NotAPathGraphOrder(NotAPathGraphError):
    stage = "infer_n"


class BoundaryCountMismatch(NotAPathGraphError):
    stage = "find_boundary_vertices"


class NotACycle(NotAPathGraphError):
    stage = "build_boundary_cycle"


class Disconnected(NotAPathGraphError):
    stage = "compute_levels"


class EmptyLowerNeighborhood(NotAPathGraphError):
    stage = "recover_boundary_sets"


class InconsistentRecord(NotAPathGraphError):
    stage = "recover_boundary_sets"


class ArcStructureInvalid(NotAPathGraphError):
    stage = "recover_paths"


class NoLeafFound(NotAPathGraphError):
    stage = "recover_paths"


class NoCompletion(NotAPathGraphError):
    stage = "complete_path"


class AmbiguousCompletion(NotAPathGraphError):
    stage = "complete_path"


class AdjacencyMismatch(NotAPathGraphError):
    stage = "validate_result"


@dataclass
class ReconState:
    """Working data of one reconstruction run.

    gauge maps each boundary-path vertex to the index j of its one missing
    boundary edge (j, j+1 mod n).  brecord[v] is the n-bit mask of boundary
    edges present in v's path.  op_count is a coarse proxy for basic
    operations (neighbor-record reads), used to watch asymptotic behavior.
    """

    graph: AbstractGraph
    n: int
    boundary_cycle: list[int]
    gauge: dict[int, int]
    levels: list[int]
    brecord: list[int] | None = None
    endpoints: list[tuple[int, int] | None] = field(default_factory=list)
    paths: list[SpanningPath | None] = field(default_factory=list)
    op_count: int = 0


@dataclass
class ReconResult:
    """Recovered labeling: paths[v] is the path at abstract vertex v."""

    n: int
    paths: list[SpanningPath]
    gauge: dict[int, int]
    boundary_cycle: list[int]
    levels: list[int]
    op_count: int = 0


def infer_n(vertex_count: int) -> int:
    """The unique n >= 5 with n * 2^(n-3) vertices, if one exists."""
    n = 5
    while n * (1 << (n - 3)) < vertex_count:
        n += 1
    if n * (1 << (n - 3)) != vertex_count:
        raise NotAPathGraphOrder(
            f"{vertex_count} vertices does not equal n * 2^(n-3) for any n >= 5"
        )
    return n


def find_boundary_vertices(g: AbstractGraph, n: int | None = None) -> set[int]:
    """The n vertices of maximal degree 3n - 7 (the all-boundary paths)."""
    if n is None:
        n = infer_n(g.vertex_count)
    want = 3 * n - 7
    top = max(g.degree(v) for v in range(g.vertex_count))
    if top != want:
        raise BoundaryCountMismatch(f"max degree {top}, expected {want}")
    found = {v for v in range(g.vertex_count) if g.degree(v) == want}
    if len(found) != n:
        raise BoundaryCountMismatch(
            f"{len(found)} vertices of degree {want}, expected exactly {n}"
        )
    return found


def build_boundary_cycle(g: AbstractGraph, boundary: set[int]) -> list[int]:
    """Order the boundary-path vertices cyclically.

    Two boundary paths miss boundary edges that share a point exactly when
    the pair has no common neighbor outside the boundary class (such a
    neighbor would complete a 4-clique of paths extending their shared
    edges).  That relation must form a single cycle.
    """
    members = sorted(boundary)
    ring: dict[int, list[int]] = {v: [] for v in members}
    for i, u in enumerate(members):
        for v in members[i + 1 :]:
            if v not in g.adjacency[u]:
                continue
            if any(w not in boundary for w in _common_neighbors(g.adjacency, u, v)):
                continue
            ring[u].append(v)
            ring[v].append(u)
    for v in members:
        if len(ring[v]) != 2:
            raise NotACycle(
                f"boundary vertex {v} has {len(ring[v])} cycle neighbors, expected 2"
            )
    order = [members[0]]
    prev = None
    cur = members[0]
    for _ in range(len(members) - 1):
        a, b = ring[cur]
        nxt = b if a == prev else a
        order.append(nxt)
        prev, cur = cur, nxt
    if len(set(order)) != len(members) or order[0] not in ring[order[-1]]:
        raise NotACycle("boundary relation is not a single cycle")
    return order


def fix_gauge(cycle: list[int]) -> dict[int, int]:
    """Pin one of the 2n equivalent labelings.

    The smallest vertex id on the cycle gets boundary edge (0, 1) as its
    missing edge; traversal proceeds toward its smaller-id cycle neighbor,
    assigning (1, 2), (2, 3), and so on.
    """
    n = len(cycle)
    i0 = cycle.index(min(cycle))
    if cycle[(i0 + 1) % n] < cycle[(i0 - 1) % n]:
        ordered = [cycle[(i0 + t) % n] for t in range(n)]
    else:
        ordered = [cycle[(i0 - t) % n] for t in range(n)]
    return {v: j for j, v in enumerate(ordered)}


def compute_levels(g: AbstractGraph, boundary: set[int]) -> list[int]:
    """Distance of every vertex from the boundary class (multi-source BFS)."""
    levels = [-1] * g.vertex_count
    queue = deque(sorted(boundary))
    for v in queue:
        levels[v] = 0
    while queue:
        v = queue.popleft()
        for w in g.adjacency[v]:
            if levels[w] < 0:
                levels[w] = levels[v] + 1
                queue.append(w)
    missing = levels.count(-1)
    if missing:
        raise Disconnected(f"{missing} vertices unreachable from the boundary class")
    return levels


def _boundary_sets_fast(state: ReconState) -> list[int]:
    """Propagate boundary-edge sets upward by level.

    A neighbor one level down differs by swapping one diagonal for one
    boundary edge, so its set strictly contains this vertex's; at least two
    distinct boundary edges get added across the lower neighbors, so the
    intersection over all of them is exact.
    """
    g, n, levels = state.graph, state.n, state.levels
    full = (1 << n) - 1
    rec = [0] * g.vertex_count
    buckets: list[list[int]] = [[] for _ in range(max(levels) + 1)]
    for v, lv in enumerate(levels):
        buckets[lv].append(v)
    for v in buckets[0]:
        rec[v] = full ^ (1 << state.gauge[v])
    for lv in range(1, len(buckets)):
        want_bits = n - 1 - lv
        for v in buckets[lv]:
            m = full
            found = False
            for u in g.adjacency[v]:
                if levels[u] == lv - 1:
                    m &= rec[u]
                    found = True
            state.op_count += len(g.adjacency[v]) + n
            if not found:
                raise EmptyLowerNeighborhood(
                    f"vertex {v} at level {lv} has no neighbor at level {lv - 1}"
                )
            if m.bit_count() != want_bits:
                raise InconsistentRecord(
                    f"vertex {v} at level {lv}: {m.bit_count()} boundary edges, expected {want_bits}"
                )
            rec[v] = m
    return rec


def _boundary_sets_reference(state: ReconState) -> list[int]:
    """Recover boundary-edge sets from distances to each boundary vertex.

    The boundary edges missing from v's path are exactly the missing edges
    of the boundary paths at distance level(v) from v.  Costs one BFS per
    boundary vertex; kept as an independent check on the fast method.
    """
    g, n, levels = state.graph, state.n, state.levels
    full = (1 << n) - 1
    missing = [0] * g.vertex_count
    for w, j in state.gauge.items():
        dist = [-1] * g.vertex_count
        dist[w] = 0
        queue = deque([w])
        while queue:
            v = queue.popleft()
            for x in g.adjacency[v]:
                if dist[x] < 0:
                    dist[x] = dist[v] + 1
                    queue.append(x)
        bit = 1 << j
        for v in range(g.vertex_count):
            if dist[v] == levels[v]:
                missing[v] |= bit
    rec = [0] * g.vertex_count
    for v in range(g.vertex_count):
        if missing[v].bit_count() != levels[v] + 1:
            raise InconsistentRecord(
                f"vertex {v} at level {levels[v]}: {missing[v].bit_count()} boundary "
                f"vertices at matching distance, expected {levels[v] + 1}"
            )
        rec[v] = full ^ missing[v]
    return rec


def recover_boundary_sets(
    g: AbstractGraph,
    state: ReconState,
    *,
    method: str = "fast",
    cross_check: bool = False,
) -> list[int]:
    """Boundary-edge masks for every vertex, by either method.

    With cross_check both methods run and any disagreement is an error.
    """
    if method not in ("fast", "reference"):
        raise ValueError(f"unknown method {method!r}")
    fast = _boundary_sets_fast(state) if method == "fast" or cross_check else None
    ref = _boundary_sets_reference(state) if method == "reference" or cross_check else None
    if cross_check and fast is not None and ref is not None and fast != ref:
        v = next(i for i, (a, b) in enumerate(zip(fast, ref)) if a != b)
        raise InconsistentRecord(
            f"fast and reference boundary sets disagree at vertex {v}"
        )
    return fast if method == "fast" else ref


def _arcs_from_mask(mask: int, n: int) -> list[list[int]]:
    """Split the boundary cycle at the missing edges into point arcs.

    Returns the arcs in cyclic order, rotated so the arc containing the
    smallest first point comes first.  Single-point arcs are kept.
    """
    gaps = [j for j in range(n) if not (mask >> j) & 1]
    if not gaps:
        raise ArcStructureInvalid("no missing boundary edge")
    arcs = []
    total = 0
    for gi, gj in enumerate(gaps):
        start = (gj + 1) % n
        end = gaps[(gi + 1) % len(gaps)]
        pts = [start]
        p = start
        while p != end:
            p = (p + 1) % n
            pts.append(p)
        arcs.append(pts)
        total += len(pts)
    if total != n:
        raise ArcStructureInvalid("arcs do not tile the point set")
    rot = min(range(len(arcs)), key=lambda i: arcs[i][0])
    return arcs[rot:] + arcs[:rot]


def complete_path(arcs: list[list[int]], leaf: int) -> SpanningPath:
    """The unique path with the given boundary arcs and the given leaf.

    Starting from the leaf, the path must consume its whole arc, then
    repeatedly jump to an extreme of the remaining contiguous run of arcs;
    at every jump exactly one of the two extremes is reachable by a
    diagonal (the other would re-use a missing boundary edge), which makes
    the completion deterministic.  Raises NoCompletion or
    AmbiguousCompletion when that uniqueness breaks, which cannot happen
    for arcs coming from a genuine path.
    """
    n = sum(len(a) for a in arcs)
    seen = sorted(p for a in arcs for p in a)
    if seen != list(range(n)):
        raise ArcStructureInvalid("arcs are not a partition of the points")
    k = len(arcs)
    for i, arc in enumerate(arcs):
        for t in range(len(arc) - 1):
            if arc[t + 1] != (arc[t] + 1) % n:
                raise ArcStructureInvalid(f"arc {arc} is not contiguous")
        if k > 1 and arcs[(i + 1) % k][0] != (arc[-1] + 1) % n:
            raise ArcStructureInvalid("arcs are not in cyclic order with single-edge gaps")
    i0 = None
    for i, arc in enumerate(arcs):
        if leaf in (arc[0], arc[-1]) and (len(arc) > 1 or k == 1):
            i0 = i
            break
    if i0 is None:
        raise NoCompletion(f"{leaf} is not an endpoint of a non-degenerate arc")
    first = arcs[i0] if arcs[i0][0] == leaf else arcs[i0][::-1]
    seq = list(first)
    lo = (i0 + 1) % k
    hi = (i0 - 1) % k
    for _ in range(k - 1):
        cur = seq[-1]
        candidates = [(arcs[lo][0], True)]
        if lo != hi or arcs[hi][-1] != arcs[lo][0]:
            candidates.append((arcs[hi][-1], False))
        valid = [c for c in candidates if (c[0] - cur) % n not in (1, n - 1)]
        if not valid:
            raise NoCompletion(f"no diagonal continues the path at point {cur}")
        if len(valid) > 1:
            raise AmbiguousCompletion(f"two diagonals continue the path at point {cur}")
        point, take_lo = valid[0]
        if take_lo:
            seq.extend(arcs[lo])
            lo = (lo + 1) % k
        else:
            seq.extend(reversed(arcs[hi]))
            hi = (hi - 1) % k
    return SpanningPath.from_seq(seq, n)


def recover_level1(v: int, state: ReconState) -> SpanningPath:
    """Determine the single diagonal of a level-1 vertex.

    Its boundary edges form two arcs; the diagonal joins an endpoint of one
    to an endpoint of the other, and only two of the four pairings give a
    path with these exact boundary edges.  Take the arc with at least two
    edges, call its first point a (its neighbor b) and last point c, and
    the other arc's points d..y continuing from c.  A level-2 neighbor
    missing the edge (a, b) exists exactly when the diagonal is (a, d);
    otherwise it is (c, y).
    """
    g, n = state.graph, state.n
    arcs = _arcs_from_mask(state.brecord[v], n)
    if len(arcs) != 2:
        raise ArcStructureInvalid(f"level-1 vertex {v} has {len(arcs)} arcs, expected 2")
    if len(arcs[0]) < 2 or len(arcs[1]) < 2:
        raise ArcStructureInvalid(f"level-1 vertex {v} has a single-point arc")
    big = [i for i in range(2) if len(arcs[i]) >= 3]
    if not big:
        raise ArcStructureInvalid(f"level-1 vertex {v} has no arc with two edges")
    if len(big) == 2:
        t = edge_table(n)
        rank_min = [
            min(t.rank_of[arc[i]][arc[i + 1]] for i in range(len(arc) - 1))
            for arc in arcs
        ]
        pick = 0 if rank_min[0] < rank_min[1] else 1
    else:
        pick = big[0]
    p1, p2 = arcs[pick], arcs[1 - pick]
    a, c = p1[0], p1[-1]
    state.op_count += len(g.adjacency[v]) + n
    witness = any(
        state.levels[w] == 2 and not (state.brecord[w] >> a) & 1
        for w in g.adjacency[v]
    )
    # diagonal (a, d) leaves c as a path end; diagonal (c, y) leaves a
    return complete_path([p1, p2], c if witness else a)


def recover_leaf(v: int, state: ReconState) -> int:
    """One path end of a vertex at level two or more.

    An endpoint a of a non-degenerate arc (other endpoint c, with b across
    the adjacent missing boundary edge) is a path leaf exactly when some
    neighbor one level down contains the edge (a, b) and has c as a path
    end; that neighbor is the path with a's diagonal swapped for (a, b).
    """
    g, n, lv = state.graph, state.n, state.levels[v]
    arcs = _arcs_from_mask(state.brecord[v], n)
    if len(arcs) != lv + 1:
        raise ArcStructureInvalid(
            f"vertex {v} at level {lv} has {len(arcs)} arcs, expected {lv + 1}"
        )
    state.op_count += n
    for arc in arcs:
        if len(arc) < 2:
            continue
        ends = (
            (arc[0], (arc[0] - 1) % n, arc[-1]),  # b just before a: edge (a-1, a)
            (arc[-1], arc[-1], arc[0]),  # b just after a: edge (a, a+1)
        )
        for a, gap_index, c in ends:
            state.op_count += len(g.adjacency[v])
            for w in g.adjacency[v]:
                if state.levels[w] != lv - 1:
                    continue
                if not (state.brecord[w] >> gap_index) & 1:
                    continue
                ep = state.endpoints[w]
                if ep is not None and c in ep:
                    return a
    raise NoLeafFound(f"no arc endpoint of vertex {v} passes the leaf test")


def _boundary_path_seq(j: int, n: int) -> list[int]:
    """The all-boundary path missing edge (j, j+1 mod n)."""
    return [(j + 1 + t) % n for t in range(n)]


def _validate_result(g: AbstractGraph, n: int, paths: list[SpanningPath]) -> None:
    """Re-derive the whole adjacency from the labels and compare.

    Guarantees no wrong labeling is ever returned: a pass means the input
    is exactly the flip graph of the recovered labels.
    """
    index: dict[int, int] = {}
    for v, p in enumerate(paths):
        if p.key in index:
            raise AdjacencyMismatch(f"vertices {index[p.key]} and {v} got the same path")
        index[p.key] = v
    t = edge_table(n)
    for v, p in enumerate(paths):
        ids = []
        for _, _, _, k in _neighbor_moves(p.seq, p.key, t):
            w = index.get(k)
            if w is None:
                raise AdjacencyMismatch(
                    f"vertex {v}: a flip of its path is missing from the vertex set"
                )
            ids.append(w)
        ids.sort()
        if ids != g.adjacency[v]:
            raise AdjacencyMismatch(f"adjacency of vertex {v} does not match its label")


def _run_stage(name: str, fn, *args, **kwargs):
    """Run one pipeline stage, tagging unexpected failures with its name."""
    try:
        return fn(*args, **kwargs)
    except NotAPathGraphError:
        raise
    except (KeyboardInterrupt, SystemExit, MemoryError):
        raise
    except Exception as exc:
        raise NotAPathGraphError(f"{name} failed: {exc}", stage=name) from exc


def reconstruct_all(g: AbstractGraph, *, cross_check: bool = False) -> ReconResult:
    """Recover the full labeling of an anonymous flip graph.

    The result is unique up to the 2n symmetries of the point set; the
    gauge stage picks one representative deterministically.  Raises
    NotAPathGraphError (with .stage set) for any input that is not a flip
    graph of convex spanning paths.
    """
    count = g.vertex_count
    n = _run_stage("infer_n", infer_n, count)
    boundary = _run_stage("find_boundary_vertices", find_boundary_vertices, g, n)
    raw_cycle = _run_stage("build_boundary_cycle", build_boundary_cycle, g, boundary)
    gauge = _run_stage("fix_gauge", fix_gauge, raw_cycle)
    levels = _run_stage("compute_levels", compute_levels, g, boundary)
    ordered = [0] * n
    for v, j in gauge.items():
        ordered[j] = v
    state = ReconState(
        graph=g,
        n=n,
        boundary_cycle=ordered,
        gauge=gauge,
        levels=levels,
        endpoints=[None] * count,
        paths=[None] * count,
    )
    state.op_count += count + 2 * g.edge_count() + n * n
    state.brecord = _run_stage(
        "recover_boundary_sets", recover_boundary_sets, g, state, cross_check=cross_check
    )

    def recover_paths() -> None:
        buckets: list[list[int]] = [[] for _ in range(max(levels) + 1)]
        for v, lv in enumerate(levels):
            buckets[lv].append(v)
        for v in buckets[0]:
            p = SpanningPath.from_seq(_boundary_path_seq(state.gauge[v], n), n)
            state.paths[v] = p
            state.endpoints[v] = p.endpoints
            state.op_count += n
        for lv in range(1, len(buckets)):
            for v in buckets[lv]:
                if lv == 1:
                    p = recover_level1(v, state)
                else:
                    leaf = recover_leaf(v, state)
                    p = complete_path(_arcs_from_mask(state.brecord[v], n), leaf)
                state.paths[v] = p
                state.endpoints[v] = p.endpoints
                state.op_count += n

    _run_stage("recover_paths", recover_paths)
    state.op_count += count * 4 * n
    _run_stage("validate_result", _validate_result, g, n, state.paths)
    return ReconResult(
        n=n,
        paths=list(state.paths),
        gauge=gauge,
        boundary_cycle=ordered,
        levels=levels,
        op_count=state.op_count,
    )
