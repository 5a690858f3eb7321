"""Checks that reconstructions and flip graphs are what they claim to be.

check_reconstruction confirms a recovered labeling matches the original up
to one global symmetry of the point set (the best possible outcome, since
relabeling the points by any such symmetry yields the same flip graph).
invariant_suite bundles the structural laws of flip graphs into a desk-scale
report; automorphism_group confirms by brute force that the graph has no
symmetries beyond the 2n dihedral ones.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

from .fileio import Config
from .geometry import DihedralElement, dihedral_elements
from .pathgraph import (
    AbstractGraph,
    PathGraph,
    _union_clique_members,
    anonymize,
    build,
    classify_edge_cliques,
    stats,
)
from .paths import SpanningPath, path_type
from .reconstruct import (
    ReconResult,
    build_boundary_cycle,
    find_boundary_vertices,
    reconstruct_all,
)

# Largest observed |E| / |V| over n = 5..16 is 9/4, attained at n = 5 and
# decreasing toward 2 from there; locked as a regression bound.
EDGE_RATIO_BOUND = 2.25


class NoDihedralMatch(Exception):
    """No point-set symmetry maps the recovered labeling onto the original."""

    def __init__(self, message: str, witness: int | None = None):
        super().__init__(message)
        self.witness = witness


class TooLarge(RuntimeError):
    """Brute-force automorphism search was asked for too big a graph."""


def _image_seq(table: list[int], p: SpanningPath) -> tuple[int, ...]:
    s = [table[x] for x in p.seq]
    if s[0] > s[-1]:
        s.reverse()
    return tuple(s)


def find_matching_symmetry(
    original_labels: Sequence[SpanningPath],
    secret: Sequence[int],
    recovered: Sequence[SpanningPath],
) -> DihedralElement:
    """The symmetry g with g(recovered[v]) == original[secret[v]] for all v.

    Candidates are eliminated vertex by vertex; the witness on failure is
    the vertex at which the last candidate died.
    """
    if not (len(original_labels) == len(secret) == len(recovered)):
        raise ValueError("labelings and secret must have equal length")
    n = original_labels[0].n
    alive = [(g, g.point_table()) for g in dihedral_elements(n)]
    for v in range(len(recovered)):
        target = original_labels[secret[v]].seq
        alive = [(g, t) for g, t in alive if _image_seq(t, recovered[v]) == target]
        if not alive:
            raise NoDihedralMatch(
                f"no point symmetry matches the original labeling (vertex {v})",
                witness=v,
            )
    return alive[0][0]


def check_reconstruction(
    original: PathGraph, secret: Sequence[int], result: ReconResult
) -> DihedralElement:
    """Confirm a reconstruction of anonymize(original) against the truth."""
    return find_matching_symmetry(original.labels, secret, result.paths)


def automorphism_group(g: AbstractGraph | PathGraph, *, cap: int = 48) -> list[tuple[int, ...]]:
    """All adjacency-preserving vertex permutations, by refined backtracking.

    Vertices are first partitioned by iterated neighborhood-color
    refinement; the search then only maps within classes.  Exhaustive, so
    guarded by a vertex cap.
    """
    adjacency = g.adjacency
    count = len(adjacency)
    if count > cap:
        raise TooLarge(f"{count} vertices exceeds automorphism cap {cap}")
    colors = [len(a) for a in adjacency]
    while True:
        sigs = [(colors[v], tuple(sorted(colors[w] for w in adjacency[v]))) for v in range(count)]
        remap: dict[tuple, int] = {}
        new = []
        for s in sigs:
            if s not in remap:
                remap[s] = len(remap)
            new.append(remap[s])
        if new == colors:
            break
        colors = new
    class_size: dict[int, int] = {}
    for c in colors:
        class_size[c] = class_size.get(c, 0) + 1
    # place vertices so each new one touches as many placed ones as possible;
    # without that the per-step adjacency constraints barely prune
    order: list[int] = []
    placed = [False] * count
    placed_nbrs = [0] * count
    for _ in range(count):
        v = min(
            (x for x in range(count) if not placed[x]),
            key=lambda x: (-placed_nbrs[x], class_size[colors[x]], colors[x], x),
        )
        order.append(v)
        placed[v] = True
        for w in adjacency[v]:
            placed_nbrs[w] += 1
    adjbits = [0] * count
    for v, nbrs in enumerate(adjacency):
        for w in nbrs:
            adjbits[v] |= 1 << w
    mapping = [-1] * count
    found: list[tuple[int, ...]] = []

    def extend(i: int, used: int) -> None:
        if i == count:
            found.append(tuple(mapping))
            return
        v = order[i]
        for w in range(count):
            if colors[w] != colors[v] or used >> w & 1:
                continue
            ok = True
            for u in order[:i]:
                if (adjbits[v] >> u & 1) != (adjbits[w] >> mapping[u] & 1):
                    ok = False
                    break
            if ok:
                mapping[v] = w
                extend(i + 1, used | (1 << w))
        mapping[v] = -1

    extend(0, 0)
    return found


def restricts_to_dihedral(perm: Sequence[int], cycle: Sequence[int]) -> bool:
    """True iff the permutation acts on the cycle as a rotation or reflection."""
    n = len(cycle)
    pos = {v: i for i, v in enumerate(cycle)}
    if any(perm[v] not in pos for v in cycle):
        return False
    j = pos[perm[cycle[0]]]
    if all(perm[cycle[i]] == cycle[(j + i) % n] for i in range(n)):
        return True
    return all(perm[cycle[i]] == cycle[(j - i) % n] for i in range(n))


def with_edge_removed(g: AbstractGraph, u: int, v: int) -> AbstractGraph:
    """A copy of the graph without edge (u, v).  For fault injection."""
    if v not in g.adjacency[u]:
        raise ValueError(f"({u}, {v}) is not an edge")
    adjacency = [list(a) for a in g.adjacency]
    adjacency[u].remove(v)
    adjacency[v].remove(u)
    return AbstractGraph(adjacency)


def with_edge_added(g: AbstractGraph, u: int, v: int) -> AbstractGraph:
    """A copy of the graph with edge (u, v) added.  For fault injection."""
    if u == v or v in g.adjacency[u]:
        raise ValueError(f"({u}, {v}) is already an edge or degenerate")
    adjacency = [list(a) for a in g.adjacency]
    adjacency[u].append(v)
    adjacency[v].append(u)
    adjacency[u].sort()
    adjacency[v].sort()
    return AbstractGraph(adjacency)


def with_corrupted_label(result: ReconResult, v: int) -> ReconResult:
    """A copy of a reconstruction with one label replaced by a rotated path.

    A one-step rotation never fixes a path (n-1 edges cannot be closed
    under a nontrivial rotation), so the new label is genuinely different.
    """
    rot = DihedralElement(result.n, 1, False)
    table = rot.point_table()
    paths = list(result.paths)
    paths[v] = SpanningPath.from_seq([table[p] for p in paths[v].seq], result.n)
    return ReconResult(
        n=result.n,
        paths=paths,
        gauge=dict(result.gauge),
        boundary_cycle=list(result.boundary_cycle),
        levels=list(result.levels),
        op_count=result.op_count,
    )


@dataclass
class CheckResult:
    """One invariant check: PASS, FAIL (with witness), or GATED by a cap."""

    name: str
    status: str
    value: str = ""
    witness: str | None = None
    seconds: float = 0.0

    def text_line(self) -> str:
        if self.status == "GATED":
            return f"{self.name}=GATED"
        return f"{self.name}={self.value} {self.status}"


@dataclass
class VerificationReport:
    """Results of the invariant suite for one point count."""

    n: int
    checks: list[CheckResult] = field(default_factory=list)
    degree_histogram: dict[int, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.status != "FAIL" for c in self.checks)

    def text_lines(self) -> list[str]:
        return [c.text_line() for c in self.checks]

    def kv_lines(self) -> list[str]:
        out = [f"n={self.n}"]
        for c in self.checks:
            out.append(f"{c.name}={c.status}")
            if c.value:
                out.append(f"{c.name}.value={c.value}")
            if c.witness:
                out.append(f"{c.name}.witness={c.witness}")
            out.append(f"{c.name}.seconds={c.seconds:.3f}")
        return out


def invariant_suite(n: int, config: Config | None = None) -> VerificationReport:
    """Run the structural checks for one point count and report each.

    Expensive checks are gated rather than skipped silently: the diameter
    by config.diameter_cap, the automorphism search by
    config.automorphism_cap, clique classification above n = 8, the
    boundary-set oracle comparison above n = 10, and the reconstruction
    round trip above n = 12.
    """
    cfg = config or Config()
    report = VerificationReport(n=n)

    def run(name: str, fn) -> None:
        t0 = time.perf_counter()
        try:
            value, passed, witness = fn()
            status = "PASS" if passed else "FAIL"
        except Exception as exc:  # a crashed check is a failed check
            value, status, witness = "", "FAIL", f"{type(exc).__name__}: {exc}"
        report.checks.append(
            CheckResult(name, status, str(value), witness, time.perf_counter() - t0)
        )

    def gate(name: str, reason: str) -> None:
        report.checks.append(CheckResult(name, "GATED", witness=reason))

    g = build(n)
    count = g.vertex_count

    def check_vertices():
        want = n * (1 << (n - 3))
        return count, count == want, None if count == want else f"expected {want}"

    run("vertices", check_vertices)

    def check_degrees():
        want = 3 * n - 7
        top = [v for v in range(count) if g.degree(v) == want]
        over = [v for v in range(count) if g.degree(v) > want]
        ok = len(top) == n and not over
        return f"{want}x{len(top)}", ok, None if ok else f"over={over[:3]} top={len(top)}"

    run("degrees", check_degrees)
    report.degree_histogram = stats(g).degree_histogram

    def check_leaf_edges():
        for p in g.labels:
            a, b = p.endpoints
            first, last = p.edges[0], p.edges[-1]
            for e in (first, last):
                if (e[1] - e[0]) % n not in (1, n - 1):
                    return p.seq, False, f"leaf edge {e} of {p!r} is a diagonal"
            if p.level >= 1 and (b - a) % n in (1, n - 1):
                return p.seq, False, f"leaves of {p!r} are adjacent points"
        return count, True, None

    run("leaf_edges", check_leaf_edges)

    if count > cfg.diameter_cap:
        gate("diameter", f"{count} vertices exceeds diameter cap {cfg.diameter_cap}")
    else:

        def check_diameter():
            d = stats(g, include_diameter=True, diameter_cap=cfg.diameter_cap).diameter
            return d, d == 2 * n - 6, None if d == 2 * n - 6 else f"expected {2 * n - 6}"

        run("diameter", check_diameter)

    if n > 8:
        gate("cliques", f"n={n} exceeds clique classification cap 8")
    else:

        def check_cliques():
            union_cliques = set()
            checked = 0
            for u, v in g.edges():
                c = classify_edge_cliques(g, u, v)
                checked += 1
                if c.intersection_size not in (2, 4):
                    return checked, False, f"edge ({u},{v}) intersection {c.intersection_size}"
                if c.union_size not in (2, n):
                    return checked, False, f"edge ({u},{v}) union {c.union_size}"
                if c.union_size == n:
                    union_cliques.add(_union_clique_members(g, u, v))
            boundary = tuple(sorted(find_boundary_vertices(g.as_abstract(), n)))
            if union_cliques != {boundary}:
                return checked, False, f"{len(union_cliques)} union cliques of size n"
            return checked, True, None

        run("cliques", check_cliques)

    def check_edge_ratio():
        ratio = g.edge_count() / count
        return f"{ratio:.4f}", ratio <= EDGE_RATIO_BOUND, None

    run("edge_ratio", check_edge_ratio)

    def check_type_bound():
        for v, p in enumerate(g.labels):
            t = path_type(p)
            if t is not None and g.degree(v) > 3 * t:
                return v, False, f"degree {g.degree(v)} exceeds 3*type={3 * t}"
        return count, True, None

    run("type_bound", check_type_bound)

    if count > cfg.automorphism_cap:
        gate("automorphisms", f"{count} vertices exceeds automorphism cap {cfg.automorphism_cap}")
    else:

        def check_automorphisms():
            autos = automorphism_group(g, cap=cfg.automorphism_cap)
            if len(autos) != 2 * n:
                return len(autos), False, f"expected {2 * n}"
            cycle = build_boundary_cycle(g.as_abstract(), find_boundary_vertices(g.as_abstract(), n))
            bad = [a for a in autos if not restricts_to_dihedral(a, cycle)]
            return len(autos), not bad, None if not bad else f"{len(bad)} non-dihedral"

        run("automorphisms", check_automorphisms)

    if n > 10:
        gate("boundary_sets", f"n={n} exceeds boundary-set oracle cap 10")
    else:

        def check_boundary_sets():
            from .reconstruct import (
                ReconState,
                compute_levels,
                fix_gauge,
                recover_boundary_sets,
            )

            anon, secret = anonymize(g, cfg.seed)
            boundary = find_boundary_vertices(anon, n)
            gauge = fix_gauge(build_boundary_cycle(anon, boundary))
            levels = compute_levels(anon, boundary)
            ordered = [0] * n
            for v, j in gauge.items():
                ordered[j] = v
            state = ReconState(
                graph=anon, n=n, boundary_cycle=ordered, gauge=gauge, levels=levels,
                endpoints=[None] * count, paths=[None] * count,
            )
            fast = recover_boundary_sets(anon, state, method="fast")
            ref = recover_boundary_sets(anon, state, method="reference")
            if fast != ref:
                return count, False, "fast and reference methods disagree"
            return count, True, None

        run("boundary_sets", check_boundary_sets)

    if n > 12:
        gate("roundtrip", f"n={n} exceeds round-trip cap 12")
    else:

        def check_roundtrip():
            anon, secret = anonymize(g, cfg.seed)
            result = reconstruct_all(anon, cross_check=cfg.cross_check)
            sym = check_reconstruction(g, secret, result)
            return f"rot={sym.rotation},refl={int(sym.reflected)}", True, None

        run("roundtrip", check_roundtrip)

    return report
