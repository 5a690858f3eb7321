import pytest

from pathflip.paths import validate_path
from pathflip.pathgraph import AbstractGraph, anonymize
from pathflip.reconstruct import (
    AmbiguousCompletion,
    ArcStructureInvalid,
    BoundaryCountMismatch,
    NoCompletion,
    NotAPathGraphError,
    NotAPathGraphOrder,
    ReconState,
    _arcs_from_mask,
    build_boundary_cycle,
    complete_path,
    compute_levels,
    find_boundary_vertices,
    fix_gauge,
    infer_n,
    recover_boundary_sets,
    recover_leaf,
    recover_level1,
    reconstruct_all,
)
from pathflip.verify import check_reconstruction
from oracles import bfs_distances, paths_by_boundary_mask

STAGES = {
    "infer_n",
    "find_boundary_vertices",
    "build_boundary_cycle",
    "fix_gauge",
    "compute_levels",
    "recover_boundary_sets",
    "recover_paths",
    "validate_result",
}


def missing_index(path):
    mask = path.boundary_index_mask()
    return next(j for j in range(path.n) if not mask >> j & 1)


def truth_state(g):
    """A ReconState built from the ground-truth labels, identity gauge."""
    n = g.n
    gauge = {
        v: missing_index(p) for v, p in enumerate(g.labels) if p.level == 0
    }
    cycle = [0] * n
    for v, j in gauge.items():
        cycle[j] = v
    return ReconState(
        graph=g.as_abstract(),
        n=n,
        boundary_cycle=cycle,
        gauge=gauge,
        levels=[p.level for p in g.labels],
        brecord=[p.boundary_index_mask() for p in g.labels],
        endpoints=[p.endpoints for p in g.labels],
        paths=[None] * g.vertex_count,
    )


def pipeline_state(anon):
    """The reconstruction state up to the level decomposition."""
    n = infer_n(anon.vertex_count)
    boundary = find_boundary_vertices(anon, n)
    cycle_raw = build_boundary_cycle(anon, boundary)
    gauge = fix_gauge(cycle_raw)
    cycle = [0] * n
    for v, j in gauge.items():
        cycle[j] = v
    return ReconState(
        graph=anon,
        n=n,
        boundary_cycle=cycle,
        gauge=gauge,
        levels=compute_levels(anon, boundary),
    )


def test_infer_n():
    for n in range(5, 17):
        assert infer_n(n * (1 << (n - 3))) == n
    for bad in (1, 19, 21, 47, 127):
        with pytest.raises(NotAPathGraphOrder) as exc:
            infer_n(bad)
        assert exc.value.stage == "infer_n"


@pytest.mark.parametrize("n", range(5, 9))
def test_find_boundary_vertices_matches_levels(n, graph_for):
    g = graph_for(n)
    found = find_boundary_vertices(g.as_abstract(), n)
    assert found == {v for v in range(g.vertex_count) if g.labels[v].level == 0}


def test_find_boundary_vertices_rejects_wrong_degrees():
    ring = AbstractGraph.from_edges(20, [(i, (i + 1) % 20) for i in range(19)] + [(0, 19)])
    with pytest.raises(BoundaryCountMismatch) as exc:
        find_boundary_vertices(ring, 5)
    assert exc.value.stage == "find_boundary_vertices"
    # circulant graph: degree 3n - 7 everywhere, so far too many candidates
    edges = sorted(
        tuple(sorted((i, (i + d) % 20))) for i in range(20) for d in (1, 2, 3, 4)
    )
    circulant = AbstractGraph.from_edges(20, sorted(set(edges)))
    with pytest.raises(BoundaryCountMismatch):
        find_boundary_vertices(circulant, 5)


@pytest.mark.parametrize("n", range(5, 9))
def test_boundary_cycle_respects_missing_edge_adjacency(n, graph_for):
    g = graph_for(n)
    anon, secret = anonymize(g, seed=3)
    boundary = find_boundary_vertices(anon, n)
    cycle = build_boundary_cycle(anon, boundary)
    assert len(cycle) == n
    indices = [missing_index(g.labels[secret[v]]) for v in cycle]
    steps = {(indices[(i + 1) % n] - indices[i]) % n for i in range(n)}
    assert steps in ({1}, {n - 1})


def test_fix_gauge_pins_rotation_and_direction():
    gauge = fix_gauge([7, 3, 9, 5, 11])
    assert gauge == {3: 0, 7: 1, 11: 2, 5: 3, 9: 4}


@pytest.mark.parametrize("n", range(5, 9))
def test_levels_equal_diagonal_counts(n, graph_for):
    g = graph_for(n)
    anon, secret = anonymize(g, seed=5)
    boundary = find_boundary_vertices(anon, n)
    levels = compute_levels(anon, boundary)
    for v in range(anon.vertex_count):
        assert levels[v] == g.labels[secret[v]].level


def test_spec_distance_example(graph_for):
    g = graph_for(5)
    v = g.index[validate_path([1, 0, 2, 3, 4], 5).key]
    assert g.labels[v].boundary_index_mask() == 0b01101
    boundary = [w for w in range(g.vertex_count) if g.labels[w].level == 0]
    hits = [w for w in boundary if bfs_distances(g.adjacency, w)[v] == 1]
    assert len(hits) == 2
    assert {missing_index(g.labels[w]) for w in hits} == {1, 4}


@pytest.mark.parametrize("n", range(5, 9))
@pytest.mark.parametrize("seed", (0, 1))
def test_boundary_sets_both_methods_and_truth(n, seed, graph_for):
    g = graph_for(n)
    anon, secret = anonymize(g, seed=seed)
    state = pipeline_state(anon)
    fast = recover_boundary_sets(anon, state, method="fast")
    ref = recover_boundary_sets(anon, state, method="reference")
    assert fast == ref

    # gauge slot j stands for the boundary edge missed by the path at
    # cycle[j]; translating the true masks through that dictionary must
    # reproduce the recovered records exactly
    orig = [missing_index(g.labels[secret[state.boundary_cycle[j]]]) for j in range(n)]
    assert sorted(orig) == list(range(n))
    for v in range(anon.vertex_count):
        true_mask = g.labels[secret[v]].boundary_index_mask()
        expected = sum(((true_mask >> orig[j]) & 1) << j for j in range(n))
        assert fast[v] == expected


def test_boundary_sets_cross_check_mode(graph_for):
    anon, _ = anonymize(graph_for(6), seed=11)
    state = pipeline_state(anon)
    assert recover_boundary_sets(anon, state, cross_check=True) == recover_boundary_sets(
        anon, state, method="reference"
    )
    with pytest.raises(ValueError):
        recover_boundary_sets(anon, state, method="bogus")


def test_arcs_from_mask():
    assert _arcs_from_mask(0b01011, 5) == [[0, 1, 2], [3, 4]]
    assert _arcs_from_mask(0b01101, 5) == [[0, 1], [2, 3, 4]]
    assert _arcs_from_mask(0b11110, 5) == [[1, 2, 3, 4, 0]]
    assert _arcs_from_mask(0b001001, 6) == [[0, 1], [2], [3, 4], [5]]
    with pytest.raises(ArcStructureInvalid):
        _arcs_from_mask(0b11111, 5)


def test_complete_path_spec_example():
    arcs = [[0, 1, 2], [3, 4]]
    assert complete_path(arcs, 0).seq == (0, 1, 2, 4, 3)
    done = {}
    for leaf in (0, 2, 3, 4):
        try:
            done[leaf] = complete_path(arcs, leaf)
        except NoCompletion:
            pass
    assert len(set(done.values())) == 2
    assert validate_path([0, 1, 2, 4, 3], 5) in done.values()
    assert validate_path([2, 1, 0, 3, 4], 5) in done.values()
    with pytest.raises(NoCompletion):
        complete_path(arcs, 1)


def test_complete_path_rejects_bad_arcs():
    with pytest.raises(ArcStructureInvalid):
        complete_path([[0, 1], [3, 4]], 0)
    with pytest.raises(ArcStructureInvalid):
        complete_path([[0, 2, 1], [3, 4]], 0)
    with pytest.raises(ArcStructureInvalid):
        complete_path([[0, 1], [2], [4], [3]], 0)
    # cyclic order without the smallest-first rotation is still fine
    assert complete_path([[3, 4], [0, 1, 2]], 0).seq == (0, 1, 2, 4, 3)


@pytest.mark.parametrize("n", (5, 6, 7))
def test_completion_unique_per_boundary_set_and_leaf(n):
    for mask, seqs in paths_by_boundary_mask(n).items():
        arcs = _arcs_from_mask(mask, n)
        assert len(seqs) <= len(arcs)
        ends = {arc[0] for arc in arcs if len(arc) > 1} | {
            arc[-1] for arc in arcs if len(arc) > 1
        }
        by_leaf = {}
        for seq in seqs:
            for leaf in (seq[0], seq[-1]):
                if leaf in ends or len(arcs) == 1:
                    assert by_leaf.setdefault(leaf, seq) == seq
                    assert complete_path(arcs, leaf) == validate_path(seq, n)
                else:
                    with pytest.raises(NoCompletion):
                        complete_path(arcs, leaf)


@pytest.mark.parametrize("n", range(5, 9))
def test_recover_level1_matches_truth(n, graph_for):
    g = graph_for(n)
    state = truth_state(g)
    for v, p in enumerate(g.labels):
        if p.level == 1:
            assert recover_level1(v, state) == p


def test_recover_level1_spec_witnesses(graph_for):
    g = graph_for(5)
    state = truth_state(g)

    # diagonal (2, 4) attaches at the arc tail: no level-2 neighbor of
    # 0-1-2-4-3 omits the boundary edge (0, 1)
    v = g.index[validate_path([0, 1, 2, 4, 3], 5).key]
    assert not any(
        state.levels[w] == 2 and not state.brecord[w] >> 0 & 1
        for w in g.adjacency[v]
    )
    assert recover_level1(v, state) == g.labels[v]

    # diagonal (0, 2) attaches at the arc head of 2-3-4: some level-2
    # neighbor omits the boundary edge (2, 3)
    u = g.index[validate_path([1, 0, 2, 3, 4], 5).key]
    assert any(
        state.levels[w] == 2 and not state.brecord[w] >> 2 & 1
        for w in g.adjacency[u]
    )
    assert recover_level1(u, state) == g.labels[u]


@pytest.mark.parametrize("n", (6, 7, 8))
def test_recover_leaf_matches_truth(n, graph_for):
    g = graph_for(n)
    state = truth_state(g)
    for v, p in enumerate(g.labels):
        if p.level < 2:
            continue
        leaf = recover_leaf(v, state)
        assert leaf in p.endpoints
        arcs = _arcs_from_mask(state.brecord[v], n)
        assert complete_path(arcs, leaf) == p


@pytest.mark.parametrize("n", range(5, 10))
def test_reconstruct_roundtrip(n, graph_for):
    g = graph_for(n)
    for seed in (0, 1, 2):
        anon, secret = anonymize(g, seed=seed)
        result = reconstruct_all(anon)
        assert result.n == n
        assert result.op_count > 0
        for v in range(anon.vertex_count):
            assert result.levels[v] == g.labels[secret[v]].level
        check_reconstruction(g, secret, result)


def test_reconstruct_cross_check(graph_for):
    g = graph_for(6)
    anon, secret = anonymize(g, seed=9)
    check_reconstruction(g, secret, reconstruct_all(anon, cross_check=True))


def test_reconstruct_rejects_wrong_order():
    g = AbstractGraph.from_edges(21, [(0, 1)])
    with pytest.raises(NotAPathGraphOrder) as exc:
        reconstruct_all(g)
    assert exc.value.stage == "infer_n"


def test_reconstruct_rejects_ring_of_matching_order():
    ring = AbstractGraph.from_edges(20, [(i, (i + 1) % 20) for i in range(19)] + [(0, 19)])
    with pytest.raises(NotAPathGraphError) as exc:
        reconstruct_all(ring)
    assert exc.value.stage == "find_boundary_vertices"


def test_reconstruct_rejects_perturbed_graphs(graph_for):
    anon, _ = anonymize(graph_for(5), seed=4)
    from pathflip.verify import with_edge_added, with_edge_removed

    u, v = next(iter(anon.edges()))
    with pytest.raises(NotAPathGraphError) as exc:
        reconstruct_all(with_edge_removed(anon, u, v))
    assert exc.value.stage in STAGES

    x = 0
    y = next(w for w in range(anon.vertex_count) if w != x and w not in anon.adjacency[x])
    with pytest.raises(NotAPathGraphError) as exc:
        reconstruct_all(with_edge_added(anon, x, y))
    assert exc.value.stage in STAGES
