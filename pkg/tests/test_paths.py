from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathflip.geometry import edge_table
from pathflip.paths import (
    CrossingEdges,
    NotPermutation,
    SpanningPath,
    UnsupportedN,
    enumerate_paths,
    neighbor_keys,
    path_neighbors,
    path_type,
    validate_path,
)
from oracles import adjacent_pairs, edge_set, path_seqs

paths_for = lru_cache(maxsize=None)(enumerate_paths)


def key_of(seq, n):
    return validate_path(seq, n).key


def test_validate_path_accepts_spec_example():
    p = validate_path([1, 0, 2, 3, 4], 5)
    assert p.level == 1
    assert p.diagonals == ((0, 2),)
    assert p.endpoints == (1, 4)


def test_validate_path_rejections():
    with pytest.raises(UnsupportedN):
        validate_path([0, 1, 2, 3], 4)
    with pytest.raises(NotPermutation):
        validate_path([0, 1, 2, 3, 3], 5)
    with pytest.raises(NotPermutation):
        validate_path([0, 1, 2, 3], 5)
    with pytest.raises(NotPermutation):
        validate_path([0, 1, 2, 3, 5], 5)
    with pytest.raises(CrossingEdges) as exc:
        validate_path([1, 3, 0, 2, 4], 5)
    e1, e2 = exc.value.pair
    assert e1 != e2


def test_canonical_orientation():
    a = SpanningPath.from_seq([0, 1, 2, 3, 4], 5)
    b = SpanningPath.from_seq([4, 3, 2, 1, 0], 5)
    assert a.seq == b.seq == (0, 1, 2, 3, 4)
    assert a == b and hash(a) == hash(b)


@pytest.mark.parametrize("n", range(5, 13))
def test_enumeration_count(n):
    assert len(paths_for(n)) == n * (1 << (n - 3))


@pytest.mark.parametrize("n", range(5, 9))
def test_enumeration_matches_permutation_filter(n):
    ours = {p.key for p in paths_for(n)}
    assert len(ours) == len(paths_for(n))
    theirs = {key_of(seq, n) for seq in path_seqs(n)}
    assert ours == theirs


def test_enumeration_sorted_and_unique():
    keys = [p.key for p in paths_for(7)]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


def test_boundary_and_level_properties():
    p = validate_path([0, 1, 2, 4, 3], 5)
    assert p.level == 1
    assert p.diagonals == ((2, 4),)
    assert set(p.boundary_edges) == {(0, 1), (1, 2), (3, 4)}
    assert p.boundary_index_mask() == 0b01011


@pytest.mark.parametrize("n", range(5, 9))
def test_neighbors_match_pairwise_oracle(n):
    seqs = path_seqs(n)
    sets = [edge_set(s) for s in seqs]
    theirs = {
        frozenset((key_of(seqs[i], n), key_of(seqs[j], n)))
        for i, j in adjacent_pairs(sets)
    }
    ours = set()
    for p in paths_for(n):
        for k in neighbor_keys(p):
            ours.add(frozenset((p.key, k)))
    assert ours == theirs


def test_deleting_a_diagonal_reaches_two_boundary_paths():
    p = validate_path([1, 0, 2, 3, 4], 5)
    t = edge_table(5)
    dr = t.rank_of[0][2]
    swapped_out = {q for q in path_neighbors(p) if not q.key >> dr & 1}
    boundary = {q.seq for q in swapped_out if q.level == 0}
    assert boundary == {(0, 1, 2, 3, 4), (1, 0, 4, 3, 2)}
    assert len(swapped_out) == 3


@pytest.mark.parametrize("n", range(5, 9))
def test_path_neighbors_are_valid_flips(n):
    for p in paths_for(n):
        nbrs = path_neighbors(p)
        assert len(nbrs) == len(neighbor_keys(p))
        for q in nbrs:
            assert q != p
            assert validate_path(q.seq, n) == q
            assert bin(p.key ^ q.key).count("1") == 2


def test_neighbor_relation_is_symmetric():
    for p in paths_for(6):
        for q in path_neighbors(p):
            assert p in path_neighbors(q)


def test_path_type_values():
    assert path_type(validate_path([0, 1, 2, 3, 4], 5)) is None
    assert path_type(validate_path([1, 0, 2, 3, 4], 5)) is None
    for n in range(5, 8):
        for p in paths_for(n):
            t = path_type(p)
            if p.level < 2:
                assert t is None
            else:
                assert 2 <= t <= n - 1


@settings(max_examples=200)
@given(st.integers(5, 9), st.data())
def test_path_invariants(n, data):
    p = data.draw(st.sampled_from(paths_for(n)))
    assert p.seq[0] < p.seq[-1]
    assert sorted(p.seq) == list(range(n))
    assert len(p.edges) == n - 1
    assert bin(p.key).count("1") == n - 1
    assert len(p.boundary_edges) + len(p.diagonals) == n - 1
    assert p.level == len(p.diagonals)
    assert validate_path(reversed(p.seq), n) == p
