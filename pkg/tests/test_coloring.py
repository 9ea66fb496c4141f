from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import grow_region, random_boundary, seeds
from kagome_ssm.coloring import (
    agrees, count_at_pair, count_at_vertex, count_total, enumerate_colourings, forbidden_masks, is_proper,
    naive_count_at_vertex, numpy_colourings, numpy_count_at_vertex,
)
from kagome_ssm.lattice import Vertex, neighbours


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 6))
def test_counter_matches_naive(seed, size):
    rng = random.Random(seed)
    region = grow_region(rng, size)
    bd = random_boundary(rng, region)
    v = rng.choice(sorted(region))
    assert count_at_vertex(region, bd, v) == naive_count_at_vertex(region, bd, v)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 10))
def test_counter_matches_numpy(seed, size):
    rng = random.Random(seed)
    region = grow_region(rng, size)
    bd = random_boundary(rng, region)
    v = rng.choice(sorted(region))
    assert count_at_vertex(region, bd, v) == numpy_count_at_vertex(region, bd, v)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 8))
def test_pair_matrix_marginalises(seed, size):
    rng = random.Random(seed)
    region = grow_region(rng, size)
    bd = random_boundary(rng, region)
    u, v = rng.sample(sorted(region), 2)
    mat = count_at_pair(region, bd, u, v)
    assert [sum(r) for r in mat] == list(count_at_vertex(region, bd, u))
    assert [sum(mat[i][j] for i in range(5)) for j in range(5)] == list(count_at_vertex(region, bd, v))
    if v in neighbours(u):
        assert all(mat[i][i] == 0 for i in range(5))


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 7))
def test_enumeration_is_exactly_the_proper_set(seed, size):
    rng = random.Random(seed)
    region = grow_region(rng, size)
    bd = random_boundary(rng, region)
    cols = enumerate_colourings(region, forbidden_masks(region, bd))
    assert len(cols) == count_total(region, bd)
    assert len({tuple(sorted(s.items())) for s in cols}) == len(cols)
    for s in cols:
        assert is_proper(s, region) and agrees(s, bd)
    _, rows = numpy_colourings(region, bd)
    assert rows.shape[0] == len(cols)


def test_colour_symmetry_without_boundary():
    region = grow_region(random.Random(3), 7)
    n = count_at_vertex(region, {}, min(region))
    assert len(set(n)) == 1


def test_single_vertex_and_triangle():
    assert count_at_vertex({Vertex(1, 1)}, {}, (1, 1)) == (1,) * 5
    tri = {Vertex(1, 1), Vertex(3, 1), Vertex(2, 2)}
    assert count_total(tri, {}) == 60


def test_bad_boundary_rejected():
    with pytest.raises(ValueError):
        forbidden_masks({Vertex(1, 1)}, {((1, 1), (3, 1)): 7})
    with pytest.raises(ValueError):
        count_at_vertex({Vertex(1, 1)}, {}, (3, 1))
