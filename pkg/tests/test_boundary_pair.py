from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import grow_region, random_pair, seeds
from kagome_ssm.boundary_pair import (
    EdgeBoundaryPair, VertexBoundaryPair, child, children, classify, decompose_vertex_pair, is_valid, validate,
)
from kagome_ssm.lattice import CANONICAL_EDGE, Vertex, edge, edge_frame, neighbours, triangle_mate
from kagome_ssm.mu_engine import mu
from kagome_ssm.region import edge_boundary, vertex_boundary

W0, V0 = CANONICAL_EDGE
MATE = triangle_mate(W0, V0)


def single(c=1, cp=2, cols=None):
    return EdgeBoundaryPair.make({V0}, CANONICAL_EDGE, c, cp, cols or {})


def test_single_vertex_valid():
    assert validate(single()) is None


def test_zero_pivot_rejected():
    assert validate(single(0, 2)) is not None
    assert validate(single(2, 2)) is not None


def test_adjacent_edges_differing_in_both_rejected():
    region = {V0, MATE, Vertex(3, 1)}
    # find two cyclically consecutive boundary edges at an outside vertex, away from e_X
    from kagome_ssm.boundary_pair import adjacent_boundary_edge_pairs

    ex = edge(*CANONICAL_EDGE)
    for _, a, b in adjacent_boundary_edge_pairs(region):
        if ex not in (a, b):
            bad = EdgeBoundaryPair.make(region, CANONICAL_EDGE, 1, 2, {a: 3, b: 4})
            assert "adjacent boundary edges" in validate(bad)
            good = EdgeBoundaryPair.make(region, CANONICAL_EDGE, 1, 2, {a: 3, b: 3, (W0, MATE): 1})
            assert validate(good) is None
            break
    else:
        pytest.fail("no adjacent boundary-edge pair found")


def test_classify_mate_out():
    x = EdgeBoundaryPair.make({V0}, CANONICAL_EDGE, 1, 2, {(MATE, V0): 1})
    assert classify(x) == {3, 4}
    x = EdgeBoundaryPair.make({V0}, CANONICAL_EDGE, 1, 2, {})
    assert classify(x) == {4}


def test_classify_m1_concrete():
    region = {V0, MATE}
    # colour 3 at an outer edge of the mate makes the counts asymmetric
    other = [n for n in neighbours(MATE) if n not in region and n != W0][0]
    x = EdgeBoundaryPair.make(region, CANONICAL_EDGE, 1, 2, {(W0, MATE): 1, (other, MATE): 2})
    assert is_valid(x)
    a, b = mu(x, 1, 2).value, mu(x, 2, 1).value
    assert a >= b
    assert classify(x) == {1}
    y = EdgeBoundaryPair.make(region, CANONICAL_EDGE, 1, 2, {(W0, MATE): 2, (other, MATE): 2})
    assert mu(y, 1, 2).value < mu(y, 2, 1).value
    assert classify(y) == {1}
    z = EdgeBoundaryPair.make(region, CANONICAL_EDGE, 1, 2, {(W0, MATE): 3})
    assert classify(z) == {2}


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 7))
def test_classify_invariants(seed, size):
    x = random_pair(random.Random(seed), size)
    cls = classify(x)
    assert cls
    assert not {1, 2} <= cls
    if 3 in cls:
        assert 4 in cls
    assert (x.mate in x.region) == bool(cls & {1, 2})


def test_single_vertex_children_empty():
    assert children(single(), 1, 2) == [None, None, None]


def test_two_vertex_child_by_hand():
    region = {V0, MATE}
    far = [n for n in neighbours(MATE) if n not in region and n != W0][0]
    x = EdgeBoundaryPair.make(region, CANONICAL_EDGE, 1, 2, {(W0, MATE): 3, (far, MATE): 4})
    frame = edge_frame(W0, V0)
    assert frame[0] == MATE
    k = child(x, 1, 4, 5)
    assert k.region == frozenset({MATE})
    assert (k.w, k.v) == (V0, MATE)
    assert (k.c, k.cp) == (5, 4)
    assert k.off == {edge(W0, MATE): 3, edge(far, MATE): 4}
    assert child(x, 2, 4, 5) is None and child(x, 3, 4, 5) is None


@settings(max_examples=80, deadline=None)
@given(seeds, st.integers(2, 8), st.integers(1, 3))
def test_children_valid(seed, size, i):
    rng = random.Random(seed)
    x = random_pair(rng, size)
    c, cp = rng.sample(range(1, 6), 2)
    k = child(x, i, c, cp)
    if x.frame[i - 1] not in x.region:
        assert k is None
        return
    assert validate(k) is None
    assert k.region == x.region - {x.v}
    # every other in-region frame neighbour is pinned to c' before and c after
    for j, n in enumerate(x.frame, start=1):
        if n in x.region and j != i:
            assert k.colour((x.v, n)) == (cp if j < i else c)


def _vertex_pair(rng, region):
    bd = sorted(vertex_boundary(region))
    w = rng.choice(bd)
    a = {u: rng.randint(0, 5) for u in bd}
    a[w] = rng.randint(1, 5)
    b = dict(a)
    b[w] = rng.choice([c for c in range(1, 6) if c != a[w]])
    return VertexBoundaryPair.make(region, w, a, b)


def _ladder_ends(xs, y):
    """First pair's B and last pair's B' as forbidden-colour sets per region vertex."""
    return xs[0], xs[-1]


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 8))
def test_decompose_external_case(seed, size):
    rng = random.Random(seed)
    y = _vertex_pair(rng, grow_region(rng, size))
    xs = decompose_vertex_pair(y)
    assert 1 <= len(xs) <= 3
    for x in xs:
        assert validate(x) is None
    # consecutive ladders chain: B' of step k equals B of step k + 1
    for a, b in zip(xs, xs[1:]):
        assert a.B_prime == b.B
    start = {e: y.bmap[e[0] if e[0] not in y.region else e[1]] for e in edge_boundary(y.region)}
    end = {e: y.bmap_prime[e[0] if e[0] not in y.region else e[1]] for e in edge_boundary(y.region)}
    assert xs[0].B == start
    assert xs[-1].B_prime == end


def test_decompose_internal_case():
    rng = random.Random(7)
    w = Vertex(1, 1)
    region = frozenset(set(neighbours(w)) | {Vertex(5, 1)})
    for _ in range(20):
        y = _vertex_pair(rng, region)
        if y.w != w:
            continue
        xs = decompose_vertex_pair(y)
        assert len(xs) <= 6
        for x in xs:
            assert validate(x) is None
        for a, b in zip(xs, xs[1:]):
            assert a.B_prime == b.B


def test_json_round_trip():
    x = random_pair(random.Random(11), 5)
    assert EdgeBoundaryPair.from_json(x.to_json()) == x
