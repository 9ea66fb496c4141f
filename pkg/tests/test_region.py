from __future__ import annotations

import itertools
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import grow_region, seeds
from kagome_ssm.lattice import CANONICAL_EDGE, Vertex, adjacent, ball, neighbours, triangle_mate
from kagome_ssm.region import (
    Catalogue, CatalogueError, ExtendedRegion, check_exclusive_exhaustive, component_of, components,
    connected_sets, edge_boundary, edge_set, inner_edges, is_connected, load_catalogue, matches,
    mate_template, save_catalogue, shell_catalogue, shell_support, single_vertex_template, vertex_boundary,
)

W0, V0 = CANONICAL_EDGE


@settings(max_examples=80, deadline=None)
@given(seeds, st.integers(1, 10))
def test_boundaries_partition_edges(seed, size):
    region = grow_region(random.Random(seed), size)
    eb = edge_boundary(region)
    inner = inner_edges(region)
    assert edge_set(region) == eb | inner and not eb & inner
    for a, b in eb:
        assert (a in region) != (b in region)
    vb = vertex_boundary(region)
    assert vb == {a if a not in region else b for a, b in eb}
    assert is_connected(region)


@settings(max_examples=60, deadline=None)
@given(st.sets(st.sampled_from(sorted(ball((1, 1), 2))), min_size=1, max_size=14))
def test_components_partition(region):
    comps = components(region)
    assert frozenset().union(*comps) == frozenset(region)
    assert sum(map(len, comps)) == len(region)
    for c in comps:
        assert component_of(region, min(c)) == c
    for a, b in itertools.combinations(comps, 2):
        assert not any(adjacent(x, y) for x in a for y in b)


def test_extended_region_rules():
    with pytest.raises(ValueError):
        ExtendedRegion(frozenset({W0}))
    with pytest.raises(ValueError):
        ExtendedRegion(frozenset({V0, Vertex(2, 2)}), frozenset({Vertex(2, 2)}))
    t = mate_template(True)
    assert triangle_mate(W0, V0) in t.inside


def test_placement_and_matching():
    t = ExtendedRegion(frozenset({V0, Vertex(0, 0)}), frozenset({Vertex(-1, -1)}))
    for w in neighbours((3, 1)):
        placed = t.placed(w, (3, 1))
        assert placed.canonical() == t
        region = placed.inside
        assert matches(region, (w, Vertex(3, 1)), t)
        assert not matches(region | placed.outside, (w, Vertex(3, 1)), t)


def test_catalogue_json_round_trip(tmp_path):
    cat = shell_catalogue("A", 1)
    path = tmp_path / "a.json"
    save_catalogue(cat, path)
    back = load_catalogue(path)
    assert back.to_json() == cat.to_json()
    assert back.digest() == cat.digest()


def test_load_rejects_malformed(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"family": "A", "entries": [{"in": [[1, 1]]}]}))
    with pytest.raises(CatalogueError):
        load_catalogue(p)
    p.write_text("{")
    with pytest.raises(CatalogueError):
        load_catalogue(p)


def _brute_check(cat):
    sup = cat.support
    v0 = sup.index(V0)
    others = [i for i in range(len(sup)) if i != v0]
    for bits in range(1 << len(others)):
        tin = 1 << v0
        for j, i in enumerate(others):
            if bits >> j & 1:
                tin |= 1 << i
        if len(cat.matching_mask(tin)) != 1:
            return False
    return True


@pytest.mark.parametrize("radius", [1, 2])
def test_shell_a_catalogue_exclusive_exhaustive(radius):
    cat = shell_catalogue("A", radius)
    check_exclusive_exhaustive(cat)
    if radius == 1:
        assert _brute_check(cat)


def test_overlap_and_gap_detected():
    mate = triangle_mate(W0, V0)
    gap = Catalogue("A", [mate_template(True)])
    with pytest.raises(CatalogueError):
        check_exclusive_exhaustive(gap)
    overlap = Catalogue("A", [mate_template(True), mate_template(False), single_vertex_template()])
    with pytest.raises(CatalogueError):
        check_exclusive_exhaustive(overlap)
    check_exclusive_exhaustive(Catalogue("A", [mate_template(True), mate_template(False)]))
    assert mate in mate_template(False).outside


def test_f_catalogue_needs_single_vertex():
    with pytest.raises(CatalogueError):
        Catalogue("F", [mate_template(True)]).validate()
    shell_catalogue("F", 1).validate()


@settings(max_examples=40, deadline=None)
@given(st.sets(st.sampled_from(sorted(shell_support(2) - {V0})), max_size=12))
def test_a_catalogue_unique_match(extra):
    cat = shell_catalogue("A", 2)
    region = frozenset(extra) | {V0}
    hits = cat.matching(region, (W0, V0))
    assert len(hits) == 1
    assert cat.entries[hits[0]].inside == component_of(region & shell_support(2), V0)


def test_connected_sets_against_bruteforce():
    sup = sorted(shell_support(1))
    others = [p for p in sup if p != V0]
    brute = set()
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            s = frozenset(combo) | {V0}
            if is_connected(s):
                brute.add(s)
    assert set(connected_sets(sup, V0)) == brute
