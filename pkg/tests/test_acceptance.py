"""Acceptance suite: one test per criterion, each timed against its budget.

Every test records a PASS/FAIL line that the terminal summary prints under
"acceptance criteria".  Reference values come from independent oracles
(itertools or extension enumeration, the literal coupling tree, brute-force
completion sets, exact state graphs).
"""
from __future__ import annotations

import itertools
import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from importlib import resources
from types import SimpleNamespace

import numpy as np
import pytest

from helpers import ACCEPTANCE_LINES, grow_region, random_boundary, random_pair
from kagome_ssm import decay_cert, dynamics
from kagome_ssm.afset import AFSet
from kagome_ssm.boundary_pair import EdgeBoundaryPair, validate
from kagome_ssm.coloring import count_at_vertex, naive_count_at_vertex, numpy_count_at_vertex
from kagome_ssm.gamma import GammaEngine, build_tree, marginals, nu, tree_level_sums
from kagome_ssm.lattice import CANONICAL_EDGE, Vertex, ball, edge, is_odd, neighbours, shell_count, triangle_mate
from kagome_ssm.mu_engine import (
    HalfCounter, _as_matrix, _assignments, _canonical_under_swap, _combine, _free_colours, _symmetric,
    candidate_splits, dominance_filter, family_problem, load_mu_table, mu, mu_max, split_counts,
)
from kagome_ssm.region import (
    ExtendedRegion, component_of, connected_sets, edge_boundary, load_catalogue, shell_catalogue, vertex_boundary,
)

W0, V0 = CANONICAL_EDGE
MATE = triangle_mate(W0, V0)
TRIANGLE = frozenset({Vertex(1, 1), Vertex(3, 1), Vertex(2, 2)})


@contextmanager
def criterion(n: int, title: str, limit: float):
    rec = SimpleNamespace(detail="")
    t0 = time.perf_counter()
    ok = False
    try:
        yield rec
        ok = True
    finally:
        dt = time.perf_counter() - t0
        status = "PASS" if ok and dt <= limit else "FAIL"
        line = f"criterion {n:2d} {status}: {title} [{dt:.1f}s of {limit:.0f}s] {rec.detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert dt <= limit, f"criterion {n} exceeded its time budget ({dt:.1f}s > {limit}s)"


def _data(name):
    return resources.files("kagome_ssm") / "data" / name


# ----------------------------------------------------------------- 1

def test_criterion_01_counter_matches_enumeration():
    with criterion(1, "production counter equals exhaustive enumeration", 120) as rec:
        rng = random.Random(101)
        by_oracle = {"itertools": 0, "extension": 0}
        for _ in range(1000):
            size = rng.randint(1, 12)
            region = grow_region(rng, size)
            bd = random_boundary(rng, region, p_zero=rng.choice([0.1, 0.3, 0.5]))
            v = rng.choice(sorted(region))
            got = count_at_vertex(region, bd, v)
            if size <= 6:
                ref = naive_count_at_vertex(region, bd, v)
                by_oracle["itertools"] += 1
            else:
                ref = numpy_count_at_vertex(region, bd, v)
                by_oracle["extension"] += 1
            assert got == ref, (sorted(region), bd, v)
        rec.detail = f"1000 instances, oracle counts {by_oracle}"


# ----------------------------------------------------------------- 2

def test_criterion_02_split_recombination():
    with criterion(2, "split recombination n_i = sum n_left * n_right", 60) as rec:
        rng = random.Random(202)
        templates = checks = 0
        seen = set()
        while templates < 120:
            region = grow_region(rng, rng.randint(3, 10), root=V0)
            if W0 in region or region in seen:
                continue
            seen.add(region)
            prob = family_problem(ExtendedRegion(region), 1 if MATE in region else 4)
            splits = candidate_splits(prob)
            if not splits:
                continue
            templates += 1
            for sp in rng.sample(splits, min(3, len(splits))):
                bd = {e: rng.choice([0, 0, 1, 2, 3, 4, 5]) for e in edge_boundary(region)}
                lm, rm = split_counts(region, sp.cut, sp.left, sp.right, bd)
                whole = count_at_vertex(region, bd, V0)
                for i in range(5):
                    if len(sp.cut) == 1:
                        assert lm[i] * rm[i] == whole[i]
                    else:
                        assert sum(lm[i, j] * rm[i, j] for j in range(5)) == whole[i]
                checks += 1
        rec.detail = f"{templates} split templates, {checks} recombinations"


# ----------------------------------------------------------------- 3

def _half_edges(prob, idx, half) -> int:
    return sum(1 for r in idx for e in prob.runs[r] if (e[0] if e[0] in prob.region else e[1]) in half)


def _half_matrices(prob, split):
    """Per shared-run assignment, the left and right count matrices of the split."""
    q = prob.q
    two = len(split.cut) == 2
    free = _free_colours(prob)
    sym = _symmetric(prob, free)
    lv = [prob.run_vertices(r) & split.left for r in split.left_runs + split.shared_runs]
    rv = [prob.run_vertices(r) & split.right for r in split.right_runs + split.shared_runs]
    hl = HalfCounter(split.left, lv, split.cut, q)
    hr = HalfCounter(split.right, rv, split.cut, q)
    la = [prob.allowed[r] for r in split.left_runs]
    ra = [prob.allowed[r] for r in split.right_runs]
    for s in _assignments([prob.allowed[r] for r in split.shared_runs], free, 0 if sym else None):
        lz = [z for z in itertools.product(*la) if not sym or _canonical_under_swap(tuple(s) + z, free)]
        rz = list(itertools.product(*ra))
        if not lz or not rz:
            continue
        lzz = np.array([tuple(z) + tuple(s) for z in lz], dtype=np.int64).reshape(len(lz), len(lv))
        rzz = np.array([tuple(z) + tuple(s) for z in rz], dtype=np.int64).reshape(len(rz), len(rv))
        yield _as_matrix(hl.counts(lzz), q, two), _as_matrix(hr.counts(rzz), q, two)


def test_criterion_03_dominance_filter_soundness():
    with criterion(3, "dominance filter keeps the maximum of mu_12", 300) as rec:
        cat = shell_catalogue("F", 2)
        halves = full = 0
        for t in cat.entries:
            for m in (1, 2, 3, 4):
                prob = family_problem(t, m)
                if prob is None or prob.empty:
                    continue
                for sp in candidate_splits(prob):
                    le = _half_edges(prob, sp.left_runs + sp.shared_runs, sp.left)
                    re_ = _half_edges(prob, sp.right_runs + sp.shared_runs, sp.right)
                    if max(le, re_) > 6:
                        continue
                    halves += 2
                    for lm, rm in _half_matrices(prob, sp):
                        lf, rf = dominance_filter(lm), dominance_filter(rm)
                        if not lf or not rf:
                            # every surviving combination has mu_12 = 0
                            assert _combine(lm, rm, 5)[0] == 0
                            continue
                        both = _combine(lm[lf], rm[rf], 5)[0]
                        assert _combine(lm, rm[rf], 5)[0] == both
                        assert _combine(lm[lf], rm, 5)[0] == both
                        if len(lm) * len(rm) <= 200_000:
                            assert _combine(lm, rm, 5)[0] == both
                            full += 1
        assert halves > 0
        rec.detail = f"{halves} half-templates, {full} fully unfiltered comparisons"


# ----------------------------------------------------------------- 4

def _completion_max(x, sub, i, j):
    """Max of mu_{i,j} over pairs on ``sub`` whose newly exposed edges take any colour in Q."""
    old = edge_boundary(x.region)
    sub_bd = edge_boundary(sub)
    new_edges = sorted(e for e in sub_bd if e not in old)
    base = {e: c for e, c in x.colours if e in sub_bd}
    best = Fraction(0)
    for cols in itertools.product(range(1, x.q + 1), repeat=len(new_edges)):
        b = dict(base)
        b.update(zip(new_edges, cols))
        y = EdgeBoundaryPair.make(sub, (x.w, x.v), x.c, x.cp, b, x.q)
        best = max(best, mu(y, i, j).value)
    return best


def test_criterion_04_nu_below_mu_and_convexity():
    with criterion(4, "nu <= mu and mu-convexity over exhaustive completion sets", 300) as rec:
        rng = random.Random(404)
        checked = nu_checked = 0
        while checked < 500:
            x = random_pair(rng, rng.randint(2, 6))
            if not marginals(x).empty:
                assert nu(x) <= mu_max(x)
                nu_checked += 1
            keep = set(rng.sample(sorted(x.region), rng.randint(1, len(x.region) - 1))) | {x.v}
            sub = component_of(frozenset(keep), x.v)
            if sub == x.region:
                continue
            if len([e for e in edge_boundary(sub) if e not in edge_boundary(x.region)]) > 4:
                continue
            for i, j in ((x.c, x.cp), (x.cp, x.c)):
                assert mu(x, i, j).value <= _completion_max(x, sub, i, j)
            checked += 1
        rec.detail = f"{checked} convexity pairs, {nu_checked} nu checks"


# ----------------------------------------------------------------- 5

def _swap_canonical(cols) -> bool:
    """First appearances of the interchangeable colours 3..5 occur in increasing order."""
    seen = 2
    for c in cols:
        if c > seen:
            if c != seen + 1:
                return False
            seen = c
    return True


def _pairs_up_to_four(rng, samples_per_shape=120):
    shapes = [s for s in connected_sets(ball(V0, 3) - {W0}, V0) if len(s) <= 4]
    e_x = edge(W0, V0)
    for shape in shapes:
        bd = sorted(edge_boundary(shape) - {e_x})
        if len(shape) <= 2:
            space = (c for c in itertools.product(range(6), repeat=len(bd)) if _swap_canonical(c))
        else:
            space = (tuple(rng.randrange(6) for _ in bd) for _ in range(samples_per_shape))
        for cols in space:
            x = EdgeBoundaryPair.make(shape, CANONICAL_EDGE, 1, 2, dict(zip(bd, cols)))
            if validate(x) is None and not marginals(x).empty:
                yield shape, x


def test_criterion_05_gamma_equals_literal_tree():
    with criterion(5, "Gamma^d equals the literal tree level sums", 120) as rec:
        free = EdgeBoundaryPair.make({V0}, CANONICAL_EDGE, 1, 2, {})
        others = [n for n in neighbours(V0) if n != W0]
        locked = EdgeBoundaryPair.make({V0}, CANONICAL_EDGE, 1, 2, dict(zip([(n, V0) for n in others], (3, 4, 5))))
        eng = GammaEngine()
        assert eng.profile(free, 4) == [Fraction(1, 4), 0, 0, 0]
        assert eng.profile(locked, 4) == [Fraction(1), 0, 0, 0]
        rng = random.Random(505)
        n_pairs, shapes = 0, set()
        for shape, x in _pairs_up_to_four(rng):
            prof = eng.profile(x, 4)
            assert prof == tree_level_sums(build_tree(x, 4), 4), x.to_json()
            if len(shape) == 1:
                assert prof[1:] == [0, 0, 0]
            n_pairs += 1
            shapes.add(shape)
        rec.detail = f"{n_pairs} pairs over {len(shapes)} region shapes (|R| <= 2 exhaustive mod colour symmetry)"


# ----------------------------------------------------------------- 6

def _baseline():
    a_cat = load_catalogue(_data("A_baseline.json"))
    f_cat = load_catalogue(_data("F_baseline.json"))
    table = load_mu_table(_data("mu_baseline.json"))
    s = AFSet.load(_data("afset_baseline.jsonl"))
    assert table.catalogue_hash == f_cat.digest()
    assert (s.a_hash, s.f_hash, s.mu_hash) == (a_cat.digest(), f_cat.digest(), table.digest())
    return a_cat, f_cat, table, s


def _growth_rate(system, sweeps=400) -> float:
    rows = {k: [(float(m), kids) for m, kids, _ in r] for k, r in system.rows.items()}
    a = {k: 0.0 if k in system.empty else 1.0 for k in system.keys}
    lam = 0.0
    for _ in range(sweeps):
        b = {k: 0.0 if k in system.empty else max([m * sum(a[c] for c in kids) for m, kids in rows.get(k, ())] + [0.0])
             for k in system.keys}
        top = max(b.values())
        lam = top / max(a.values())
        a = {k: v / top for k, v in b.items()}
    return lam


@pytest.mark.xfail(strict=True, reason="the shell baseline catalogues are too coarse: the decay system "
                                       "grows at a rate above 1, so no eps > 0 is feasible")
def test_criterion_06_baseline_certificate():
    with criterion(6, "baseline catalogues admit a verified certificate", 1800) as rec:
        a_cat, f_cat, table, s = _baseline()
        mate_in = decay_cert.mate_in_map(a_cat)
        system = decay_cert.build_system(s, table, mate_in)
        rec.detail = f"growth rate of the tuple system {_growth_rate(system):.4f}"
        cert, fail = decay_cert.bisect_epsilon(s, table, hi=Fraction(1, 2), steps=20, mate_in=mate_in)
        if cert is None and fail is not None:
            rec.detail += f"; {fail.describe()}"
        assert cert is not None, "no feasible eps on the bisection grid"
        assert decay_cert.verify(cert, s, table, mate_in) == []
        eng = GammaEngine()
        checked = 0
        for shape, x in _pairs_up_to_four(random.Random(606)):
            if not a_cat.matching(x.region, x.e_x) or not f_cat.matching(x.region, x.e_x):
                continue
            for d, g in enumerate(eng.profile(x, 5), start=1):
                assert g <= decay_cert.decay_bound(cert, d)
            checked += 1
        rec.detail += f"; eps={cert.epsilon} alpha_max={float(cert.alpha_max):.4f}; {checked} pairs bounded"


# ----------------------------------------------------------------- 7

def test_criterion_07_shell_bounds():
    with criterion(7, "shell bounds floor(d/2) <= n_d <= 8d+2 (odd) / 32d-24 (even)", 60) as rec:
        reps = [Vertex(1, 1), Vertex(3, 1), Vertex(2, 2), Vertex(0, 0), Vertex(-1, 1), Vertex(4, 0)]
        parities = set()
        for v in reps:
            parities.add(is_odd(v))
            for d in range(1, 101):
                n = shell_count(v, d)
                upper = 8 * d + 2 if is_odd(v) else 32 * d - 24
                assert d // 2 <= n <= upper, (v, d, n)
        assert parities == {True, False}
        rec.detail = f"{len(reps)} vertices, d = 1..100"


# ----------------------------------------------------------------- 8

def test_criterion_08_frozen_fixture():
    with criterion(8, "frozen two-vertex fixture", 60) as rec:
        g = dynamics.state_graph(dynamics.frozen_config("glauber"))
        assert len(g.states) == 2 and not g.connected
        assert dynamics.state_graph(dynamics.frozen_config("edge_heatbath")).connected
        z = dynamics.state_graph(dynamics.frozen_config("glauber", zero=True))
        assert z.connected
        rec.detail = f"Glauber frozen: {len(g.components())} components; 0-boundary: {len(z.states)} states, connected"


# ----------------------------------------------------------------- 9

def fixture_regions() -> dict:
    out = {
        "frozen pair": frozenset(dynamics.FROZEN_REGION),
        "triangle": TRIANGLE,
        "bowtie (1,1)": ball((1, 1), 1),
        "star (0,0)": ball((0, 0), 1),
    }
    for size, seed in ((6, 1), (8, 2), (9, 3), (10, 4), (11, 5), (12, 6)):
        out[f"grown {size} (seed {seed})"] = grow_region(random.Random(seed), size)
    return out


def test_criterion_09_state_graph_connectivity():
    with criterion(9, "Glauber (0-boundary) and edge heat-bath (random q0-boundaries) connected", 900) as rec:
        regions = fixture_regions()
        rng = random.Random(909)
        glauber = edge_runs = empty = 0
        for name, region in regions.items():
            assert len(region) <= 12
            assert dynamics.count_components(dynamics.ChainConfig(region, {})) == 1, name
            glauber += 1
            if len(region) > 10:
                continue
            bd_vertices = sorted(vertex_boundary(region))
            for _ in range(50):
                bd = {u: rng.randint(0, 5) for u in bd_vertices}
                cfg = dynamics.ChainConfig(region, bd, variant="edge_heatbath")
                k = dynamics.count_components(cfg)
                if k == 0:
                    empty += 1
                    continue
                assert k == 1, (name, bd)
                edge_runs += 1
        rec.detail = (f"{glauber} regions under Glauber; {edge_runs} edge heat-bath boundaries connected "
                      f"({empty} with no colouring)")


# ----------------------------------------------------------------- 10

def _random_state(rng, region):
    while True:
        s = {}
        for v in sorted(region, key=lambda _: rng.random()):
            opts = [c for c in range(1, 6) if c not in {s[u] for u in neighbours(v) if u in s}]
            if not opts:
                break
            s[v] = rng.choice(opts)
        else:
            return s


PATH_CONSTANT = 6


def test_criterion_10_recolouring_paths():
    with criterion(10, f"recolouring paths valid with length <= {PATH_CONSTANT} * Hamming", 600) as rec:
        rng = random.Random(1010)
        worst = 0.0
        total_moves = 0
        for _ in range(1000):
            region = grow_region(rng, rng.randint(1, 15))
            s1, s2 = _random_state(rng, region), _random_state(rng, region)
            rep = dynamics.recolouring_path(region, s1, s2)
            assert dynamics.apply_moves(region, s1, rep.moves) == s2
            assert len(rep.moves) <= PATH_CONSTANT * rep.hamming
            if rep.hamming:
                worst = max(worst, len(rep.moves) / rep.hamming)
            total_moves += len(rep.moves)
        rec.detail = f"1000 paths, {total_moves} moves, observed C = {worst:.3f}"


# ----------------------------------------------------------------- 11

def test_criterion_11_two_equal_neighbours():
    with criterion(11, "two-equal-neighbours checker", 300) as rec:
        res = dynamics.check_two_equal_neighbours(TRIANGLE)
        assert not res.holds
        sigma = res.counterexample
        assert set(sigma) == TRIANGLE
        assert all(sigma[u] != sigma[v] for u in TRIANGLE for v in neighbours(u) if v in TRIANGLE)
        region = dynamics.load_region(_data("lemma9_candidate.json"))
        res = dynamics.check_two_equal_neighbours(region)
        assert res.holds
        rec.detail = f"triangle counterexample {sorted(sigma.values())}; fixture ({len(region)} vertices) holds"


# ----------------------------------------------------------------- 12

def test_criterion_12_glauber_uniform_frequencies():
    with criterion(12, "10^6 Glauber steps on the 2-vertex region are uniform within 3 sigma", 60) as rec:
        cfg = dynamics.frozen_config("glauber", zero=True, seed=0)
        a, b = dynamics.FROZEN_REGION
        states, counts = dynamics.empirical_frequencies(cfg, {a: 1, b: 2}, 10**6, thin=20)
        n = int(counts.sum())
        p = 1 / len(states)
        z = (counts - n * p) / math.sqrt(n * p * (1 - p))
        assert len(states) == 20 and n == 50_000
        assert dynamics.multinomial_band_ok(counts, 3.0)
        rec.detail = f"{n} samples (every 20th step) over {len(states)} states, max |z| = {float(np.abs(z).max()):.2f}"
