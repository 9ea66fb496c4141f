"""Shared random generators for regions, boundaries and pairs."""
from __future__ import annotations

import random

from hypothesis import strategies as st

from kagome_ssm.boundary_pair import EdgeBoundaryPair, is_valid
from kagome_ssm.lattice import Vertex, neighbours
from kagome_ssm.region import edge_boundary


def grow_region(rng: random.Random, size: int, root=(1, 1)) -> frozenset:
    region = {Vertex(*root)}
    while len(region) < size:
        frontier = sorted({u for v in region for u in neighbours(v)} - region)
        region.add(rng.choice(frontier))
    return frozenset(region)


def random_boundary(rng: random.Random, region, q: int = 5, p_zero: float = 0.4) -> dict:
    return {e: (0 if rng.random() < p_zero else rng.randint(1, q)) for e in sorted(edge_boundary(region))}


def random_pair(rng: random.Random, size: int, q: int = 5, p_zero: float = 0.4, tries: int = 200):
    """A random valid edge-boundary pair (rejection sampling on the validity rule)."""
    for _ in range(tries):
        region = grow_region(rng, size)
        bd = sorted(edge_boundary(region))
        e = rng.choice(bd)
        c, cp = rng.sample(range(1, q + 1), 2)
        cols = random_boundary(rng, region, q, p_zero)
        x = EdgeBoundaryPair.make(region, e, c, cp, cols, q)
        if is_valid(x):
            return x
        # fall back to a colouring that is trivially valid
        x = EdgeBoundaryPair.make(region, e, c, cp, {}, q)
        if is_valid(x):
            return x
    raise RuntimeError("no valid pair found")


seeds = st.integers(0, 2**32 - 1)


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list = []
