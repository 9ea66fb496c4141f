"""Heat-bath chains on proper colourings, exact state graphs, and recolouring paths.

Boundaries here are q0-colourings of the vertex boundary (colour 0 imposes
nothing).  Three chain variants are provided:

* ``glauber``: pick a region vertex uniformly, recolour it uniformly among
  the colours not used by its neighbours (its own colour included);
* ``edge_heatbath``: pick an edge of ``E(R)`` uniformly and resample its
  region endpoints jointly and uniformly;
* ``ball``: pick ``v`` uniformly among the vertices within distance ``d``
  of the region and resample ``ball(v, d) & R`` exactly, for ``d <= 2``.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .coloring import Q_DEFAULT, enumerate_colourings, numpy_colourings, vertex_boundary_masks
from .lattice import Vertex, ball, edge, neighbours
from .region import edge_set, make_region, vertex_boundary

VARIANTS = ("glauber", "edge_heatbath", "ball")


class StateBudgetExceeded(RuntimeError):
    pass


class PathSearchError(RuntimeError):
    def __init__(self, message: str, state: Optional[dict] = None):
        super().__init__(message)
        self.state = state


@dataclass
class ChainConfig:
    region: frozenset
    boundary: dict = field(default_factory=dict)  # vertex boundary -> colour (0 = none)
    q: int = Q_DEFAULT
    variant: str = "glauber"
    radius: int = 0
    seed: int = 0

    def __post_init__(self):
        self.region = make_region(self.region)
        bd = vertex_boundary(self.region)
        b = {Vertex(*k): int(c) for k, c in self.boundary.items()}
        extra = set(b) - bd
        if extra:
            raise ValueError(f"boundary colouring has vertices off the boundary: {sorted(extra)[:3]}")
        self.boundary = {u: b.get(u, 0) for u in sorted(bd)}
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == "ball" and not 0 <= self.radius <= 2:
            raise ValueError("ball resampling supports radius 0..2")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(self.seed))

    @property
    def vertices(self) -> list:
        return sorted(self.region)

    @property
    def edges(self) -> list:
        return sorted(edge_set(self.region))

    @property
    def centres(self) -> list:
        """Ball centres: every vertex within ``radius`` of the region."""
        out = set()
        for v in self.region:
            out |= ball(v, self.radius)
        return sorted(out)


def _allowed(cfg: ChainConfig, sigma: Mapping, v) -> list:
    used = set()
    for u in neighbours(v):
        c = sigma[u] if u in cfg.region else cfg.boundary.get(u, 0)
        if c:
            used.add(c)
    return [c for c in range(1, cfg.q + 1) if c not in used]


def check_state(cfg: ChainConfig, sigma: Mapping) -> None:
    if set(sigma) != set(cfg.region):
        raise ValueError("state domain differs from the region")
    for v in cfg.region:
        c = sigma[v]
        if not 1 <= c <= cfg.q:
            raise ValueError(f"colour {c} at {v} out of range")
        for u in neighbours(v):
            other = sigma[u] if u in cfg.region else cfg.boundary.get(u, 0)
            if other == c:
                raise ValueError(f"state is not proper/agreeing at {v}")


def _resample(cfg: ChainConfig, sigma: dict, block, rng) -> None:
    """Replace ``sigma`` on ``block`` by a uniform colouring given everything else."""
    block = sorted(block)
    bset = frozenset(block)
    masks = {}
    for v in block:
        m = 0
        for u in neighbours(v):
            if u in bset:
                continue
            c = sigma[u] if u in cfg.region else cfg.boundary.get(u, 0)
            if c:
                m |= 1 << c
        masks[v] = m
    opts = enumerate_colourings(bset, masks, cfg.q)
    pick = opts[int(rng.integers(len(opts)))]
    sigma.update(pick)


def step(cfg: ChainConfig, sigma: dict, rng: np.random.Generator) -> dict:
    """One transition (in place); returns ``sigma``."""
    verts = cfg.vertices
    if cfg.variant == "glauber":
        v = verts[int(rng.integers(len(verts)))]
        allowed = _allowed(cfg, sigma, v)
        assert allowed, "a region vertex always keeps its own colour"
        sigma[v] = allowed[int(rng.integers(len(allowed)))]
    elif cfg.variant == "edge_heatbath":
        es = cfg.edges
        a, b = es[int(rng.integers(len(es)))]
        _resample(cfg, sigma, [x for x in (a, b) if x in cfg.region], rng)
    else:
        centres = cfg.centres
        v = centres[int(rng.integers(len(centres)))]
        _resample(cfg, sigma, ball(v, cfg.radius) & cfg.region, rng)
    return sigma


def run(cfg: ChainConfig, sigma0: Mapping, t: int, rng: Optional[np.random.Generator] = None) -> dict:
    sigma = {Vertex(*k): int(c) for k, c in sigma0.items()}
    check_state(cfg, sigma)
    rng = rng or cfg.rng()
    for _ in range(t):
        step(cfg, sigma, rng)
    return sigma


# -------------------------------------------------------------- state graph

@dataclass
class StateGraph:
    vertices: list  # region vertices, the column order of each state
    states: list  # tuples of colours
    adjacency: list  # adjacency[i] = sorted neighbour state indices

    def components(self) -> list:
        seen = [False] * len(self.states)
        comps = []
        for s in range(len(self.states)):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [s], deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adjacency[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        queue.append(y)
            comps.append(sorted(comp))
        return comps

    @property
    def connected(self) -> bool:
        return len(self.components()) <= 1

    def isolated(self) -> list:
        return [self.states[i] for i in range(len(self.states)) if not self.adjacency[i]]

    def is_symmetric(self) -> bool:
        sets = [set(a) for a in self.adjacency]
        return all(i in sets[j] for i in range(len(sets)) for j in sets[i])


def all_states(region, boundary: Mapping, q: int = Q_DEFAULT, budget: int = 2_000_000) -> tuple:
    region = make_region(region)
    masks = vertex_boundary_masks(region, boundary, q)
    verts = sorted(region)
    try:
        cols = enumerate_colourings(region, masks, q, limit=budget)
    except OverflowError as exc:
        raise StateBudgetExceeded(str(exc)) from exc
    return verts, sorted(tuple(s[v] for v in verts) for s in cols)


def state_graph(cfg: ChainConfig, budget: int = 2_000_000) -> StateGraph:
    """All agreeing proper colourings and the pairs joined by a single move of the variant."""
    verts, states = all_states(cfg.region, cfg.boundary, cfg.q, budget)
    index = {s: i for i, s in enumerate(states)}
    pos = {v: i for i, v in enumerate(verts)}
    blocks = _blocks(cfg, pos)
    adj = [set() for _ in states]
    for blk in blocks:
        rest = [i for i in range(len(verts)) if i not in blk]
        groups: dict = {}
        for k, s in enumerate(states):
            groups.setdefault(tuple(s[i] for i in rest), []).append(k)
        for g in groups.values():
            for a in g:
                adj[a].update(b for b in g if b != a)
    return StateGraph(verts, states, [sorted(a) for a in adj])


def _blocks(cfg: ChainConfig, pos: Mapping) -> list:
    if cfg.variant == "glauber":
        return [(pos[v],) for v in cfg.vertices]
    if cfg.variant == "edge_heatbath":
        return sorted({tuple(sorted(pos[x] for x in e if x in pos)) for e in cfg.edges})
    return sorted({tuple(sorted(pos[x] for x in ball(v, cfg.radius) & cfg.region)) for v in cfg.centres})


def component_labels(cfg: ChainConfig) -> tuple:
    """Connected components of the state graph without materialising its edges.

    States are integer codes; for each block the states sharing the colours
    off the block form a clique, so repeated group-minimum sweeps followed by
    pointer jumping converge to the least state index of every component.
    Returns ``(vertices, rows, labels)``.
    """
    bd = {}
    for u, c in cfg.boundary.items():
        if c:
            for v in neighbours(u):
                if v in cfg.region:
                    bd[edge(u, v)] = c
    verts, rows = numpy_colourings(cfg.region, bd, cfg.q)
    n = rows.shape[0]
    weights = np.array([cfg.q ** i for i in range(len(verts))], dtype=np.int64)
    digits = rows.astype(np.int64) - 1
    codes = digits @ weights
    del digits
    pos = {v: i for i, v in enumerate(verts)}
    orders = []
    for blk in _blocks(cfg, pos):
        key = codes - (rows[:, list(blk)].astype(np.int64) - 1) @ weights[list(blk)]
        order = np.argsort(key, kind="stable").astype(np.int32 if n < 2**31 else np.int64)
        sk = key[order]
        starts = np.flatnonzero(np.r_[True, sk[1:] != sk[:-1]])
        if len(starts) < n:  # blocks whose every group is a singleton add nothing
            orders.append((order, starts, np.diff(np.r_[starts, n])))
    labels = np.arange(n, dtype=np.int64)
    changed = True
    while changed:
        changed = False
        for order, starts, sizes in orders:
            mins = np.minimum.reduceat(labels[order], starts)
            new = np.repeat(mins, sizes)
            if np.any(new < labels[order]):
                changed = True
                labels[order] = new
        while True:
            nxt = labels[labels]
            if np.array_equal(nxt, labels):
                break
            labels = nxt
    return verts, rows, labels


def count_components(cfg: ChainConfig) -> int:
    _, _, labels = component_labels(cfg)
    return int(np.count_nonzero(labels == np.arange(len(labels))))


# ------------------------------------------------------ two equal neighbours

@dataclass
class NeighbourCheck:
    holds: bool
    checked: int
    counterexample: Optional[dict] = None


def check_two_equal_neighbours(region, q: int = 5, node_budget: int = 50_000_000) -> NeighbourCheck:
    """Does every proper ``q``-colouring of ``region`` have a vertex with two equally coloured in-region neighbours?

    A colouring escapes the property exactly when it is proper and any two
    vertices with a common in-region neighbour differ, so the search is an
    exhaustive backtracking over colourings that prunes a branch as soon as
    either condition fails.  ``checked`` counts the partial colourings visited.
    """
    region = make_region(region)
    order = _dense_order(region)
    pos = {v: i for i, v in enumerate(order)}
    conflict = {v: set() for v in order}
    for v in order:
        nb = [u for u in neighbours(v) if u in region]
        for u in nb:
            conflict[v].add(u)
        for i in range(len(nb)):
            for j in range(i + 1, len(nb)):
                conflict[nb[i]].add(nb[j])
                conflict[nb[j]].add(nb[i])
    earlier = [[pos[u] for u in conflict[v] if pos[u] < k] for k, v in enumerate(order)]
    cur = [0] * len(order)
    nodes = 0
    found = None

    def rec(k: int, top: int) -> bool:
        nonlocal nodes, found
        if k == len(order):
            found = dict(zip(order, cur))
            return True
        used = {cur[j] for j in earlier[k]}
        # colours above top+1 are interchangeable: try only the first unused one
        for c in range(1, min(q, top + 1) + 1):
            if c in used:
                continue
            nodes += 1
            if nodes > node_budget:
                raise StateBudgetExceeded("search node budget exhausted")
            cur[k] = c
            if rec(k + 1, max(top, c)):
                return True
        cur[k] = 0
        return False

    rec(0, 0)
    if found is not None:
        return NeighbourCheck(False, nodes, found)
    return NeighbourCheck(True, nodes)


def _dense_order(region) -> list:
    """Greedy order placing next the vertex with most already-placed neighbours."""
    left = set(region)
    order = [min(left)]
    left.discard(order[0])
    placed = set(order)
    while left:
        def score(v):
            direct = sum(1 for u in neighbours(v) if u in placed)
            return (direct, -v[0], -v[1])
        nxt = max(left, key=score)
        order.append(nxt)
        placed.add(nxt)
        left.discard(nxt)
    return order


def check_two_equal_neighbours_naive(region, q: int = 5) -> NeighbourCheck:
    """Oracle: enumerate every proper colouring and test each one."""
    region = make_region(region)
    verts, rows = numpy_colourings(region, {}, q)
    col = {v: i for i, v in enumerate(verts)}
    bad = np.zeros(rows.shape[0], dtype=bool)
    for v in verts:
        nb = [col[u] for u in neighbours(v) if u in col]
        for i in range(len(nb)):
            for j in range(i + 1, len(nb)):
                bad |= rows[:, nb[i]] == rows[:, nb[j]]
    good = np.flatnonzero(~bad)
    if good.size:
        r = rows[good[0]]
        return NeighbourCheck(False, int(rows.shape[0]), {v: int(r[i]) for i, v in enumerate(verts)})
    return NeighbourCheck(True, int(rows.shape[0]))


# ----------------------------------------------------------- recolouring path

@dataclass
class PathReport:
    moves: list  # (vertex, new colour)
    hamming: int

    @property
    def ratio(self) -> float:
        return len(self.moves) / self.hamming if self.hamming else 0.0


class _Recolourer:
    def __init__(self, region, sigma, boundary, q, radius_cap):
        self.region = region
        self.sigma = dict(sigma)
        self.boundary = boundary
        self.q = q
        self.cap = radius_cap
        self.moves: list = []

    def colour_of(self, u, sigma=None):
        sigma = self.sigma if sigma is None else sigma
        return sigma[u] if u in self.region else self.boundary.get(u, 0)

    def free(self, v, sigma=None) -> list:
        """Colours ``v`` could move to (own colour excluded)."""
        sigma = self.sigma if sigma is None else sigma
        used = {self.colour_of(u, sigma) for u in neighbours(v)}
        return [c for c in range(1, self.q + 1) if c not in used and c != sigma[v]]

    def locked(self, v, sigma=None) -> bool:
        return not self.free(v, sigma)

    def simulate(self, seq) -> Optional[dict]:
        """Apply ``seq`` to a copy; ``None`` if any move is improper."""
        s = dict(self.sigma)
        for v, c in seq:
            if any(self.colour_of(u, s) == c for u in neighbours(v)):
                return None
            s[v] = c
        return s

    def commit(self, seq) -> None:
        s = self.simulate(seq)
        assert s is not None
        self.sigma = s
        self.moves.extend(seq)

    # the cases below each return a move list or None
    def _clear_one(self, v, w, target, goal):
        """Moves after which ``w`` no longer carries ``target``, keeping ``v``'s other neighbours."""
        alts = self.free(w)
        alts = [c for c in alts if c != target]
        if alts:
            pick = goal[w] if goal[w] in alts else alts[0]
            return [(w, pick)]
        return None

    def recolour(self, v, goal) -> None:
        target = goal[v]
        holders = [u for u in neighbours(v) if u in self.region and self.sigma[u] == target]
        if not holders:
            self.commit([(v, target)])
            return
        if len(holders) == 2:
            for w in holders:
                seq = self._clear_one(v, w, target, goal)
                if seq is not None:
                    self.commit(seq)
                    break
            else:
                seq = self._two_locked(v, holders, target)
                if seq is None:
                    raise PathSearchError(f"cannot clear a second neighbour of {v}", dict(self.sigma))
                self.commit(seq)
            holders = [u for u in neighbours(v) if u in self.region and self.sigma[u] == target]
        w = holders[0]
        seq = self._clear_one(v, w, target, goal)
        if seq is not None:
            self.commit(seq + [(v, target)])
            return
        seq = self._swap_via_third(v, w, target)
        if seq is None:
            seq = self._swap_via_path(v, w, target)
        if seq is None:
            raise PathSearchError(f"no unlocking path for {v} within radius {self.cap}", dict(self.sigma))
        self.commit(seq)

    def _two_locked(self, v, holders, target):
        old = self.sigma[v]
        for x in self.free(v):
            if x == target:
                continue
            for w in holders:
                seq = [(v, x), (w, old)]
                if self.simulate(seq) is not None:
                    return seq
        return None

    def _swap_via_third(self, v, w, target):
        old = self.sigma[v]
        for x in self.free(v):
            if x == target:
                continue
            seq = [(v, x), (w, old), (v, target)]
            if self.simulate(seq) is not None:
                return seq
        return None

    def _paths(self, start, avoid):
        """Shortest chordless paths from ``start`` through locked vertices to an unlocked one."""
        if not self.locked(start):
            yield [start]
            return
        parent = {start: None}
        depth = {start: 0}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            if depth[x] >= self.cap:
                continue
            for y in sorted(neighbours(x)):
                if y not in self.region or y in avoid or y in parent:
                    continue
                parent[y] = x
                depth[y] = depth[x] + 1
                path = [y]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                path.reverse()
                if not self.locked(y):
                    yield path
                else:
                    queue.append(y)

    def _swap_via_path(self, v, w, target):
        """Cascade along a locked path, swap ``v``/``w``, then unwind the path."""
        for y in neighbours(v):
            if y not in self.region or y == w:
                continue
            for path in self._paths(y, {v, w}):
                u = path[-1]
                old = {p: self.sigma[p] for p in path}
                for first in self.free(u):
                    cascade = [(u, first)]
                    for k in range(len(path) - 2, -1, -1):
                        cascade.append((path[k], old[path[k + 1]]))
                    s = self.simulate(cascade)
                    if s is None:
                        continue
                    saved = self.sigma
                    self.sigma = s
                    try:
                        for x in [c for c in self.free(v) if c != target] + [None]:
                            if x is None:
                                mid = None
                                break
                            mid = [(v, x), (w, saved[v]), (v, target)]
                            if self.simulate(mid) is None:
                                mid = [(v, x), (w, saved[v])]
                                s2 = self.simulate(mid)
                                if s2 is None or any(self.colour_of(n, s2) == target for n in neighbours(v)):
                                    mid = None
                                    continue
                                mid = mid + [(v, target)]
                            break
                        if mid is None:
                            continue
                        s3 = self.simulate(mid)
                        if s3 is None:
                            continue
                        unwind = [(p, old[p]) for p in path]
                        self.sigma = s3
                        if self.simulate(unwind) is None:
                            continue
                        return cascade + mid + unwind
                    finally:
                        self.sigma = saved
        return None


def recolouring_path(region, sigma1: Mapping, sigma2: Mapping, boundary: Optional[Mapping] = None,
                     q: int = 5, radius_cap: int = 8) -> PathReport:
    """Single-vertex moves turning ``sigma1`` into ``sigma2``; every intermediate colouring is proper."""
    region = make_region(region)
    boundary = {Vertex(*k): c for k, c in (boundary or {}).items()}
    s1 = {Vertex(*k): int(c) for k, c in sigma1.items()}
    goal = {Vertex(*k): int(c) for k, c in sigma2.items()}
    r = _Recolourer(region, s1, boundary, q, radius_cap)
    m = sum(1 for v in region if s1[v] != goal[v])
    for _ in range(len(region) + 1):
        diff = sorted(v for v in region if r.sigma[v] != goal[v])
        if not diff:
            return PathReport(r.moves, m)
        before = set(v for v in region if r.sigma[v] == goal[v])
        r.recolour(diff[0], goal)
        after = set(v for v in region if r.sigma[v] == goal[v])
        if not before < after:
            raise PathSearchError("a recolouring step disturbed an agreeing vertex", dict(r.sigma))
    raise PathSearchError("recolouring did not terminate", dict(r.sigma))


def apply_moves(region, sigma: Mapping, moves: Sequence, boundary: Optional[Mapping] = None, q: int = 5) -> dict:
    """Replay ``moves`` checking properness after each; raises ``ValueError`` on a bad move."""
    region = make_region(region)
    boundary = boundary or {}
    s = {Vertex(*k): int(c) for k, c in sigma.items()}
    for v, c in moves:
        if v not in region or not 1 <= c <= q:
            raise ValueError(f"bad move {(v, c)}")
        for u in neighbours(v):
            other = s[u] if u in region else boundary.get(u, 0)
            if other == c:
                raise ValueError(f"move {(v, c)} is improper")
        s[v] = c
    return s


# ------------------------------------------------------------- mixing demos

@dataclass
class TVEstimate:
    t: int
    tv: float
    lo: float
    hi: float


def tv_to_uniform(cfg: ChainConfig, sigma0: Mapping, t: int, trials: int, z: float = 1.96,
                  budget: int = 100_000) -> TVEstimate:
    """Monte-Carlo ``d_TV(P^t(sigma0, .), uniform)`` with a normal-approximation band.

    The band is ``sum_s |p_s - 1/N|`` propagated through per-state binomial
    standard errors, which is conservative for the plug-in estimator.
    """
    verts, states = all_states(cfg.region, cfg.boundary, cfg.q, budget)
    n = len(states)
    index = {s: i for i, s in enumerate(states)}
    start = tuple(int(sigma0[v]) for v in verts)
    if t == 0:
        exact = 1.0 - 1.0 / n
        return TVEstimate(0, exact, exact, exact)
    rng = cfg.rng()
    hits = np.zeros(n)
    for _ in range(trials):
        s = run(cfg, dict(zip(verts, start)), t, rng)
        hits[index[tuple(s[v] for v in verts)]] += 1
    p = hits / trials
    tv = 0.5 * float(np.abs(p - 1.0 / n).sum())
    se = 0.5 * float(np.sqrt(p * (1 - p) / trials).sum())
    return TVEstimate(t, tv, max(0.0, tv - z * se), min(1.0, tv + z * se))


def empirical_frequencies(cfg: ChainConfig, sigma0: Mapping, steps: int, thin: int = 1) -> tuple:
    """Visit counts of each state, recorded every ``thin`` transitions along one trajectory.

    Consecutive states are correlated; thinning makes the recorded samples
    close to independent so multinomial bands apply.  Glauber runs take a
    fast path that draws its random numbers in bulk.
    """
    verts, states = all_states(cfg.region, cfg.boundary, cfg.q)
    index = {s: i for i, s in enumerate(states)}
    rng = cfg.rng()
    sigma = {Vertex(*k): int(c) for k, c in sigma0.items()}
    check_state(cfg, sigma)
    counts = np.zeros(len(states), dtype=np.int64)
    if cfg.variant != "glauber":
        for t in range(1, steps + 1):
            step(cfg, sigma, rng)
            if t % thin == 0:
                counts[index[tuple(sigma[v] for v in verts)]] += 1
        return states, counts
    pos = {v: i for i, v in enumerate(verts)}
    nbrs = [[pos[u] for u in neighbours(v) if u in pos] for v in verts]
    fixed = []
    for v in verts:
        m = 0
        for u in neighbours(v):
            c = cfg.boundary.get(u, 0) if u not in pos else 0
            if c:
                m |= 1 << c
        fixed.append(m)
    lists = [[c for c in range(1, cfg.q + 1) if not m >> c & 1] for m in range(1 << (cfg.q + 1))]
    cur = [sigma[v] for v in verts]
    chunk = 1 << 16
    t = 0
    while t < steps:
        n = min(chunk, steps - t)
        vs = rng.integers(len(verts), size=n).tolist()
        us = rng.random(n).tolist()
        for k in range(n):
            i = vs[k]
            m = fixed[i]
            for j in nbrs[i]:
                m |= 1 << cur[j]
            allowed = lists[m & ~(1 << cur[i])]
            cur[i] = allowed[int(us[k] * len(allowed))]
            if (t + k + 1) % thin == 0:
                counts[index[tuple(cur)]] += 1
        t += n
    return states, counts


def multinomial_band_ok(counts, sigmas: float = 3.0) -> bool:
    n = int(np.sum(counts))
    k = len(counts)
    p = 1.0 / k
    sd = math.sqrt(n * p * (1 - p))
    return bool(np.all(np.abs(np.asarray(counts) - n * p) <= sigmas * sd))


# ---------------------------------------------------------------- fixtures

FROZEN_REGION = (Vertex(1, 1), Vertex(3, 1))
FROZEN_BOUNDARY = {Vertex(-1, 1): 3, Vertex(0, 0): 4, Vertex(2, 2): 5, Vertex(5, 1): 3, Vertex(4, 0): 4}


def frozen_config(variant: str = "glauber", zero: bool = False, seed: int = 0) -> ChainConfig:
    bd = {} if zero else FROZEN_BOUNDARY
    return ChainConfig(frozenset(FROZEN_REGION), bd, 5, variant, 0, seed)


def load_region(path) -> frozenset:
    with open(path) as fh:
        doc = json.load(fh)
    pts = doc["region"] if isinstance(doc, dict) else doc
    return make_region(tuple(p) for p in pts)


def load_boundary(path) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    items = doc["boundary"] if isinstance(doc, dict) else doc
    return {Vertex(*p): int(c) for p, c in items}
