"""Exact ``mu`` values of edge-boundary pairs and the template family constants.

For a pair ``X`` with pivot colours ``c, c'`` and head ``v``::

    mu_{i,i'}(X) = n_i / (n_i + N_{i,i'}),   N_{i,i'} = sum of n_k over k not in {i, i'}

with ``n`` counted at the head while the distinguished edge is uncoloured.

The family constant of a template ``f`` and class ``m`` maximises
``mu_{1,2}`` over every pair whose region is exactly the template's vertex
set, with pivots 1 and 2 and the boundary restrictions of class ``m``.  The
boundary edges fall into *runs* (edges that consecutive-adjacency forces to
share a colour); a boundary colouring is a colour in ``{0..q}`` per run.

Large templates are split along a one- or two-vertex cut through the head.
Each half is summarised by a matrix of counts indexed by the colours of the
cut vertices; the full count is the entrywise product summed over the second
index.  Half-colourings whose matrices are dominated in every ratio are
discarded before the halves are recombined.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import lattice
from .boundary_pair import EdgeBoundaryPair, adjacent_boundary_edge_pairs
from .coloring import Q_DEFAULT, CountPlan, numpy_colourings
from .lattice import CANONICAL_EDGE, Vertex, edge, neighbours, triangle_mate
from .region import ExtendedRegion, component_of, edge_boundary

try:  # the batch kernel is optional; a numpy path is used otherwise
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None


@dataclass(frozen=True)
class MuValue:
    num: int
    den: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den) if self.den else Fraction(0)

    @property
    def zero_denominator(self) -> bool:
        return self.den == 0


def mu_from_counts(n: Sequence[int], i: int, ip: int) -> MuValue:
    if i == ip:
        raise ValueError("mu needs two distinct colours")
    other = sum(x for k, x in enumerate(n, start=1) if k not in (i, ip))
    return MuValue(n[i - 1], n[i - 1] + other)


def mu(x: EdgeBoundaryPair, i: int, ip: int) -> MuValue:
    return mu_from_counts(x.counts, i, ip)


def mu_max(x: EdgeBoundaryPair) -> Fraction:
    return max(mu(x, x.c, x.cp).value, mu(x, x.cp, x.c).value)


# ------------------------------------------------------------ boundary runs

def boundary_runs(region, e_x) -> list:
    """Classes of non-distinguished boundary edges forced to share a colour."""
    e_x = edge(*e_x)
    bd = sorted(edge_boundary(region) - {e_x})
    parent = {e: e for e in bd}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for _, a, b in adjacent_boundary_edge_pairs(region):
        if a in parent and b in parent:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict = {}
    for e in bd:
        groups.setdefault(find(e), []).append(e)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def edges_adjacent_to(region, e_x) -> set:
    e_x = edge(*e_x)
    out = set()
    for _, a, b in adjacent_boundary_edge_pairs(region):
        if a == e_x:
            out.add(b)
        elif b == e_x:
            out.add(a)
    return out


@dataclass
class FamilyProblem:
    """The boundary-colouring space of one template and class, pivots (1, 2)."""

    region: frozenset
    runs: list
    allowed: list  # per run, tuple of admissible colours
    q: int = Q_DEFAULT
    e_x: tuple = CANONICAL_EDGE

    @property
    def empty(self) -> bool:
        return any(len(a) == 0 for a in self.allowed)

    def run_vertices(self, r: int) -> frozenset:
        return frozenset(a if a in self.region else b for a, b in self.runs[r])

    def colouring(self, z: Sequence[int]) -> dict:
        """Boundary edge colouring (without the distinguished edge) for run colours ``z``."""
        out = {}
        for run, col in zip(self.runs, z):
            for e in run:
                out[e] = int(col)
        return out

    def pair(self, z: Sequence[int]) -> EdgeBoundaryPair:
        return EdgeBoundaryPair.make(self.region, self.e_x, 1, 2, self.colouring(z), self.q)

    def masks(self, z: Sequence[int]) -> dict:
        m = {x: 0 for x in self.region}
        for r, col in enumerate(z):
            if col:
                for u in self.run_vertices(r):
                    m[u] |= 1 << int(col)
        return m


def family_problem(template: ExtendedRegion, m: int, q: int = Q_DEFAULT) -> Optional[FamilyProblem]:
    """Search space of the class-``m`` family of ``template``; ``None`` when it is empty by definition."""
    if m not in (1, 2, 3, 4):
        raise ValueError("m must be in 1..4")
    t = template.canonical()
    region = t.inside
    w, v = CANONICAL_EDGE
    mate = triangle_mate(w, v)
    mate_in = mate in region
    if (m in (1, 2)) != mate_in:
        return None
    runs = boundary_runs(region, (w, v))
    pivots = tuple(c for c in (1, 2) if c <= q)
    full = tuple(range(0, q + 1))
    adj = edges_adjacent_to(region, (w, v))
    allowed = []
    for run in runs:
        a = set(full)
        if adj & set(run):
            a &= set(pivots)
        if m in (1, 2) and edge(w, mate) in run:
            a &= {m}
        if m == 3 and edge(mate, v) in run:
            a &= set(pivots)
        allowed.append(tuple(sorted(a)))
    return FamilyProblem(region, runs, allowed, q)


# ------------------------------------------------ canonical colour symmetry

def _canonical_under_swap(z: Sequence[int], free: Sequence[int], prefix_seen: int = 0) -> bool:
    """First appearances of the interchangeable colours occur in increasing order."""
    nxt = prefix_seen
    for col in z:
        if col in free:
            k = free.index(col)
            if k > nxt:
                return False
            if k == nxt:
                nxt += 1
    return True


def _assignments(allowed: Sequence, free: Sequence[int], prefix_seen: Optional[int] = None):
    """Run colourings, reduced modulo permutations of ``free`` colours when ``prefix_seen`` is given."""
    for z in itertools.product(*allowed):
        if prefix_seen is None or _canonical_under_swap(z, free, prefix_seen):
            yield z


def _free_colours(problem: FamilyProblem) -> tuple:
    # colours other than the pivots are interchangeable when every run admits all of them
    cand = [c for c in range(3, problem.q + 1)]
    return tuple(cand)


def _symmetric(problem: FamilyProblem, free) -> bool:
    return all(set(free) <= set(a) or not (set(free) & set(a)) for a in problem.allowed)


# ---------------------------------------------------------- batch counting

if njit is not None:

    @njit(cache=True)
    def _batch_kernel(key_sets, key_cut, key_w, zs, ncut):  # pragma: no cover - compiled
        nz = zs.shape[0]
        nr = zs.shape[1]
        nk = key_sets.shape[0]
        out = np.zeros((nz, ncut), np.int64)
        for a in range(nz):
            for k in range(nk):
                ok = True
                for r in range(nr):
                    z = zs[a, r]
                    if z != 0 and (key_sets[k, r] >> z) & 1:
                        ok = False
                        break
                if ok:
                    out[a, key_cut[k]] += key_w[k]
        return out

else:  # pragma: no cover
    _batch_kernel = None


def _batch_numpy(key_sets, key_cut, key_w, zs, ncut):
    out = np.zeros((zs.shape[0], ncut), np.int64)
    bits = np.where(zs > 0, np.left_shift(1, zs.astype(np.int64)), 0)
    for a in range(zs.shape[0]):
        ok = np.all((key_sets & bits[a][None, :]) == 0, axis=1)
        np.add.at(out[a], key_cut[ok], key_w[ok])
    return out


@dataclass
class HalfCounter:
    """Counts on a (sub)region as a function of run colours, keyed by the cut colours.

    All proper colourings of the region are enumerated once and grouped by
    the colour set each run sees together with the colours of the cut
    vertices; counting for a run colouring is then a filtered sum.
    """

    region: frozenset
    run_vertex_sets: list
    cut: tuple
    q: int = Q_DEFAULT
    fixed_masks: dict = field(default_factory=dict)

    def __post_init__(self):
        verts, rows = numpy_colourings(self.region, {}, self.q)
        idx = {v: i for i, v in enumerate(verts)}
        rows = rows.astype(np.int64)
        if self.fixed_masks:
            ok = np.ones(rows.shape[0], bool)
            for v, msk in self.fixed_masks.items():
                if msk:
                    ok &= ((msk >> rows[:, idx[v]]) & 1) == 0
            rows = rows[ok]
        nr = len(self.run_vertex_sets)
        sets = np.zeros((rows.shape[0], nr), np.int64)
        for r, vs in enumerate(self.run_vertex_sets):
            for v in vs:
                sets[:, r] |= np.left_shift(1, rows[:, idx[v]])
        cut_idx = np.zeros(rows.shape[0], np.int64)
        for v in self.cut:
            cut_idx = cut_idx * self.q + (rows[:, idx[v]] - 1)
        key = np.concatenate([sets, cut_idx[:, None]], axis=1)
        if rows.shape[0]:
            uniq, counts = np.unique(key, axis=0, return_counts=True)
        else:
            uniq, counts = np.zeros((0, nr + 1), np.int64), np.zeros(0, np.int64)
        self.key_sets = np.ascontiguousarray(uniq[:, :nr])
        self.key_cut = np.ascontiguousarray(uniq[:, nr])
        self.key_w = np.ascontiguousarray(counts.astype(np.int64))
        self.ncut = self.q ** len(self.cut)

    def counts(self, zs) -> np.ndarray:
        zs = np.ascontiguousarray(np.asarray(zs, dtype=np.int64).reshape(-1, len(self.run_vertex_sets)))
        if zs.shape[1] == 0:
            zs = np.zeros((zs.shape[0], 0), np.int64)
        kern = _batch_kernel if _batch_kernel is not None else _batch_numpy
        return kern(self.key_sets, self.key_cut, self.key_w, zs, self.ncut)


def _mu12_from_counts(rows: np.ndarray, q: int):
    """Exact max of mu_{1,2} over rows of head counts; returns (Fraction, row index)."""
    n1 = rows[:, 0]
    den = n1 + rows[:, 2:q].sum(axis=1) if q > 2 else n1
    best, arg = Fraction(0), None
    with np.errstate(divide="ignore", invalid="ignore"):
        approx = np.where(den > 0, n1 / np.maximum(den, 1), 0.0)
    if len(approx) == 0:
        return best, arg
    top = approx.max()
    for a in np.nonzero(approx >= top - 1e-9)[0]:
        val = Fraction(int(n1[a]), int(den[a])) if den[a] else Fraction(0)
        if arg is None or val > best:
            best, arg = val, int(a)
    return best, arg


# ------------------------------------------------------------ family constants

@dataclass
class FamilyResult:
    mu: Fraction
    witness: Optional[tuple]  # run colours attaining the maximum
    problem: Optional[FamilyProblem]
    evaluated: int = 0
    method: str = "empty"

    def witness_colouring(self) -> Optional[dict]:
        if self.witness is None or self.problem is None:
            return None
        return self.problem.colouring(self.witness)


def exhaustive_family_constant(template: ExtendedRegion, m: int, q: int = Q_DEFAULT) -> FamilyResult:
    """Reference: every boundary edge colouring, Def.-style validity checked pair by pair."""
    from .boundary_pair import validate

    prob = family_problem(template, m, q)
    if prob is None:
        return FamilyResult(Fraction(0), None, None)
    t = template.canonical()
    w, v = CANONICAL_EDGE
    mate = triangle_mate(w, v)
    bd = sorted(edge_boundary(t.inside) - {edge(w, v)})
    best, arg, n = Fraction(0), None, 0
    plan = CountPlan(t.inside, (v,), q)
    for cols in itertools.product(range(q + 1), repeat=len(bd)):
        x = EdgeBoundaryPair.make(t.inside, (w, v), 1, 2, dict(zip(bd, cols)), q)
        if validate(x) is not None:
            continue
        if m in (1, 2) and x.colour((w, mate)) != m:
            continue
        if m == 3 and x.colour((mate, v)) not in (1, 2):
            continue
        n += 1
        res = plan.count(x.masks)
        counts = tuple(res.get((c,), 0) for c in range(1, q + 1))
        val = mu_from_counts(counts, 1, 2).value
        if arg is None or val > best:
            best = val
            arg = tuple(x.colour(run[0]) for run in prob.runs)
    return FamilyResult(best, arg, prob, n, "exhaustive")


def direct_family_constant(prob: FamilyProblem, chunk: int = 200_000) -> FamilyResult:
    """Maximise over all run colourings (modulo interchangeable colours) with batched counts."""
    v = CANONICAL_EDGE[1]
    hc = HalfCounter(prob.region, [prob.run_vertices(r) for r in range(len(prob.runs))], (v,), prob.q)
    free = _free_colours(prob)
    sym = 0 if _symmetric(prob, free) else None
    best, arg, n = Fraction(0), None, 0
    buf = []

    def flush():
        nonlocal best, arg, n
        if not buf:
            return
        zs = np.array(buf, dtype=np.int64).reshape(len(buf), len(prob.runs))
        rows = hc.counts(zs)
        val, a = _mu12_from_counts(rows, prob.q)
        n += len(buf)
        if a is not None and (arg is None or val > best):
            best, arg = val, tuple(int(c) for c in zs[a])
        buf.clear()

    for z in _assignments(prob.allowed, free, sym):
        buf.append(z)
        if len(buf) >= chunk:
            flush()
    flush()
    return FamilyResult(best, arg, prob, n, "direct")


# ------------------------------------------------------------------ splitting

@dataclass
class Split:
    cut: tuple  # (head,) or (head, partner)
    left: frozenset  # includes the cut
    right: frozenset  # includes the cut
    left_runs: list  # run indices wholly inside the left half
    right_runs: list
    shared_runs: list

    def cost(self, prob: FamilyProblem) -> float:
        def size(idx):
            out = 1
            for r in idx:
                out *= len(prob.allowed[r])
            return out

        s = size(self.shared_runs)
        return s * (size(self.left_runs) + size(self.right_runs))


def _split_for(prob: FamilyProblem, cut: tuple, left_comps: list, right_comps: list) -> Split:
    left = frozenset(cut).union(*left_comps) if left_comps else frozenset(cut)
    right = frozenset(cut).union(*right_comps) if right_comps else frozenset(cut)
    lr, rr, sr = [], [], []
    for r in range(len(prob.runs)):
        vs = prob.run_vertices(r)
        if vs <= left:
            lr.append(r)
        elif vs <= right:
            rr.append(r)
        else:
            sr.append(r)
    return Split(cut, left, right, lr, rr, sr)


def candidate_splits(prob: FamilyProblem) -> list:
    """All one- and two-vertex cuts through the head with a balanced bipartition of the rest."""
    head = CANONICAL_EDGE[1]
    region = prob.region
    out = []
    cuts = [(head,)] + [(head, x) for x in sorted(region) if x != head]
    for cut in cuts:
        rest = region - set(cut)
        if not rest:
            continue
        comps = []
        left_over = set(rest)
        while left_over:
            comp = component_of(left_over, min(left_over))
            comps.append(comp)
            left_over -= comp
        if len(comps) < 2:
            continue
        comps.sort(key=min)
        for mask in range(1, 2 ** len(comps) - 1):
            if mask & 1 == 0:
                continue  # fix the first component on the left to avoid mirror duplicates
            lc = [c for k, c in enumerate(comps) if mask >> k & 1]
            rc = [c for k, c in enumerate(comps) if not mask >> k & 1]
            out.append(_split_for(prob, cut, lc, rc))
    return out


def best_split(prob: FamilyProblem) -> Optional[Split]:
    splits = candidate_splits(prob)
    if not splits:
        return None
    return min(splits, key=lambda s: (s.cost(prob), len(s.cut), s.cut, sorted(s.left)))


def split_counts(region, cut: Sequence, left: frozenset, right: frozenset, boundary: dict, q: int = Q_DEFAULT):
    """Cut-indexed count matrices of the two halves for one boundary colouring.

    Edges created by the split (from a half into the other half's private
    vertices) carry colour 0; constraints on cut vertices are applied in
    both halves, which leaves the products unchanged.
    """
    cut = tuple(Vertex(*c) for c in cut)
    mats = []
    for half in (left, right):
        masks = {x: 0 for x in half}
        for (a, b), col in boundary.items():
            if not col:
                continue
            inner = a if a in region else b
            if inner in half:
                masks[inner] |= 1 << col
        res = CountPlan(half, cut, q).count(masks)
        mat = np.zeros((q,) * len(cut), dtype=object)
        for key, n in res.items():
            mat[tuple(c - 1 for c in key)] = n
        mats.append(mat)
    return mats[0], mats[1]


def _as_matrix(rows: np.ndarray, q: int, two: bool) -> np.ndarray:
    return rows.reshape(-1, q, q if two else 1)


def dominance_filter(mats: np.ndarray, q: int = Q_DEFAULT) -> list:
    """Indices of half matrices that survive pairwise ratio domination.

    ``a`` dominates ``b`` when ``a[i,k] * b[0,j] <= b[i,k] * a[0,j]`` for every
    row ``i`` other than the second pivot and all ``j, k``; then ``b`` can
    never give a larger ``mu_{1,2}`` than ``a`` whatever the other half is.
    Halves whose first-pivot row is entirely zero give ``mu = 0`` and are
    dropped outright, exact duplicates keep their first index, and among
    mutually dominating matrices one representative is kept.
    """
    mats = np.asarray(mats, dtype=np.int64)
    if mats.ndim == 2:
        mats = mats[:, :, None]
    n = mats.shape[0]
    if n == 0:
        return []
    rows_i = [0] + list(range(2, q))
    _, first = np.unique(mats.reshape(n, -1), axis=0, return_index=True)
    first = first[mats[first, 0].reshape(len(first), -1).any(axis=1)]
    # strong candidates first, so weak ones are rejected against a small set
    top = mats[first, 0].sum(axis=1).astype(float)
    rest = mats[first][:, rows_i].sum(axis=(1, 2)).astype(float)
    order = first[np.lexsort((first, -(top / np.maximum(rest, 1.0))))]
    survivors: list = []
    surv_num = np.zeros((0, len(rows_i)) + mats.shape[2:], np.int64)
    surv_piv = np.zeros((0, mats.shape[2]), np.int64)
    for idx in order:
        b = mats[idx]
        bn, bp = b[rows_i], b[0]
        if survivors:
            # lhs[s,i,k,j] = a[s,i,k] * b[0,j] ; rhs = b[i,k] * a[s,0,j]
            lhs = surv_num[:, :, :, None] * bp[None, None, None, :]
            rhs = bn[None, :, :, None] * surv_piv[:, None, None, :]
            if (lhs <= rhs).reshape(len(survivors), -1).all(axis=1).any():
                continue
            keep = ~(rhs <= lhs).reshape(len(survivors), -1).all(axis=1)
            if not keep.all():
                survivors = [s for s, k in zip(survivors, keep) if k]
                surv_num, surv_piv = surv_num[keep], surv_piv[keep]
        survivors.append(int(idx))
        surv_num = np.concatenate([surv_num, bn[None]], axis=0)
        surv_piv = np.concatenate([surv_piv, bp[None]], axis=0)
    return sorted(survivors)


def _combine(left: np.ndarray, right: np.ndarray, q: int):
    """Exact max of mu_{1,2} over all (left, right) combinations; returns (Fraction, (a, b))."""
    rows_i = [0] + list(range(2, q))
    num = left[:, 0, :] @ right[:, 0, :].T
    den = np.zeros_like(num)
    for i in rows_i:
        den += left[:, i, :] @ right[:, i, :].T
    with np.errstate(divide="ignore", invalid="ignore"):
        approx = np.where(den > 0, num / np.maximum(den, 1), 0.0)
    if approx.size == 0:
        return Fraction(0), None
    top = approx.max()
    best, arg = Fraction(0), None
    for a, b in zip(*np.nonzero(approx >= top - 1e-9)):
        # exact recomputation with Python integers
        n = sum(int(left[a, 0, j]) * int(right[b, 0, j]) for j in range(left.shape[2]))
        d = sum(int(left[a, i, j]) * int(right[b, i, j]) for i in rows_i for j in range(left.shape[2]))
        val = Fraction(n, d) if d else Fraction(0)
        if arg is None or val > best:
            best, arg = val, (int(a), int(b))
    return best, arg


def split_family_constant(prob: FamilyProblem, split: Split, use_filter: bool = True) -> FamilyResult:
    q = prob.q
    two = len(split.cut) == 2
    free = _free_colours(prob)
    sym = _symmetric(prob, free)
    lv = [prob.run_vertices(r) for r in split.left_runs + split.shared_runs]
    rv = [prob.run_vertices(r) for r in split.right_runs + split.shared_runs]
    lv = [vs & split.left for vs in lv]
    rv = [vs & split.right for vs in rv]
    hl = HalfCounter(split.left, lv, split.cut, q)
    hr = HalfCounter(split.right, rv, split.cut, q)
    best, arg, n = Fraction(0), None, 0
    shared_allowed = [prob.allowed[r] for r in split.shared_runs]
    left_allowed = [prob.allowed[r] for r in split.left_runs]
    right_allowed = [prob.allowed[r] for r in split.right_runs]
    for s in _assignments(shared_allowed, free, 0 if sym else None):
        if sym:
            lz = [z for z in itertools.product(*left_allowed) if _canonical_under_swap(tuple(s) + z, free)]
        else:
            lz = list(itertools.product(*left_allowed))
        rz = list(itertools.product(*right_allowed))
        if not lz or not rz:
            continue
        lzz = np.array([tuple(z) + tuple(s) for z in lz], dtype=np.int64).reshape(len(lz), len(lv))
        rzz = np.array([tuple(z) + tuple(s) for z in rz], dtype=np.int64).reshape(len(rz), len(rv))
        lm = _as_matrix(hl.counts(lzz), q, two)
        rm = _as_matrix(hr.counts(rzz), q, two)
        n += len(lz) * len(rz)
        if use_filter:
            li = dominance_filter(lm, q)
            ri = dominance_filter(rm, q)
        else:
            li = list(range(len(lz)))
            ri = list(range(len(rz)))
        if not li or not ri:
            continue
        val, ab = _combine(lm[li], rm[ri], q)
        if ab is not None and (arg is None or val > best):
            zl, zr = lz[li[ab[0]]], rz[ri[ab[1]]]
            full = [0] * len(prob.runs)
            for r, col in zip(split.left_runs, zl):
                full[r] = col
            for r, col in zip(split.right_runs, zr):
                full[r] = col
            for r, col in zip(split.shared_runs, s):
                full[r] = col
            best, arg = val, tuple(int(c) for c in full)
    return FamilyResult(best, arg, prob, n, "split")


def family_constant(template: ExtendedRegion, m: int, q: int = Q_DEFAULT, method: str = "auto",
                    direct_limit: float = 2e5) -> FamilyResult:
    """``mu`` constant of the class-``m`` family of ``template`` (0 when the family is empty)."""
    prob = family_problem(template, m, q)
    if prob is None or prob.empty:
        return FamilyResult(Fraction(0), None, prob)
    if method == "exhaustive":
        return exhaustive_family_constant(template, m, q)
    size = 1
    for a in prob.allowed:
        size *= len(a)
    if method == "direct" or (method == "auto" and size <= direct_limit):
        return direct_family_constant(prob)
    split = best_split(prob)
    if split is None or (method == "auto" and split.cost(prob) >= size):
        return direct_family_constant(prob)
    return split_family_constant(prob, split, use_filter=(method != "split-nofilter"))


# ------------------------------------------------------------------- tables

@dataclass
class MuTable:
    """Family constants for every template of an F catalogue, keyed by ``(f, m)``."""

    catalogue_hash: str
    entries: dict  # (f, m) -> Fraction
    witnesses: dict = field(default_factory=dict)  # (f, m) -> run colouring as edge list

    def __getitem__(self, key) -> Fraction:
        return self.entries[key]

    def nonempty(self, f: int, m: int) -> bool:
        return (f, m) in self.witnesses

    def to_json(self) -> dict:
        rows = []
        for (f, m) in sorted(self.entries):
            val = self.entries[(f, m)]
            rows.append({
                "f": f,
                "m": m,
                "mu": f"{val.numerator}/{val.denominator}",
                "witness": self.witnesses.get((f, m)),
            })
        return {"catalogue_hash": self.catalogue_hash, "entries": rows}

    @classmethod
    def from_json(cls, doc: dict) -> "MuTable":
        entries, wit = {}, {}
        for row in doc["entries"]:
            key = (int(row["f"]), int(row["m"]))
            entries[key] = Fraction(row["mu"])
            if row.get("witness") is not None:
                wit[key] = row["witness"]
        return cls(doc["catalogue_hash"], entries, wit)

    def digest(self) -> str:
        import hashlib
        import json

        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _witness_list(res: FamilyResult):
    cols = res.witness_colouring()
    if cols is None:
        return None
    return [[list(a), list(b), c] for (a, b), c in sorted(cols.items())]


def compute_mu_table(catalogue, q: int = Q_DEFAULT, method: str = "auto", progress=None) -> MuTable:
    """Constants for all ``(f, m)``; families empty by definition get 0 and no witness."""
    entries, wit = {}, {}
    for f, tmpl in enumerate(catalogue.entries):
        for m in (1, 2, 3, 4):
            res = family_constant(tmpl, m, q, method)
            entries[(f, m)] = res.mu
            w = _witness_list(res)
            if w is not None:
                wit[(f, m)] = w
            if progress is not None:
                progress(f, m, res)
    return MuTable(catalogue.digest(), entries, wit)


def save_mu_table(table: MuTable, path) -> None:
    import json

    with open(path, "w") as fh:
        json.dump(table.to_json(), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_mu_table(path) -> MuTable:
    import json

    with open(path) as fh:
        return MuTable.from_json(json.load(fh))
