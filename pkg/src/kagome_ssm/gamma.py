"""Marginals at the head, the optimal coupling, and the recursive decay sums ``Gamma^d``.

``Gamma^1(X) = nu(X)`` is the total variation distance between the head
marginals under the two boundary colourings.  For ``d > 1``::

    Gamma^d(X) = sum_{c != c'} p(c, c') * sum_i Gamma^{d-1}(X_i(c, c'))

where ``p`` is the canonical optimal coupling and ``X_i`` are the child pairs.
The recursion is memoised on a canonical form of each pair: the region is
trimmed to the head's component, moved by the lattice automorphism onto the
canonical edge, and colours are renamed so the pivots become 1 and 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .boundary_pair import EdgeBoundaryPair, child
from .lattice import CANONICAL_EDGE, distance, edge, to_canonical
from .region import component_of


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class MarginalPair:
    D: tuple
    D_prime: tuple
    empty: bool = False


@dataclass(frozen=True)
class CouplingTable:
    p: tuple  # q x q tuple of Fractions, p[i-1][j-1] = Pr[C(v)=i, C'(v)=j]

    @property
    def nu(self) -> Fraction:
        q = len(self.p)
        return sum((self.p[i][j] for i in range(q) for j in range(q) if i != j), Fraction(0))

    def off_diagonal(self):
        q = len(self.p)
        for i in range(q):
            for j in range(q):
                if i != j and self.p[i][j]:
                    yield i + 1, j + 1, self.p[i][j]


def marginals_from_counts(n: Sequence[int], c: int, cp: int) -> MarginalPair:
    q = len(n)
    tot = sum(n)
    t1, t2 = tot - n[c - 1], tot - n[cp - 1]
    if t1 == 0 or t2 == 0:
        z = tuple(Fraction(0) for _ in range(q))
        return MarginalPair(z, z, True)
    d1 = tuple(Fraction(0) if i == c else Fraction(n[i - 1], t1) for i in range(1, q + 1))
    d2 = tuple(Fraction(0) if i == cp else Fraction(n[i - 1], t2) for i in range(1, q + 1))
    return MarginalPair(d1, d2)


def marginals(x: EdgeBoundaryPair) -> MarginalPair:
    """Head distributions under ``B`` (pivot ``c``) and ``B'`` (pivot ``c'``)."""
    return marginals_from_counts(x.counts, x.c, x.cp)


def optimal_coupling(mp: MarginalPair, order: Optional[Sequence[int]] = None) -> CouplingTable:
    """Diagonal ``min(D, D')`` plus greedy matching of surplus to deficit.

    Surplus colours and deficit colours are visited in ``order`` (increasing
    colour index by default).  The off-diagonal mass always equals the total
    variation distance.
    """
    if mp.empty:
        raise ValueError("no agreeing colourings: marginals are undefined")
    q = len(mp.D)
    order = list(order) if order is not None else list(range(1, q + 1))
    p = [[Fraction(0)] * q for _ in range(q)]
    surplus, deficit = {}, {}
    for i in range(q):
        a, b = mp.D[i], mp.D_prime[i]
        p[i][i] = min(a, b)
        if a > b:
            surplus[i + 1] = a - b
        elif b > a:
            deficit[i + 1] = b - a
    rows = [c for c in order if c in surplus]
    cols = [c for c in order if c in deficit]
    ci = 0
    for r in rows:
        s = surplus[r]
        while s > 0:
            col = cols[ci]
            take = min(s, deficit[col])
            p[r - 1][col - 1] += take
            s -= take
            deficit[col] -= take
            if deficit[col] == 0:
                ci += 1
    return CouplingTable(tuple(tuple(row) for row in p))


def coupling(x: EdgeBoundaryPair, order=None) -> CouplingTable:
    return optimal_coupling(marginals(x), order)


def nu(x: EdgeBoundaryPair) -> Fraction:
    return coupling(x).nu


# ------------------------------------------------------------- canonical form

def trimmed(x: EdgeBoundaryPair) -> EdgeBoundaryPair:
    """Restrict to the head's component (exact for q >= 5, where every component is colourable)."""
    comp = component_of(x.region, x.v)
    if len(comp) == len(x.region) or x.q < 5:
        return x
    cols = {e: col for e, col in x.colours if e[0] in comp or e[1] in comp}
    return EdgeBoundaryPair.make(comp, (x.w, x.v), x.c, x.cp, cols, x.q)


def canonical_key(x: EdgeBoundaryPair) -> tuple:
    x = trimmed(x)
    f = to_canonical(x.w, x.v)
    region = frozenset(f(p) for p in x.region)
    items = sorted((edge(f(a), f(b)), col) for (a, b), col in x.colours)
    rename = {x.c: 1, x.cp: 2}
    nxt = 3
    out = []
    for e, col in items:
        if col not in rename:
            rename[col] = nxt
            nxt += 1
        out.append((e, rename[col]))
    return (region, tuple(out), x.q)


def canonical_pair(x: EdgeBoundaryPair) -> EdgeBoundaryPair:
    region, cols, q = canonical_key(x)
    return EdgeBoundaryPair(region, CANONICAL_EDGE[0], CANONICAL_EDGE[1], 1, 2, cols, q)


# ------------------------------------------------------------------ recursion

@dataclass
class GammaEngine:
    """Memoised exact ``Gamma^d`` evaluator with a node budget."""

    budget: int = 200_000
    order: Optional[tuple] = None
    memo: dict = field(default_factory=dict)

    def profile(self, x: Optional[EdgeBoundaryPair], d: int) -> list:
        """``[Gamma^1, ..., Gamma^d]`` for pair ``x`` (all zero for the empty pair)."""
        if x is None:
            return [Fraction(0)] * d
        key = canonical_key(x)
        got = self.memo.get(key)
        if got is not None and len(got) >= d:
            return got[:d]
        if len(self.memo) >= self.budget:
            raise BudgetExceeded(f"memo budget of {self.budget} pairs exhausted")
        cx = EdgeBoundaryPair(key[0], CANONICAL_EDGE[0], CANONICAL_EDGE[1], 1, 2, key[1], key[2])
        tab = coupling(cx, self.order)
        out = [tab.nu] + [Fraction(0)] * (d - 1)
        if d > 1:
            for c, cp, pr in tab.off_diagonal():
                for i in (1, 2, 3):
                    ch = child(cx, i, c, cp)
                    if ch is None:
                        continue
                    sub = self.profile(ch, d - 1)
                    for k in range(1, d):
                        out[k] += pr * sub[k - 1]
        self.memo[key] = out
        return out

    def gamma(self, x: Optional[EdgeBoundaryPair], d: int) -> Fraction:
        if d < 1:
            raise ValueError("d must be at least 1")
        return self.profile(x, d)[d - 1]


def gamma_d(x: EdgeBoundaryPair, d: int, budget: int = 200_000) -> Fraction:
    return GammaEngine(budget).gamma(x, d)


# --------------------------------------------------------------- literal tree

@dataclass
class TreeEdge:
    weight: Fraction
    name: object  # a vertex, or None for a degenerate edge
    child: "TreeNode"


@dataclass
class TreeNode:
    edges: list = field(default_factory=list)


def build_tree(x: EdgeBoundaryPair, depth: int, order=None) -> TreeNode:
    """The labelled coupling tree of ``x`` truncated after ``depth`` non-degenerate levels."""
    root = TreeNode()
    if depth <= 0:
        return root
    tab = coupling(x, order)
    q = x.q
    for c in range(1, q + 1):
        for cp in range(1, q + 1):
            if c == cp:
                continue
            node = TreeNode()
            root.edges.append(TreeEdge(tab.p[c - 1][cp - 1], x.v, node))
            if tab.p[c - 1][cp - 1] == 0 or depth == 1:
                continue
            for i in (1, 2, 3):
                ch = child(x, i, c, cp)
                if ch is not None:
                    node.edges.append(TreeEdge(Fraction(1), None, build_tree(ch, depth - 1, order)))
    return root


def tree_level_sums(root: TreeNode, depth: int) -> list:
    """Sum of likelihoods of the level-``k`` edges, ``k = 1..depth``."""
    sums = [Fraction(0)] * depth
    stack = [(root, Fraction(1), 0)]
    while stack:
        node, like, level = stack.pop()
        for e in node.edges:
            l2 = like * e.weight
            lv = level + (0 if e.name is None else 1)
            if e.name is not None and lv <= depth:
                sums[lv - 1] += l2
            if lv < depth or e.name is None:
                stack.append((e.child, l2, lv))
    return sums


def tree_costs(root: TreeNode) -> dict:
    """``gamma(v, T)``: total likelihood of edges named ``v``."""
    out: dict = {}
    stack = [(root, Fraction(1))]
    while stack:
        node, like = stack.pop()
        for e in node.edges:
            l2 = like * e.weight
            if e.name is not None:
                out[e.name] = out.get(e.name, Fraction(0)) + l2
            stack.append((e.child, l2))
    return out


# ----------------------------------------------------------------- cost bound

@dataclass
class CostBound:
    d_min: int
    depth: int
    partial: Fraction
    tail: Optional[Fraction]

    @property
    def total(self) -> Optional[Fraction]:
        return None if self.tail is None else self.partial + self.tail


def edge_distance(x: EdgeBoundaryPair, targets) -> Optional[int]:
    """Distance within the region from the distinguished edge to the nearest target vertex."""
    best = None
    for t in targets:
        d = distance(x.w, t, within=x.region)
        if d is not None and (best is None or d < best):
            best = d
    return best


def cost_bound(x: EdgeBoundaryPair, targets, depth: int, certificate=None,
               engine: Optional[GammaEngine] = None) -> CostBound:
    """``sum_{d >= d_min} Gamma^d(X)``: exact through ``depth`` plus a certified geometric tail."""
    d_min = edge_distance(x, targets)
    if d_min is None:
        return CostBound(0, depth, Fraction(0), Fraction(0))
    engine = engine or GammaEngine()
    prof = engine.profile(x, depth) if depth >= 1 else []
    partial = sum((prof[k - 1] for k in range(d_min, depth + 1)), Fraction(0))
    tail = None
    if certificate is not None:
        eps = certificate.epsilon
        start = max(depth + 1, d_min)
        tail = certificate.alpha_max * (1 - eps) ** start / eps
    return CostBound(d_min, depth, partial, tail)
