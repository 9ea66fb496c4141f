"""Edge-boundary pairs, vertex-boundary pairs and the recursive child construction.

An edge-boundary pair is a region ``R``, a distinguished boundary edge
``(w, v)`` with ``w`` outside and ``v`` inside, and two boundary colourings
that agree everywhere except on the distinguished edge, where they carry the
pivot colours ``c`` and ``c'``.  Off-edge colours are stored once; colour 0
means "unconstrained".

Around the head ``v`` the three other edges are indexed ``e1, e2, e3``
starting next to the distinguished edge and turning towards the triangle
containing it, so the first child always sits on the triangle mate.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Optional

from . import lattice
from .coloring import Q_DEFAULT, counts_from_masks
from .lattice import Vertex, edge, edge_frame, neighbours, triangle_mate
from .region import edge_boundary, make_region, vertex_boundary


class PairError(ValueError):
    pass


@dataclass(frozen=True)
class EdgeBoundaryPair:
    region: frozenset
    w: Vertex
    v: Vertex
    c: int
    cp: int
    colours: tuple = ()  # sorted ((edge, colour), ...) for non-zero off-pivot boundary edges
    q: int = Q_DEFAULT

    @classmethod
    def make(cls, region, e, c: int, cp: int, colours: Optional[Mapping] = None, q: int = Q_DEFAULT):
        region = make_region(region)
        a, b = Vertex(*e[0]), Vertex(*e[1])
        if a in region and b not in region:
            a, b = b, a
        ex = edge(a, b)
        items = []
        for k, col in (colours or {}).items():
            k = edge(*k)
            if k == ex or not col:
                continue
            items.append((k, int(col)))
        items.sort()
        return cls(region, a, b, int(c), int(cp), tuple(items), q)

    # --------------------------------------------------------------- views
    @property
    def e_x(self) -> tuple:
        return edge(self.w, self.v)

    @cached_property
    def off(self) -> dict:
        """Colours of the boundary edges other than the distinguished one (0 omitted)."""
        return dict(self.colours)

    def colour(self, e, primed: bool = False) -> int:
        e = edge(*e)
        if e == self.e_x:
            return self.cp if primed else self.c
        return self.off.get(e, 0)

    @property
    def B(self) -> dict:
        out = {e: 0 for e in edge_boundary(self.region)}
        out.update(self.off)
        out[self.e_x] = self.c
        return out

    @property
    def B_prime(self) -> dict:
        out = self.B
        out[self.e_x] = self.cp
        return out

    @cached_property
    def masks(self) -> dict:
        """Forbidden-colour masks with the distinguished edge uncoloured."""
        m = {x: 0 for x in self.region}
        for (a, b), col in self.colours:
            m[a if a in self.region else b] |= 1 << col
        return m

    @cached_property
    def counts(self) -> tuple:
        """``n_i`` at the head with the distinguished edge uncoloured (index ``i - 1``)."""
        return counts_from_masks(self.region, self.masks, self.v, self.q)

    @property
    def mate(self) -> Vertex:
        return triangle_mate(self.w, self.v)

    @property
    def frame(self) -> tuple:
        return edge_frame(self.w, self.v)

    def to_json(self) -> dict:
        return {
            "region": sorted(list(p) for p in self.region),
            "e_x": [list(self.w), list(self.v)],
            "c": self.c,
            "c_prime": self.cp,
            "colours": [[list(a), list(b), col] for (a, b), col in self.colours],
            "q": self.q,
        }

    @classmethod
    def from_json(cls, d: dict) -> "EdgeBoundaryPair":
        cols = {(Vertex(*a), Vertex(*b)): col for a, b, col in d.get("colours", [])}
        return cls.make([tuple(p) for p in d["region"]], d["e_x"], d["c"], d["c_prime"], cols, d.get("q", Q_DEFAULT))


def load_pair(path) -> EdgeBoundaryPair:
    with open(path) as fh:
        return EdgeBoundaryPair.from_json(json.load(fh))


# ------------------------------------------------------------------ validity

def adjacent_boundary_edge_pairs(region):
    """Pairs of boundary edges that are cyclically consecutive around a shared outside vertex."""
    for u in sorted(vertex_boundary(region)):
        nb = neighbours(u)
        for k in range(4):
            a, b = nb[k], nb[(k + 1) % 4]
            if a in region and b in region:
                yield u, edge(u, a), edge(u, b)


def validate(x: EdgeBoundaryPair) -> Optional[str]:
    """``None`` when ``x`` is a valid edge-boundary pair, else a description of the first violation."""
    if x.v not in x.region:
        return f"head {x.v} is not in the region"
    if x.w in x.region:
        return f"tail {x.w} lies inside the region"
    if not lattice.adjacent(x.w, x.v):
        return "distinguished edge endpoints are not adjacent"
    if not (1 <= x.c <= x.q and 1 <= x.cp <= x.q):
        return f"pivot colours ({x.c}, {x.cp}) are not both in Q"
    if x.c == x.cp:
        return "pivot colours must differ"
    bd = edge_boundary(x.region)
    for e, col in x.colours:
        if e not in bd:
            return f"coloured edge {e} is not a boundary edge"
        if not 0 <= col <= x.q:
            return f"colour {col} out of range on {e}"
    for u, e1, e2 in adjacent_boundary_edge_pairs(x.region):
        if x.colour(e1) != x.colour(e2) and x.colour(e1, True) != x.colour(e2, True):
            return f"adjacent boundary edges {e1} and {e2} at {u} differ in both colourings"
    return None


def is_valid(x: EdgeBoundaryPair) -> bool:
    return validate(x) is None


# ------------------------------------------------------------ classification

def classify(x: EdgeBoundaryPair) -> frozenset:
    """Membership among ``M1..M4`` (returned as the integers 1..4)."""
    from .mu_engine import mu

    mate = x.mate
    if mate in x.region:
        a = mu(x, x.c, x.cp).value
        b = mu(x, x.cp, x.c).value
        be = x.colour((x.w, mate))
        if (a >= b and be == x.c) or (b >= a and be == x.cp):
            return frozenset({1})
        return frozenset({2})
    if x.colour((mate, x.v)) in (x.c, x.cp):
        return frozenset({3, 4})
    return frozenset({4})


# ------------------------------------------------------------------ children

def child(x: EdgeBoundaryPair, i: int, c: int, cp: int) -> Optional[EdgeBoundaryPair]:
    """The pair ``X_i(c, c')``, or ``None`` when the ``i``-th neighbour lies outside."""
    if not 1 <= i <= 3:
        raise ValueError("child index must be 1, 2 or 3")
    frame = x.frame
    ni = frame[i - 1]
    if ni not in x.region:
        return None
    region = x.region - {x.v}
    cols = {e: col for e, col in x.colours if x.v not in e}
    for j, n in enumerate(frame, start=1):
        if n in region and j != i:
            cols[edge(x.v, n)] = cp if j < i else c
    return EdgeBoundaryPair.make(region, (x.v, ni), cp, c, cols, x.q)


def children(x: EdgeBoundaryPair, c: int, cp: int) -> list:
    return [child(x, i, c, cp) for i in (1, 2, 3)]


# ----------------------------------------------------- vertex-boundary pairs

@dataclass(frozen=True)
class VertexBoundaryPair:
    region: frozenset
    w: Vertex
    colouring: tuple  # sorted ((vertex, colour), ...) on the vertex boundary
    colouring_prime: tuple
    q: int = Q_DEFAULT

    @classmethod
    def make(cls, region, w, colouring: Mapping, colouring_prime: Mapping, q: int = Q_DEFAULT):
        region = make_region(region)
        w = Vertex(*w)
        bd = vertex_boundary(region)
        a = {Vertex(*k): int(c) for k, c in colouring.items()}
        b = {Vertex(*k): int(c) for k, c in colouring_prime.items()}
        for k in set(a) | set(b):
            if k not in bd:
                raise PairError(f"{k} is not on the vertex boundary")
        full_a = {u: a.get(u, 0) for u in bd}
        full_b = {u: b.get(u, 0) for u in bd}
        if w not in bd:
            raise PairError("w must lie on the vertex boundary")
        diff = [u for u in bd if full_a[u] != full_b[u]]
        if diff != [w]:
            raise PairError("the two boundary colourings must differ exactly at w")
        if not full_a[w] or not full_b[w]:
            raise PairError("both colourings must be non-zero at w")
        return cls(region, w, tuple(sorted(full_a.items())), tuple(sorted(full_b.items())), q)

    @property
    def bmap(self) -> dict:
        return dict(self.colouring)

    @property
    def bmap_prime(self) -> dict:
        return dict(self.colouring_prime)


def _ladder(region, edges: list, pivots: list, base: dict, q: int) -> list:
    """Pairs switching ``edges[k]`` from ``pivots[k][0]`` to ``pivots[k][1]`` one at a time."""
    out = []
    for k, (e, (a, b)) in enumerate(zip(edges, pivots)):
        if a == b:
            continue
        cols = dict(base)
        for j, (f, (fa, fb)) in enumerate(zip(edges, pivots)):
            if j < k:
                cols[f] = fb
            elif j > k:
                cols[f] = fa
        w, v = e
        out.append(EdgeBoundaryPair.make(region, (w, v), a, b, cols, q))
    return out


def _clockwise_in_edges(center, region, after) -> list:
    """Edges from ``center`` to region vertices, clockwise starting just after neighbour ``after``."""
    nb = neighbours(center)
    k = nb.index(after)
    return [(center, nb[(k + j) % 4]) for j in (1, 2, 3) if nb[(k + j) % 4] in region]


def decompose_vertex_pair(y: VertexBoundaryPair, u=None, c: int = 1, cp: int = 2) -> list:
    """Edge-boundary pairs interpolating the vertex discrepancy at ``w`` one edge at a time.

    When ``w`` has a neighbour outside the region the pairs live on the same
    region (at most three).  Otherwise a neighbour ``u`` of ``w`` is removed
    from the region, ``u`` is treated as a boundary vertex coloured ``c`` on
    one side and ``cp`` on the other, and the edges around ``w`` and then
    around ``u`` are switched (at most six pairs).
    """
    region, w = y.region, y.w
    bmap, bmap2 = y.bmap, y.bmap_prime
    outside = [n for n in neighbours(w) if n not in region]
    if outside:
        edges = _clockwise_in_edges(w, region, outside[0])
        base = {}
        for e in edge_boundary(region):
            a, b = e
            ext = a if a not in region else b
            if ext != w:
                base[e] = bmap[ext]
        pivots = [(bmap[w], bmap2[w])] * len(edges)
        return _ladder(region, edges, pivots, base, y.q)
    u = Vertex(*u) if u is not None else neighbours(w)[0]
    if u not in region or not lattice.adjacent(u, w):
        raise PairError("u must be an in-region neighbour of w")
    sub = region - {u}
    w_edges = _clockwise_in_edges(w, sub, u)
    u_edges = _clockwise_in_edges(u, sub, w)
    base = {}
    for e in edge_boundary(sub):
        a, b = e
        ext = a if a not in sub else b
        if ext not in (w, u):
            base[e] = bmap[ext]
    edges = w_edges + u_edges
    pivots = [(bmap[w], bmap2[w])] * len(w_edges) + [(c, cp)] * len(u_edges)
    return _ladder(sub, edges, pivots, base, y.q)
