"""Proper colourings of regions under boundary edge colourings, and exact counts.

Colours are ``1..q``; colour ``0`` on a boundary edge imposes nothing.  A
boundary edge colouring only acts through the set of colours it forbids at
each region vertex, so the counters take per-vertex forbidden bitmasks
(bit ``c`` set means colour ``c`` is forbidden).

The production counter sweeps the vertices in breadth-first order from the
pinned vertex and memoises on the colours of the frontier (placed vertices
that still have unplaced neighbours).  Two independent oracles are provided
for testing: a plain ``itertools.product`` enumerator and a numpy enumerator
that builds the full list of proper colourings vertex by vertex.
"""
from __future__ import annotations

import itertools
from collections import deque
from typing import Mapping, Optional, Sequence

import numpy as np

from .lattice import Vertex, edge, neighbours

Q_DEFAULT = 5


def forbidden_masks(region, boundary: Mapping, q: int = Q_DEFAULT) -> dict:
    """Per-vertex forbidden colour bitmask induced by a boundary edge colouring."""
    masks = {v: 0 for v in region}
    for e, c in boundary.items():
        if not c:
            continue
        if not 0 <= c <= q:
            raise ValueError(f"colour {c} out of range")
        a, b = e
        a_in, b_in = a in region, b in region
        if a_in == b_in:
            raise ValueError(f"{e} is not a boundary edge of the region")
        masks[a if a_in else b] |= 1 << c
    return masks


def vertex_boundary_masks(region, colouring: Mapping, q: int = Q_DEFAULT) -> dict:
    """Forbidden masks from a q0-colouring of the vertex boundary."""
    masks = {v: 0 for v in region}
    for v in region:
        for u in neighbours(v):
            c = colouring.get(u, 0) if u not in region else 0
            if c:
                masks[v] |= 1 << c
    return masks


def is_proper(sigma: Mapping, region) -> bool:
    if set(sigma) != set(region):
        raise ValueError("colouring domain does not match the region")
    for v in region:
        c = sigma[v]
        if c == 0:
            return False
        for u in neighbours(v):
            if u in region and sigma[u] == c:
                return False
    return True


def agrees(sigma: Mapping, boundary: Mapping) -> bool:
    """``sigma(u) != B(e)`` for every boundary edge ``e`` with region endpoint ``u``."""
    for (a, b), c in boundary.items():
        if not c:
            continue
        u = a if a in sigma else b
        if u not in sigma:
            raise ValueError(f"boundary edge {(a, b)} does not touch the colouring domain")
        if sigma[u] == c:
            return False
    return True


def bfs_order(region, start=None) -> list:
    """Breadth-first order from ``start`` (lexicographic tie-break); covers every component."""
    left = set(region)
    order = []
    pending = [Vertex(*start)] if start is not None else []
    while left:
        s = pending.pop() if pending else min(left)
        if s not in left:
            continue
        left.discard(s)
        queue = deque([s])
        while queue:
            x = queue.popleft()
            order.append(x)
            for y in sorted(neighbours(x)):
                if y in left:
                    left.discard(y)
                    queue.append(y)
    return order


class CountPlan:
    """Compiled frontier sweep for one region and a tuple of tracked vertices.

    ``count(masks)`` returns a dict from the tuple of tracked-vertex colours to
    the number of proper colourings avoiding the forbidden masks.  A plan is
    reusable across many boundary colourings of the same region.
    """

    def __init__(self, region, tracked: Sequence = (), q: int = Q_DEFAULT):
        self.region = frozenset(region)
        self.tracked = tuple(Vertex(*t) for t in tracked)
        for t in self.tracked:
            if t not in self.region:
                raise ValueError(f"tracked vertex {t} not in region")
        self.q = q
        self.order = bfs_order(self.region, self.tracked[0] if self.tracked else None)
        pos = {v: i for i, v in enumerate(self.order)}
        last_use = {}
        for v in self.order:
            last_use[v] = max([pos[v]] + [pos[u] for u in neighbours(v) if u in self.region])
        keep_forever = set(self.tracked)
        slots: list = []
        self.steps = []
        for k, x in enumerate(self.order):
            nb_idx = tuple(slots.index(u) for u in neighbours(x) if u in pos and pos[u] < k)
            new_slots = slots + [x]
            keep = tuple(i for i, u in enumerate(new_slots) if u in keep_forever or last_use[u] > k)
            self.steps.append((x, nb_idx, keep, len(keep) == len(new_slots)))
            slots = [new_slots[i] for i in keep]
        self.final_slots = tuple(slots)
        self.perm = tuple(self.final_slots.index(t) for t in self.tracked)
        self.width = max((len(s[2]) for s in self.steps), default=0)
        full = 0
        for c in range(1, q + 1):
            full |= 1 << c
        self._full = full
        self._colour_lists = [tuple(c for c in range(1, q + 1) if m >> c & 1) for m in range(1 << (q + 1))]

    def count(self, masks: Mapping) -> dict:
        full = self._full
        lists = self._colour_lists
        states = {(): 1}
        for x, nb_idx, keep, keep_all in self.steps:
            base = full & ~masks.get(x, 0)
            nxt: dict = {}
            get = nxt.get
            for st, n in states.items():
                allowed = base
                for i in nb_idx:
                    allowed &= ~(1 << st[i])
                if not allowed:
                    continue
                for c in lists[allowed]:
                    ext = st + (c,)
                    key = ext if keep_all else tuple(ext[i] for i in keep)
                    nxt[key] = get(key, 0) + n
            states = nxt
            if not states:
                return {}
        if self.perm == tuple(range(len(self.perm))):
            return states
        return {tuple(st[i] for i in self.perm): n for st, n in states.items()}

    def total(self, masks: Mapping) -> int:
        return sum(self.count(masks).values())


_plan_cache: dict = {}


def plan_for(region, tracked: Sequence = (), q: int = Q_DEFAULT) -> CountPlan:
    key = (frozenset(region), tuple(tracked), q)
    plan = _plan_cache.get(key)
    if plan is None:
        if len(_plan_cache) > 20000:
            _plan_cache.clear()
        plan = _plan_cache[key] = CountPlan(region, tracked, q)
    return plan


def counts_from_masks(region, masks: Mapping, v, q: int = Q_DEFAULT) -> tuple:
    res = plan_for(region, (Vertex(*v),), q).count(masks)
    return tuple(res.get((c,), 0) for c in range(1, q + 1))


def count_at_vertex(region, boundary: Mapping, v, q: int = Q_DEFAULT) -> tuple:
    """``n_i`` for ``i = 1..q`` (index ``i - 1``): agreeing proper colourings with ``sigma(v) = i``."""
    v = Vertex(*v)
    if v not in region:
        raise ValueError("pinned vertex outside the region")
    return counts_from_masks(region, forbidden_masks(region, boundary, q), v, q)


def count_at_pair(region, boundary: Mapping, u, v, q: int = Q_DEFAULT) -> list:
    """``q x q`` matrix ``n[i-1][j-1]`` of colourings with ``sigma(u) = i``, ``sigma(v) = j``."""
    u, v = Vertex(*u), Vertex(*v)
    masks = forbidden_masks(region, boundary, q)
    mat = [[0] * q for _ in range(q)]
    if u == v:
        for i, n in enumerate(counts_from_masks(region, masks, u, q)):
            mat[i][i] = n
        return mat
    res = plan_for(region, (u, v), q).count(masks)
    for (a, b), n in res.items():
        mat[a - 1][b - 1] = n
    return mat


def count_total(region, boundary: Mapping, q: int = Q_DEFAULT) -> int:
    return plan_for(region, (), q).total(forbidden_masks(region, boundary, q))


def enumerate_colourings(region, masks: Optional[Mapping] = None, q: int = Q_DEFAULT,
                         limit: Optional[int] = None) -> list:
    """All proper colourings avoiding ``masks`` as dicts (backtracking, BFS order)."""
    order = bfs_order(region)
    masks = masks or {}
    earlier = [[j for j, u in enumerate(order[:k]) if u in neighbours(order[k])] for k in range(len(order))]
    out = []
    cur = [0] * len(order)

    def rec(k):
        if k == len(order):
            out.append(dict(zip(order, cur)))
            if limit is not None and len(out) > limit:
                raise OverflowError("colouring enumeration exceeded its limit")
            return
        used = masks.get(order[k], 0)
        for j in earlier[k]:
            used |= 1 << cur[j]
        for c in range(1, q + 1):
            if not used >> c & 1:
                cur[k] = c
                rec(k + 1)

    rec(0)
    return out


# ------------------------------------------------------------------- oracles

def naive_count_at_vertex(region, boundary: Mapping, v, q: int = Q_DEFAULT) -> tuple:
    """Reference counter: test every one of the ``q**|R|`` assignments."""
    verts = sorted(region)
    n = [0] * q
    for cols in itertools.product(range(1, q + 1), repeat=len(verts)):
        sigma = dict(zip(verts, cols))
        if is_proper(sigma, region) and agrees(sigma, boundary):
            n[sigma[Vertex(*v)] - 1] += 1
    return tuple(n)


def numpy_colourings(region, boundary: Mapping, q: int = Q_DEFAULT) -> tuple:
    """All agreeing proper colourings as an ``(N, |R|)`` array, columns in sorted vertex order.

    Built by explicit extension in breadth-first order: append every colour
    for the next vertex and drop the rows that clash with an earlier
    neighbour or a boundary edge.
    """
    verts = sorted(region)
    order = bfs_order(region)
    col = {v: i for i, v in enumerate(order)}
    forb = {v: 0 for v in verts}
    for (a, b), c in boundary.items():
        if c:
            forb[a if a in region else b] |= 1 << c
    rows = np.zeros((1, 0), dtype=np.int8)
    colours = np.arange(1, q + 1, dtype=np.int8)
    for k, v in enumerate(order):
        n = rows.shape[0]
        rows = np.concatenate([np.repeat(rows, q, axis=0), np.tile(colours, n)[:, None]], axis=1)
        ok = ((forb[v] >> rows[:, k].astype(np.int64)) & 1) == 0
        for u in neighbours(v):
            if u in col and col[u] < k:
                ok &= rows[:, col[u]] != rows[:, k]
        rows = rows[ok]
    return verts, np.ascontiguousarray(rows[:, [col[v] for v in verts]])


def numpy_count_at_vertex(region, boundary: Mapping, v, q: int = Q_DEFAULT) -> tuple:
    verts, rows = numpy_colourings(region, boundary, q)
    colv = rows[:, verts.index(Vertex(*v))]
    return tuple(int(np.count_nonzero(colv == c)) for c in range(1, q + 1))


def boundary_with(boundary: Mapping, updates: Mapping) -> dict:
    out = dict(boundary)
    for e, c in updates.items():
        out[edge(*e)] = c
    return out
