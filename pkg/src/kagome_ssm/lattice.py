"""Kagome lattice geometry on integer coordinates.

Vertices are the odd points ``(x, y)`` (both coordinates odd) together with
the even points ``(4k1 + r, 4k2 + r)`` for ``r in {0, 2}``.  Odd vertices on
the same row are joined when their x-coordinates differ by 2, and every even
vertex is joined to its four diagonal neighbours ``(x +- 1, y +- 1)``.

Besides adjacency, distances and shell/ball counts, the module provides the
lattice automorphisms.  The automorphism group acts simply transitively on
directed edges, so for two directed edges there is exactly one automorphism
carrying the first onto the second (:func:`transport`).  It is used to place
extended-region templates onto a distinguished edge.
"""
from __future__ import annotations

import math
from collections import deque
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Optional


class Vertex(NamedTuple):
    x: int
    y: int


Edge = tuple  # (Vertex, Vertex) with endpoints sorted lexicographically

UNREACHABLE = None

# Translations (4, 0) and (2, 2) generate the translation symmetries.
_T1 = (4, 0)
_T2 = (2, 2)
REPRESENTATIVES = (Vertex(0, 0), Vertex(1, 1), Vertex(3, 1))

CANONICAL_EDGE = (Vertex(-1, 1), Vertex(1, 1))
"""Reference directed edge ``(w, v)``: templates are stored in this frame."""


def is_vertex(x: int, y: int) -> bool:
    if x % 2 == 1 and y % 2 == 1:
        return True
    return x % 4 == y % 4 and x % 4 in (0, 2)


def is_odd(v) -> bool:
    return v[0] % 2 == 1


def _check(v) -> None:
    if not is_vertex(v[0], v[1]):
        raise ValueError(f"{tuple(v)} is not a kagome vertex")


def _angle(dx: int, dy: int) -> float:
    a = math.degrees(math.atan2(dy, dx)) % 360.0
    return 360.0 if a == 0.0 else a


@lru_cache(maxsize=None)
def _neighbours(x: int, y: int) -> tuple:
    if x % 2 == 1:
        cand = [(x + 2, y), (x - 2, y)] + [
            (x + dx, y + dy) for dx in (1, -1) for dy in (1, -1) if is_vertex(x + dx, y + dy)
        ]
    else:
        cand = [(x + dx, y + dy) for dx in (1, -1) for dy in (1, -1)]
    # clockwise = decreasing angle, starting from the smallest positive angle
    cand.sort(key=lambda p: _angle(p[0] - x, p[1] - y))
    start = cand[0]
    cand.sort(key=lambda p: -_angle(p[0] - x, p[1] - y))
    i = cand.index(start)
    ordered = cand[i:] + cand[:i]
    return tuple(Vertex(*p) for p in ordered)


def neighbours(v) -> tuple:
    """The four neighbours of ``v`` in clockwise order."""
    _check(v)
    return _neighbours(v[0], v[1])


def adjacent(u, v) -> bool:
    return tuple(v) in _neighbours(u[0], u[1])


def edge(u, v) -> Edge:
    u, v = Vertex(*u), Vertex(*v)
    return (u, v) if u <= v else (v, u)


def edge_valid(u, v) -> bool:
    """Edge membership in the lattice edge set."""
    if not (is_vertex(*u) and is_vertex(*v)):
        return False
    if is_odd(u) and is_odd(v):
        return u[1] == v[1] and abs(u[0] - v[0]) == 2
    if is_odd(u) == is_odd(v):
        return False
    return abs(u[0] - v[0]) == 1 and abs(u[1] - v[1]) == 1


def triangle_mate(w, v) -> Vertex:
    """The common neighbour of adjacent ``w`` and ``v`` (every edge lies in one triangle)."""
    common = set(_neighbours(w[0], w[1])) & set(_neighbours(v[0], v[1]))
    if len(common) != 1:
        raise ValueError(f"{w} and {v} are not adjacent")
    return common.pop()


def edge_frame(w, v) -> tuple:
    """Neighbours ``(n1, n2, n3)`` of ``v`` other than ``w``, in cyclic order after ``w``.

    The rotation direction is chosen so that ``n1`` is the triangle mate of the
    edge ``(w, v)``.  With this choice the frame commutes with every lattice
    automorphism, reflections included.
    """
    nb = _neighbours(v[0], v[1])
    i = nb.index(tuple(w))
    mate = triangle_mate(w, v)
    step = 1 if nb[(i + 1) % 4] == mate else -1
    return tuple(nb[(i + step * k) % 4] for k in (1, 2, 3))


def bfs_distances(source, max_d: Optional[int] = None, within=None) -> dict:
    """Graph distances from ``source``.

    With ``within`` given, only vertices of ``within`` may be entered after the
    source (the source itself may lie outside).  ``max_d`` truncates the search.
    """
    source = Vertex(*source)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        d = dist[x]
        if max_d is not None and d >= max_d:
            continue
        for y in _neighbours(x[0], x[1]):
            if y in dist:
                continue
            if within is not None and y not in within:
                continue
            dist[y] = d + 1
            queue.append(y)
    return dist


def distance(u, v, within=None) -> Optional[int]:
    """Shortest-path length from ``u`` to ``v``; ``None`` when unreachable.

    When ``within`` is given, every interior vertex of the path must lie in it;
    the endpoints are allowed outside (e.g. the anchor of a distinguished edge).
    """
    u, v = Vertex(*u), Vertex(*v)
    _check(u)
    _check(v)
    if u == v:
        return 0
    if within is None:
        # the lattice is connected; expand until v is found
        dist = {u: 0}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for y in _neighbours(x[0], x[1]):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    if y == v:
                        return dist[y]
                    queue.append(y)
    within = set(within)
    dist = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in _neighbours(x[0], x[1]):
            if y in dist:
                continue
            if y == v:
                return dist[x] + 1
            if y in within:
                dist[y] = dist[x] + 1
                queue.append(y)
    return UNREACHABLE


def shells(v, d_max: int) -> list:
    """``[n_0, n_1, ..., n_dmax]``: number of vertices at each exact distance."""
    counts = [0] * (d_max + 1)
    for d in bfs_distances(v, d_max).values():
        counts[d] += 1
    return counts


def shell_count(v, d: int) -> int:
    if d < 1:
        raise ValueError("d must be positive")
    _check(v)
    return shells(v, d)[d]


def ball(v, d: int) -> frozenset:
    if d < 0:
        raise ValueError("d must be non-negative")
    _check(v)
    return frozenset(bfs_distances(v, d))


def boundary_ratio(v, d: int) -> Fraction:
    """``|boundary of Ball_d(v)| / |Ball_d(v)|`` as an exact rational."""
    counts = shells(v, d + 1)
    return Fraction(counts[d + 1], sum(counts[: d + 1]))


def least_ratio_radius(v, a: Fraction, d_limit: int = 10_000) -> int:
    """Least ``d`` with ``boundary_ratio(v, d) <= a``."""
    dist = {}
    counts = []
    d = 0
    frontier = [Vertex(*v)]
    seen = {Vertex(*v)}
    inside = 0
    while d <= d_limit:
        counts.append(len(frontier))
        inside += len(frontier)
        nxt = []
        for x in frontier:
            for y in _neighbours(x[0], x[1]):
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if Fraction(len(nxt), inside) <= a:
            return d
        frontier = nxt
        d += 1
    raise RuntimeError("ratio bound not reached within d_limit")


# ---------------------------------------------------------------- automorphisms

def _reduce(v) -> tuple:
    """Split ``v`` as representative + n1*(4,0) + n2*(2,2)."""
    x, y = v
    if x % 2 == 1:
        n2 = (y - 1) // 2
        xr = x - 2 * n2
        rx = xr % 4
        return Vertex(rx, 1), (xr - rx) // 4, n2
    n2 = y // 2
    xr = x - 2 * n2
    return Vertex(0, 0), xr // 4, n2


def _propagate(src, dst, points) -> dict:
    """Image of ``points`` under the automorphism taking directed edge src onto dst."""
    (w, v), (w2, v2) = src, dst
    w, v, w2, v2 = Vertex(*w), Vertex(*v), Vertex(*w2), Vertex(*v2)
    nb, nb2 = _neighbours(*v), _neighbours(*v2)
    i, j = nb.index(w), nb2.index(w2)
    m, m2 = triangle_mate(w, v), triangle_mate(w2, v2)
    d1 = 1 if nb[(i + 1) % 4] == m else -1
    d2 = 1 if nb2[(j + 1) % 4] == m2 else -1
    s = d1 * d2
    img = {v: v2, w: w2}
    ref = {v: w}
    queue = deque([v])
    todo = {Vertex(*p) for p in points} - set(img)
    while queue and todo:
        x = queue.popleft()
        y = ref[x]
        nx, ny = _neighbours(*x), _neighbours(*img[x])
        a, b = nx.index(y), ny.index(img[y])
        for k in range(1, 4):
            z = nx[(a + k) % 4]
            zi = ny[(b + s * k) % 4]
            if z in img:
                if img[z] != zi:
                    raise AssertionError("inconsistent automorphism propagation")
                continue
            img[z] = zi
            ref[z] = x
            todo.discard(z)
            queue.append(z)
    return img


class Automorphism:
    """Lattice automorphism, affine on each translation coset."""

    __slots__ = ("rep_images", "cols")

    def __init__(self, rep_images: dict, cols: tuple):
        self.rep_images = rep_images
        self.cols = cols  # images of the translation basis vectors (4,0), (2,2)

    @classmethod
    def from_edges(cls, src, dst) -> "Automorphism":
        pts = set()
        for r in REPRESENTATIVES:
            pts.update({r, Vertex(r.x + 4, r.y), Vertex(r.x + 2, r.y + 2)})
        # bring src near the origin by translation first
        (w, v) = src
        rv, n1, n2 = _reduce(v)
        t = (4 * n1 + 2 * n2, 2 * n2)
        src0 = (Vertex(w[0] - t[0], w[1] - t[1]), rv)
        img = _propagate(src0, dst, pts)
        cols = None
        rep_images = {}
        for r in REPRESENTATIVES:
            a = img[r]
            c1 = (img[Vertex(r.x + 4, r.y)][0] - a[0], img[Vertex(r.x + 4, r.y)][1] - a[1])
            c2 = (img[Vertex(r.x + 2, r.y + 2)][0] - a[0], img[Vertex(r.x + 2, r.y + 2)][1] - a[1])
            if cols is None:
                cols = (c1, c2)
            elif cols != (c1, c2):
                raise AssertionError("automorphism is not coset-affine")
            rep_images[r] = a
        base = cls(rep_images, cols)
        # precompose with the translation taking src onto src0: g(x) = base(x - t)
        return cls._compose_translation(base, (-t[0], -t[1]))

    @classmethod
    def _compose_translation(cls, base: "Automorphism", t) -> "Automorphism":
        # x -> base(x + t)
        if t == (0, 0):
            return base
        rep_images = {r: base(Vertex(r.x + t[0], r.y + t[1])) for r in REPRESENTATIVES}
        return cls(rep_images, base.cols)

    def __call__(self, v) -> Vertex:
        r, n1, n2 = _reduce(v)
        a = self.rep_images[r]
        (c1x, c1y), (c2x, c2y) = self.cols
        return Vertex(a[0] + n1 * c1x + n2 * c2x, a[1] + n1 * c1y + n2 * c2y)

    def apply(self, points: Iterable) -> list:
        return [self(p) for p in points]


@lru_cache(maxsize=None)
def _class_maps(w, v) -> tuple:
    return Automorphism.from_edges(CANONICAL_EDGE, (w, v)), Automorphism.from_edges((w, v), CANONICAL_EDGE)


def _split_edge(w, v):
    rv, n1, n2 = _reduce(v)
    t = (4 * n1 + 2 * n2, 2 * n2)
    return Vertex(w[0] - t[0], w[1] - t[1]), rv, t


def to_canonical(w, v):
    """Automorphism carrying the directed edge ``(w, v)`` onto :data:`CANONICAL_EDGE`."""
    w0, v0, t = _split_edge(w, v)
    h = _class_maps(w0, v0)[1]

    def f(p):
        return h(Vertex(p[0] - t[0], p[1] - t[1]))

    return f


def from_canonical(w, v):
    """Automorphism carrying :data:`CANONICAL_EDGE` onto the directed edge ``(w, v)``."""
    w0, v0, t = _split_edge(w, v)
    g = _class_maps(w0, v0)[0]

    def f(p):
        q = g(p)
        return Vertex(q[0] + t[0], q[1] + t[1])

    return f


def transport(points: Iterable, src, dst) -> list:
    """Images of ``points`` under the automorphism taking directed edge ``src`` to ``dst``."""
    f = to_canonical(*src)
    g = from_canonical(*dst)
    return [g(f(p)) for p in points]
