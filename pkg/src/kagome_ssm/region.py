"""Regions, boundaries, extended regions and template catalogues.

An extended region is a template: a set of vertices labelled ``in`` or
``out`` together with a designated directed edge ``(w, v)`` whose tail ``w``
is an implicit ``out`` anchor and whose head ``v`` is labelled ``in``.
Templates are kept in the canonical frame (designated edge equal to
:data:`lattice.CANONICAL_EDGE`); a region ``R`` matches a template at a
boundary edge ``(w, v)`` when the unique lattice automorphism taking the
canonical edge onto ``(w, v)`` sends every ``in`` vertex into ``R`` and every
``out`` vertex outside ``R``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import lattice
from .lattice import CANONICAL_EDGE, Vertex, edge, from_canonical, neighbours, to_canonical

W0, V0 = CANONICAL_EDGE


class CatalogueError(ValueError):
    """Raised when a catalogue fails to parse or validate."""

    def __init__(self, message: str, witness: Optional[dict] = None):
        super().__init__(message)
        self.witness = witness


def make_region(vertices: Iterable) -> frozenset:
    region = frozenset(Vertex(*v) for v in vertices)
    if not region:
        raise ValueError("a region must be non-empty")
    for v in region:
        if not lattice.is_vertex(*v):
            raise ValueError(f"{tuple(v)} is not a kagome vertex")
    return region


def vertex_boundary(region) -> frozenset:
    return frozenset(u for v in region for u in neighbours(v) if u not in region)


def edge_set(region) -> frozenset:
    """Edges with at least one endpoint in the region."""
    return frozenset(edge(v, u) for v in region for u in neighbours(v))


def edge_boundary(region) -> frozenset:
    return frozenset(edge(v, u) for v in region for u in neighbours(v) if u not in region)


def inner_edges(region) -> frozenset:
    return frozenset(edge(v, u) for v in region for u in neighbours(v) if u in region)


def components(region) -> list:
    """Connected components, each as a frozenset, ordered by their least vertex."""
    left = set(region)
    out = []
    while left:
        start = min(left)
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in neighbours(x):
                if y in left and y not in comp:
                    comp.add(y)
                    stack.append(y)
        left -= comp
        out.append(frozenset(comp))
    out.sort(key=min)
    return out


def component_of(region, v) -> frozenset:
    v = Vertex(*v)
    comp = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for y in neighbours(x):
            if y in region and y not in comp:
                comp.add(y)
                stack.append(y)
    return frozenset(comp)


def is_connected(region) -> bool:
    return len(component_of(region, next(iter(region)))) == len(region)


def orient(region, e) -> tuple:
    """Return boundary edge ``e`` as ``(w, v)`` with ``w`` outside and ``v`` inside."""
    a, b = Vertex(*e[0]), Vertex(*e[1])
    if a in region and b not in region:
        return b, a
    if b in region and a not in region:
        return a, b
    raise ValueError(f"{e} is not a boundary edge of the region")


@dataclass(frozen=True)
class ExtendedRegion:
    """In/out labelled template with a designated directed edge ``(w, v)``."""

    inside: frozenset
    outside: frozenset = frozenset()
    designated: tuple = CANONICAL_EDGE

    def __post_init__(self):
        w, v = self.designated
        object.__setattr__(self, "designated", (Vertex(*w), Vertex(*v)))
        object.__setattr__(self, "inside", frozenset(Vertex(*p) for p in self.inside))
        object.__setattr__(self, "outside", frozenset(Vertex(*p) for p in self.outside))
        if not lattice.adjacent(w, v):
            raise ValueError("designated edge endpoints are not adjacent")
        if self.designated[1] not in self.inside:
            raise ValueError("the designated edge head must be labelled in")
        if self.designated[0] in self.inside:
            raise ValueError("the designated edge tail must not be labelled in")
        if self.inside & self.outside:
            raise ValueError("a vertex is labelled both in and out")

    def canonical(self) -> "ExtendedRegion":
        if self.designated == CANONICAL_EDGE:
            return self
        f = to_canonical(*self.designated)
        return ExtendedRegion(
            frozenset(map(f, self.inside)),
            frozenset(f(p) for p in self.outside if f(p) != W0),
            CANONICAL_EDGE,
        )

    def placed(self, w, v) -> "ExtendedRegion":
        """The template moved onto directed edge ``(w, v)``."""
        c = self.canonical()
        g = from_canonical(w, v)
        return ExtendedRegion(frozenset(map(g, c.inside)), frozenset(map(g, c.outside)), (Vertex(*w), Vertex(*v)))

    def labelled(self) -> frozenset:
        return self.inside | self.outside

    def to_json(self) -> dict:
        return {
            "designated_edge": [list(self.designated[0]), list(self.designated[1])],
            "in": sorted(list(p) for p in self.inside),
            "out": sorted(list(p) for p in self.outside),
        }

    @classmethod
    def from_json(cls, d: dict) -> "ExtendedRegion":
        try:
            w, v = d["designated_edge"]
            return cls(
                frozenset(Vertex(*p) for p in d["in"]),
                frozenset(Vertex(*p) for p in d.get("out", [])),
                (Vertex(*w), Vertex(*v)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CatalogueError(f"malformed catalogue entry: {exc}") from exc


def single_vertex_template() -> ExtendedRegion:
    return ExtendedRegion(frozenset({V0}))


def mate_template(v_in: bool) -> ExtendedRegion:
    """Minimal template fixing whether the triangle mate of the designated edge is in."""
    mate = lattice.triangle_mate(W0, V0)
    if v_in:
        return ExtendedRegion(frozenset({V0, mate}))
    return ExtendedRegion(frozenset({V0}), frozenset({mate}))


def matches(region, e, template: ExtendedRegion) -> bool:
    """Whether ``region`` matches ``template`` with respect to boundary edge ``e``."""
    w, v = orient(region, e)
    t = template.canonical()
    g = from_canonical(w, v)
    return all(g(p) in region for p in t.inside) and all(g(p) not in region for p in t.outside)


def is_extended_subregion(sub: ExtendedRegion, sup: ExtendedRegion) -> bool:
    a, b = sub.canonical(), sup.canonical()
    return V0 in a.inside and a.inside <= b.inside and a.outside <= b.outside


# ------------------------------------------------------------------ catalogues

@dataclass
class Catalogue:
    family: str
    entries: list
    _support: tuple = field(default=None, repr=False, compare=False)
    _masks: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.family not in ("A", "F"):
            raise CatalogueError(f"unknown family {self.family!r}")
        self.entries = [e.canonical() for e in self.entries]
        support = set()
        for e in self.entries:
            support |= e.labelled()
        self._support = tuple(sorted(support))
        index = {p: i for i, p in enumerate(self._support)}
        self._masks = [
            (sum(1 << index[p] for p in e.inside), sum(1 << index[p] for p in e.outside)) for e in self.entries
        ]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def support(self) -> tuple:
        return self._support

    @property
    def masks(self) -> list:
        return self._masks

    def to_json(self) -> dict:
        return {"family": self.family, "entries": [e.to_json() for e in self.entries]}

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def in_mask(self, region, w, v) -> int:
        """Bitmask of support vertices that land inside ``region`` at edge ``(w, v)``."""
        g = from_canonical(w, v)
        m = 0
        for i, p in enumerate(self._support):
            if g(p) in region:
                m |= 1 << i
        return m

    def mask_from_labels(self, inside) -> int:
        return sum(1 << i for i, p in enumerate(self._support) if p in inside)

    def matching(self, region, e) -> list:
        """Indices of all entries matched by ``region`` at boundary edge ``e``."""
        w, v = orient(region, e)
        tin = self.in_mask(region, w, v)
        return [i for i, (a, b) in enumerate(self._masks) if a & ~tin == 0 and b & tin == 0]

    def matching_mask(self, tin: int, tout: Optional[int] = None) -> list:
        """Entries compatible with a (partial) labelling given as in/out masks."""
        if tout is None:
            return [i for i, (a, b) in enumerate(self._masks) if a & ~tin == 0 and b & tin == 0]
        return [i for i, (a, b) in enumerate(self._masks) if a & ~tin == 0 and b & ~tout == 0]

    def validate(self) -> None:
        if self.family == "F":
            if single_vertex_template() not in self.entries:
                raise CatalogueError("F catalogue lacks the single-vertex entry")
            return
        check_exclusive_exhaustive(self)


def check_exclusive_exhaustive(cat: Catalogue) -> None:
    """Every in/out labelling of the support matches exactly one entry.

    Branches on support vertices only where the answer is still open, so the
    cost is governed by the catalogue structure rather than ``2**|support|``.
    """
    n = len(cat.support)
    masks = cat.masks
    v0_bit = 1 << cat.support.index(V0) if V0 in cat.support else 0

    def witness(tin, decided):
        return {
            "in": sorted(list(cat.support[i]) for i in range(n) if tin >> i & 1),
            "out": sorted(list(cat.support[i]) for i in range(n) if decided >> i & 1 and not tin >> i & 1),
        }

    def rec(tin: int, decided: int):
        tout = decided & ~tin
        live = [i for i, (a, b) in enumerate(masks) if a & tout == 0 and b & tin == 0]
        if not live:
            raise CatalogueError("catalogue is not exhaustive", witness(tin, decided))
        sure = [i for i in live if (masks[i][0] | masks[i][1]) & ~decided == 0]
        if len(sure) >= 2:
            raise CatalogueError(
                f"entries {sure[0]} and {sure[1]} overlap", dict(witness(tin, decided), entries=sure[:2])
            )
        if len(live) == 1 and sure:
            return
        # branch on an undecided vertex of some live entry
        pend = 0
        for i in live:
            pend |= (masks[i][0] | masks[i][1]) & ~decided
        if pend == 0:
            return
        bit = pend & -pend
        rec(tin | bit, decided | bit)
        rec(tin, decided | bit)

    rec(v0_bit, v0_bit)


def load_catalogue(path, validate: bool = True) -> Catalogue:
    try:
        with open(path) as fh:
            doc = json.load(fh)
        cat = Catalogue(doc["family"], [ExtendedRegion.from_json(e) for e in doc["entries"]])
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise CatalogueError(f"cannot read catalogue {path}: {exc}") from exc
    if validate:
        cat.validate()
    return cat


def save_catalogue(cat: Catalogue, path) -> None:
    with open(path, "w") as fh:
        json.dump(cat.to_json(), fh, indent=1, sort_keys=True)
        fh.write("\n")


# ----------------------------------------------------------- shell generator

def shell_support(radius: int) -> frozenset:
    """Vertices within ``radius`` of the canonical head, excluding the anchor."""
    return lattice.ball(V0, radius) - {W0}


def connected_sets(support, root, limit: Optional[int] = None) -> list:
    """All connected subsets of ``support`` containing ``root`` (sorted canonically)."""
    support = frozenset(support)
    root = Vertex(*root)
    out = []
    seen = set()

    # standard extension enumeration: grow by one frontier vertex, excluding
    # vertices already rejected in the current branch
    def rec(current: frozenset, frontier: tuple, excluded: frozenset):
        key = current
        if key not in seen:
            seen.add(key)
            out.append(current)
            if limit is not None and len(out) > limit:
                raise RuntimeError("connected-set enumeration exceeded its limit")
        excl = set(excluded)
        for i, u in enumerate(frontier):
            nxt = current | {u}
            new_front = list(frontier[i + 1:])
            for y in neighbours(u):
                if y in support and y not in nxt and y not in excl and y not in new_front:
                    new_front.append(y)
            rec(nxt, tuple(new_front), frozenset(excl))
            excl.add(u)

    start_front = tuple(y for y in neighbours(root) if y in support)
    rec(frozenset({root}), start_front, frozenset())
    out.sort(key=lambda s: (len(s), sorted(s)))
    return out


def shell_catalogue(family: str, radius: int) -> Catalogue:
    """Baseline catalogue from the ``radius`` shell around the designated edge.

    Family A: one entry per connected ``C`` containing the head, with ``C``
    labelled in and its neighbours inside the shell labelled out.  These are
    exclusive and exhaustive because any region determines ``C`` as the
    component of the head within the shell.  Family F: the same sets with no
    out labels, always including the two-vertex head-plus-mate entry.
    """
    support = shell_support(radius)
    entries = []
    for c in connected_sets(support, V0):
        if family == "A":
            outs = frozenset(u for x in c for u in neighbours(x) if u in support and u not in c)
            entries.append(ExtendedRegion(c, outs))
        elif family == "F":
            entries.append(ExtendedRegion(c))
        else:
            raise CatalogueError(f"unknown family {family!r}")
    return Catalogue(family, entries)
