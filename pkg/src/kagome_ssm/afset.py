"""Construction of the set of 5-tuples that drives the decay inequalities.

Every in/out labelling of a big template around the canonical edge fixes,
for any pair matching it, the A entry of the pair itself, the A entries of
its three children (the head removed, distinguished edges towards the three
other neighbours), and the F entries the pair is known to match.  For each
admissible class ``m`` and each row of the case table a tuple::

    (A[a, m], F[f, m], A[a1, m1], A[a2, m2], A[a3, m3])

is emitted, where ``f`` is the applicable F entry of least constant and
``m_i = 0`` marks an empty child.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .boundary_pair import EdgeBoundaryPair, child, classify
from .gamma import coupling
from .lattice import CANONICAL_EDGE, Vertex, edge_frame, from_canonical, triangle_mate
from .mu_engine import MuTable
from .region import Catalogue, ExtendedRegion, connected_sets, orient

W0, V0 = CANONICAL_EDGE

# Case table: (class group, second neighbour in, third neighbour in) -> rows.
# The first neighbour is the triangle mate, so it is in exactly for classes 1 and 2.
# Group 1: the pair is in M1, so the first child sees a pivot colour on its far
# edge (class 3).  Group 2: nothing is known about that edge (class 4).
# Group 34: the mate is out, so the first child is empty.
CASE_TABLE = {
    (1, True, True): [(3, 1, 1), (3, 1, 2), (3, 2, 1), (3, 2, 2)],
    (1, True, False): [(3, 4, 0)],
    (1, False, True): [(3, 0, 4)],
    (1, False, False): [(3, 0, 0)],
    (2, True, True): [(4, 1, 1), (4, 1, 2), (4, 2, 1), (4, 2, 2)],
    (2, True, False): [(4, 4, 0)],
    (2, False, True): [(4, 0, 4)],
    (2, False, False): [(4, 0, 0)],
    (34, True, True): [(0, 1, 1), (0, 1, 2), (0, 2, 1), (0, 2, 2)],
    (34, True, False): [(0, 4, 0)],
    (34, False, True): [(0, 0, 4)],
    (34, False, False): [(0, 0, 0)],
}


def twelve_cases(m: int, pattern: tuple, table: Optional[dict] = None) -> list:
    """Child class rows for class ``m`` and the in/out pattern of the head's three neighbours."""
    table = table or CASE_TABLE
    n1, n2, n3 = (bool(p) for p in pattern)
    if m in (1, 2):
        if not n1:
            raise ValueError("classes 1 and 2 need the first neighbour inside")
        key = (m, n2, n3)
    elif m in (3, 4):
        if n1:
            raise ValueError("classes 3 and 4 need the first neighbour outside")
        key = (34, n2, n3)
    else:
        raise ValueError("m must be in 1..4")
    if key not in table:
        raise ValueError(f"no case for {key}")
    return list(table[key])


@dataclass(frozen=True)
class FiveTuple:
    a: int
    m: int
    f: int
    children: tuple  # three entries, each (a_i, m_i) or None

    def sort_key(self) -> tuple:
        return (self.a, self.m, self.f, tuple((-1, -1) if c is None else c for c in self.children))

    def to_json(self) -> dict:
        return {"a": self.a, "m": self.m, "f": self.f,
                "children": [list(c) if c is not None else None for c in self.children]}

    @classmethod
    def from_json(cls, d: dict) -> "FiveTuple":
        return cls(int(d["a"]), int(d["m"]), int(d["f"]),
                   tuple(tuple(c) if c is not None else None for c in d["children"]))


@dataclass
class AFSet:
    tuples: list
    a_hash: str
    f_hash: str
    mu_hash: str
    params: dict = field(default_factory=dict)

    def header(self) -> dict:
        return {"kind": "header", "a_catalogue": self.a_hash, "f_catalogue": self.f_hash,
                "mu_table": self.mu_hash, "params": self.params, "count": len(self.tuples)}

    def dumps(self) -> str:
        lines = [json.dumps(self.header(), sort_keys=True)]
        lines += [json.dumps(t.to_json(), sort_keys=True) for t in self.tuples]
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path) -> "AFSet":
        with open(path) as fh:
            lines = [json.loads(s) for s in fh if s.strip()]
        if not lines or lines[0].get("kind") != "header":
            raise ValueError("missing header record")
        h = lines[0]
        tuples = [FiveTuple.from_json(d) for d in lines[1:]]
        return cls(tuples, h["a_catalogue"], h["f_catalogue"], h["mu_table"], h.get("params", {}))

    def a_sets(self) -> list:
        """All (a, m) identifiers that occur, roots and children."""
        out = set()
        for t in self.tuples:
            out.add((t.a, t.m))
            for c in t.children:
                if c is not None:
                    out.add(c)
        return sorted(out)


# ------------------------------------------------------------------ placement

def child_edges() -> list:
    """Directed child edges ``(head, n_i)`` in the canonical frame, ``i = 1..3``."""
    return [(V0, n) for n in edge_frame(W0, V0)]


def big_support(a_cat: Catalogue, f_cat: Catalogue) -> tuple:
    """Vertices whose labels determine the root/child A entries and the applicable F entries."""
    sup = set(a_cat.support) | set(f_cat.support)
    for w, v in child_edges():
        g = from_canonical(w, v)
        sup |= {g(p) for p in a_cat.support}
    sup.discard(W0)
    return tuple(sorted(sup))


def _gather_index(cat: Catalogue, placement, index: dict) -> np.ndarray:
    g = from_canonical(*placement)
    out = []
    for p in cat.support:
        img = g(p)
        if img == W0:
            out.append(-1)  # the root anchor is always outside
        elif img == V0 and placement[1] != V0:
            out.append(-1)  # the removed head is outside every child region
        else:
            out.append(index[img])
    return np.array(out, dtype=np.int64)


def _codes(rows: np.ndarray, gidx: np.ndarray) -> np.ndarray:
    """Bit-pack the labels gathered at ``gidx`` (missing positions count as out)."""
    codes = np.zeros(rows.shape[0], dtype=object if len(gidx) > 62 else np.int64)
    for bit, j in enumerate(gidx):
        if j >= 0:
            codes = codes + rows[:, j].astype(codes.dtype) * (1 << bit)
    return codes


def _match(cat: Catalogue, tin: int) -> list:
    return [i for i, (a, b) in enumerate(cat.masks) if a & ~tin == 0 and b & tin == 0]


@dataclass
class Labelling:
    """A big-template labelling summarised by what it determines."""

    a: int
    children: tuple  # A index per child, None when the child neighbour is out
    mate_in: bool
    f_candidates: tuple  # F indices whose template lies inside the labelling


def derive_sets(inside: Iterable, a_cat: Catalogue) -> tuple:
    """A indices of the root and of the three children for an in-set (canonical frame)."""
    inside = frozenset(Vertex(*p) for p in inside)
    if V0 not in inside:
        raise ValueError("the head must be labelled in")
    root = _match(a_cat, a_cat.in_mask(inside, W0, V0))
    if len(root) != 1:
        raise ValueError(f"expected exactly one root A entry, got {root}")
    kids = []
    sub = inside - {V0}
    for w, v in child_edges():
        if v not in inside:
            kids.append(None)
            continue
        hit = _match(a_cat, a_cat.in_mask(sub, w, v))
        if len(hit) != 1:
            raise ValueError(f"expected exactly one child A entry, got {hit}")
        kids.append(hit[0])
    return root[0], tuple(kids)


def f_nonempty(f_cat: Catalogue, f: int, m: int) -> bool:
    mate = triangle_mate(W0, V0)
    return (mate in f_cat.entries[f].inside) == (m in (1, 2))


def derive_f(candidates: Iterable[int], m: int, mu_table: MuTable, f_cat: Catalogue) -> int:
    """Applicable F entry with the least constant for class ``m``; ties go to the smaller index.

    Entries whose class-``m`` family is empty by definition are skipped: their
    constant is 0 by convention and bounds nothing.
    """
    best = None
    for f in sorted(candidates):
        if not f_nonempty(f_cat, f, m):
            continue
        val = mu_table[(f, m)]
        if best is None or val < best[0]:
            best = (val, f)
    if best is None:
        raise ValueError(f"no applicable F entry for class {m}")
    return best[1]


def enumerate_labellings(a_cat: Catalogue, f_cat: Catalogue, limit: Optional[int] = None) -> list:
    """Distinct summaries over every connected in-set of the big support containing the head."""
    support = big_support(a_cat, f_cat)
    index = {p: i for i, p in enumerate(support)}
    sets = connected_sets(support, V0, limit=limit)
    rows = np.zeros((len(sets), len(support)), dtype=np.int8)
    for r, s in enumerate(sets):
        for p in s:
            rows[r, index[p]] = 1
    placements = [(W0, V0)] + child_edges()
    a_codes = [_codes(rows, _gather_index(a_cat, pl, index)) for pl in placements]
    f_codes = _codes(rows, _gather_index(f_cat, (W0, V0), index))
    kid_in = [rows[:, index[v]] for _, v in child_edges()]
    combo = np.stack([np.asarray(c, dtype=object) for c in a_codes + [f_codes]] +
                     [np.asarray(k, dtype=object) for k in kid_in], axis=1)
    seen = {}
    cache_a: dict = {}
    cache_f: dict = {}
    out = []
    for row in combo:
        key = tuple(int(x) for x in row)
        if key in seen:
            continue
        seen[key] = True
        codes, fcode, kin = key[:4], key[4], key[5:]
        ids = []
        for k, code in enumerate(codes):
            if k > 0 and not kin[k - 1]:
                ids.append(None)
                continue
            hit = cache_a.get(code)
            if hit is None:
                hit = cache_a[code] = _match(a_cat, code)
            if len(hit) != 1:
                raise ValueError(f"A catalogue is not exclusive/exhaustive at a big labelling: {hit}")
            ids.append(hit[0])
        fc = cache_f.get(fcode)
        if fc is None:
            fc = cache_f[fcode] = tuple(i for i, (a, _) in enumerate(f_cat.masks) if a & ~fcode == 0)
        out.append(Labelling(ids[0], tuple(ids[1:]), bool(kin[0]), fc))
    return out


def build(a_cat: Catalogue, f_cat: Catalogue, mu_table: MuTable, labellings: Optional[list] = None,
          table: Optional[dict] = None, params: Optional[dict] = None) -> AFSet:
    if mu_table.catalogue_hash != f_cat.digest():
        raise ValueError("constant table was computed for a different F catalogue")
    if labellings is None:
        labellings = enumerate_labellings(a_cat, f_cat)
    tuples = set()
    for lab in labellings:
        pattern = tuple(c is not None for c in lab.children)
        if pattern[0] != lab.mate_in:
            raise AssertionError("first child must be the triangle mate")
        for m in ((1, 2) if lab.mate_in else (3, 4)):
            f = derive_f(lab.f_candidates, m, mu_table, f_cat)
            for row in twelve_cases(m, pattern, table):
                kids = tuple(None if mi == 0 else (lab.children[i], mi) for i, mi in enumerate(row))
                tuples.add(FiveTuple(lab.a, m, f, kids))
    ordered = sorted(tuples, key=FiveTuple.sort_key)
    return AFSet(ordered, a_cat.digest(), f_cat.digest(), mu_table.digest(), dict(params or {}))


# ------------------------------------------------------------ cover checking

def pair_labelling_sets(x: EdgeBoundaryPair, a_cat: Catalogue, f_cat: Catalogue) -> tuple:
    """A index of ``x``, and the F entries ``x`` matches, computed directly on the pair."""
    w, v = orient(x.region, (x.w, x.v))
    hit = _match(a_cat, a_cat.in_mask(x.region, w, v))
    fs = [i for i in range(len(f_cat)) if f_cat.masks[i][0] & ~f_cat.in_mask(x.region, w, v) == 0]
    return hit, fs


def check_cover(afset: AFSet, x: EdgeBoundaryPair, a_cat: Catalogue, f_cat: Catalogue,
                mu_table: MuTable) -> Optional[str]:
    """Falsification check of the covering property on one concrete pair.

    Looks for a tuple rooted at the pair's own A set and class whose F
    constant bounds ``nu(x)`` and whose child sets contain every actual child
    for every colour pair of positive coupling mass.
    """
    from .gamma import nu

    hit, fs = pair_labelling_sets(x, a_cat, f_cat)
    if len(hit) != 1:
        return f"pair matches {len(hit)} A entries"
    a = hit[0]
    classes = classify(x)
    tab = coupling(x)
    moves = [(c, cp) for c, cp, _ in tab.off_diagonal()]
    kid_info = []
    for c, cp in moves:
        row = []
        for i in (1, 2, 3):
            ch = child(x, i, c, cp)
            if ch is None:
                row.append(None)
                continue
            h2, _ = pair_labelling_sets(ch, a_cat, f_cat)
            if len(h2) != 1:
                return f"child {i} matches {len(h2)} A entries"
            row.append((h2[0], classify(ch)))
        kid_info.append(row)
    nux = nu(x)
    by_root = {}
    for t in afset.tuples:
        by_root.setdefault((t.a, t.m), []).append(t)
    for m in sorted(classes):
        cands = by_root.get((a, m), [])
        if not cands:
            continue
        ok_all = True
        for row in kid_info:
            found = False
            for t in cands:
                if t.f not in fs or mu_table[(t.f, t.m)] < nux:
                    continue
                good = True
                for i in range(3):
                    got, want = row[i], t.children[i]
                    if got is None:
                        if want is not None:
                            good = False
                            break
                        continue
                    if want is None or want[0] != got[0] or want[1] not in got[1]:
                        good = False
                        break
                if good:
                    found = True
                    break
            if not found:
                ok_all = False
                break
        if ok_all:
            return None
    return f"no tuple covers the pair (A entry {a}, classes {sorted(classes)})"
