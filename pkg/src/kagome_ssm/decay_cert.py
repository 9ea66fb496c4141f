"""Decay inequality system, its least solution, and exact certificate checking.

For a fixed ``eps`` a vector ``alpha`` over the A-sets ``(a, m)`` is good when
every non-empty A-set has ``alpha >= 1/(1-eps)``, empty ones have
``alpha >= 0``, and every 5-tuple satisfies::

    mu_F * (alpha_1 + alpha_2 + alpha_3) <= alpha_root * (1 - eps)

The right-hand map is monotone, so iterating it from the lower-bound vector
climbs to the least good vector when one exists.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .afset import AFSet
from .mu_engine import MuTable
from .lattice import triangle_mate, CANONICAL_EDGE

DEFAULT_CAP = Fraction(10**6)


class HashMismatch(ValueError):
    pass


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _key_str(key) -> str:
    return f"{key[0]}:{key[1]}"


def _key_parse(s: str) -> tuple:
    a, m = s.split(":")
    return int(a), int(m)


@dataclass
class DecayCertificate:
    epsilon: Fraction
    alphas: dict  # (a, m) -> Fraction
    hashes: dict = field(default_factory=dict)

    @property
    def alpha_max(self) -> Fraction:
        return max(self.alphas.values(), default=Fraction(0))

    def to_json(self) -> dict:
        return {
            "epsilon": frac_str(self.epsilon),
            "alphas": {_key_str(k): frac_str(v) for k, v in sorted(self.alphas.items())},
            "alpha_max": frac_str(self.alpha_max),
            "hashes": dict(self.hashes),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "DecayCertificate":
        alphas = {_key_parse(k): Fraction(v) for k, v in doc["alphas"].items()}
        cert = cls(Fraction(doc["epsilon"]), alphas, dict(doc.get("hashes", {})))
        if "alpha_max" in doc and Fraction(doc["alpha_max"]) != cert.alpha_max:
            raise ValueError("alpha_max does not match the alpha vector")
        return cert

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "DecayCertificate":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


@dataclass
class Infeasible:
    epsilon: Fraction
    witness: list  # chain of (a, m) keys whose alpha climbed past the cap
    tuple_chain: list
    sweeps: int

    def describe(self) -> str:
        chain = " <- ".join(_key_str(k) for k in self.witness)
        return f"infeasible at eps={frac_str(self.epsilon)} after {self.sweeps} sweeps: {chain}"


@dataclass
class System:
    """Tuples grouped by root with their constants resolved."""

    keys: list
    empty: set
    rows: dict  # root key -> list of (mu, children keys, tuple)


def build_system(afset: AFSet, mu_table: MuTable, mate_in: Optional[dict] = None) -> System:
    """Group tuples by root.  ``mate_in`` maps an A index to whether its template holds the mate.

    A-sets ``(a, m)`` are empty by definition when the class needs the mate on
    the other side of where entry ``a`` puts it; those are pinned to 0.
    """
    rows: dict = {}
    keys = set()
    for t in afset.tuples:
        root = (t.a, t.m)
        kids = tuple(c for c in t.children if c is not None)
        rows.setdefault(root, []).append((mu_table[(t.f, t.m)], kids, t))
        keys.add(root)
        keys.update(kids)
    empty = set()
    if mate_in is not None:
        for a, m in keys:
            if a in mate_in and mate_in[a] != (m in (1, 2)):
                empty.add((a, m))
    return System(sorted(keys), empty, rows)


def lower_bound(key, eps: Fraction, system: System) -> Fraction:
    return Fraction(0) if key in system.empty else 1 / (1 - eps)


def _rhs(row, alpha, eps):
    mu, kids, _ = row
    return mu * sum((alpha[k] for k in kids), Fraction(0)) / (1 - eps)


def solve(afset: AFSet, mu_table: MuTable, eps, cap=DEFAULT_CAP, mate_in: Optional[dict] = None,
          system: Optional[System] = None, max_rounds: int = 200):
    """Least good vector at ``eps``, or an :class:`Infeasible` report.

    The operator ``T(alpha)_k = max(lb_k, max_rows mu/(1-eps) * sum alpha_children)``
    is monotone, and the least good vector is its least fixpoint above the
    lower bounds.  Kleene iteration only reaches it in the limit, so a float
    Kleene run (which also detects divergence past ``cap``) fixes the
    maximising row of every A-set, the resulting linear system is solved in
    exact rationals, and the policy is corrected until the exact vector is a
    fixpoint of ``T``.
    """
    eps = Fraction(eps)
    cap = Fraction(cap)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if cap <= 1 / (1 - eps):
        raise ValueError("cap must exceed 1/(1-eps)")
    system = system or build_system(afset, mu_table, mate_in)
    approx, ok, trace, sweeps = _kleene_float(system, float(eps), float(cap))
    if not ok:
        start = max(approx, key=lambda k: approx[k])
        return _witness(start, trace, eps, sweeps)
    policy = {}
    for k in system.keys:
        if k in system.empty:
            continue
        base = 1.0 / (1.0 - float(eps))
        best, arg = base * (1 + 1e-12), None
        for row in system.rows.get(k, ()):
            val = float(row[0]) * sum(approx[c] for c in row[1]) / (1.0 - float(eps))
            if val > best:
                best, arg = val, row
        policy[k] = arg
    for _ in range(max_rounds):
        alpha = _policy_values(system, policy, eps)
        if alpha is None or any(v > cap for v in alpha.values()):
            return _witness(max(approx, key=lambda k: approx[k]), trace, eps, sweeps)
        changed = False
        for k, arg in policy.items():
            lb = lower_bound(k, eps, system)
            if alpha[k] < lb:
                policy[k] = None
                changed = True
                continue
            for row in system.rows.get(k, ()):
                if _rhs(row, alpha, eps) > alpha[k]:
                    policy[k] = row
                    changed = True
                    break
        if not changed:
            return DecayCertificate(eps, alpha, _hashes(afset, mu_table))
    raise RuntimeError("policy correction did not settle")


def _policy_values(system: System, policy: dict, eps: Fraction) -> Optional[dict]:
    """Exact solution of ``alpha_k = rhs of the chosen row`` (or the lower bound)."""
    alpha = {k: Fraction(0) for k in system.empty}
    rows = {}
    for k, arg in policy.items():
        if arg is None:
            alpha[k] = lower_bound(k, eps, system)
        else:
            rows[k] = arg
    # substitute known values; remaining unknowns form a sparse linear system
    eqs = {}
    for k, (mu, kids, _) in rows.items():
        coef = mu / (1 - eps)
        lin, const = {}, Fraction(0)
        for c in kids:
            if c in rows:
                lin[c] = lin.get(c, Fraction(0)) + coef
            else:
                const += coef * alpha.get(c, Fraction(0))
        eqs[k] = (lin, const)
    # Gauss-Jordan on x_k - sum lin x = const; every stored pivot row mentions
    # its own key and non-pivot keys only
    pivots: dict = {}
    for k in sorted(eqs):
        lin, const = eqs[k]
        row = {k: Fraction(1)}
        for c, a in lin.items():
            row[c] = row.get(c, Fraction(0)) - a
        rhs = const
        for p in [p for p in row if p in pivots]:
            a = row.pop(p)
            prow, prhs = pivots[p]
            for c, b in prow.items():
                if c != p:
                    row[c] = row.get(c, Fraction(0)) - a * b
            rhs -= a * prhs
        piv = row.get(k, Fraction(0))
        if piv <= 0:
            return None
        row = {c: b / piv for c, b in row.items() if b != 0}
        rhs /= piv
        for p, (prow, prhs) in list(pivots.items()):
            a = prow.get(k)
            if a:
                new = {c: v for c, v in prow.items() if c != k}
                for c, b in row.items():
                    if c != k:
                        new[c] = new.get(c, Fraction(0)) - a * b
                pivots[p] = ({c: v for c, v in new.items() if v != 0}, prhs - a * rhs)
        pivots[k] = (row, rhs)
    for k, (row, rhs) in pivots.items():
        if len(row) != 1:
            return None
        alpha[k] = rhs
    return alpha


def _kleene_float(system: System, eps: float, cap: float, max_sweeps: int = 100_000):
    base = 1.0 / (1.0 - eps)
    alpha = {k: (0.0 if k in system.empty else base) for k in system.keys}
    rows = {k: [(float(mu), kids, row) for mu, kids, row in r] for k, r in system.rows.items()}
    trace: dict = {}
    for sweep in range(1, max_sweeps + 1):
        delta = 0.0
        for k in system.keys:
            if k in system.empty:
                continue
            best, arg = alpha[k], None
            for mu, kids, row in rows.get(k, ()):
                val = mu * sum(alpha[c] for c in kids) / (1.0 - eps)
                if val > best:
                    best, arg = val, (mu, kids, row)
            if arg is not None:
                delta = max(delta, best - alpha[k])
                alpha[k] = best
                trace[k] = arg
                if best > cap:
                    return alpha, False, trace, sweep
        if delta <= 1e-14 * max(alpha.values(), default=1.0):
            return alpha, True, trace, sweep
    return alpha, False, trace, max_sweeps


def _witness(start, trace, eps, sweeps) -> Infeasible:
    chain, rows, seen = [start], [], {start}
    k = start
    while k in trace and trace[k] is not None:
        row = trace[k]
        rows.append(row[2])
        nxt = max(row[1], key=lambda c: (c in trace, c))
        if nxt in seen:
            chain.append(nxt)
            break
        seen.add(nxt)
        chain.append(nxt)
        k = nxt
    return Infeasible(eps, chain, rows, sweeps)


def solve_float(system: System, eps: float, cap: float = 1e6):
    """Floating-point Kleene iteration; returns ``(alpha, converged)``."""
    alpha, ok, _, _ = _kleene_float(system, eps, cap)
    return alpha, ok


def _hashes(afset: AFSet, mu_table: MuTable) -> dict:
    return {"afset": afset.digest(), "mu_table": mu_table.digest(),
            "a_catalogue": afset.a_hash, "f_catalogue": afset.f_hash}


def verify(cert: DecayCertificate, afset: AFSet, mu_table: MuTable, mate_in: Optional[dict] = None,
           check_hashes: bool = True):
    """``None`` when the certificate is good, else a description of the first violation."""
    if check_hashes and cert.hashes:
        want = _hashes(afset, mu_table)
        for k, v in cert.hashes.items():
            if want.get(k) != v:
                raise HashMismatch(f"{k} hash does not match the certificate")
    eps = cert.epsilon
    if not 0 < eps < 1:
        return f"eps={eps} is not in (0, 1)"
    system = build_system(afset, mu_table, mate_in)
    for k in system.keys:
        if k not in cert.alphas:
            return f"no alpha for A-set {_key_str(k)}"
        if cert.alphas[k] < lower_bound(k, eps, system):
            return f"alpha of {_key_str(k)} is below its lower bound"
    for k, rows in system.rows.items():
        for row in rows:
            mu, kids, t = row
            lhs = mu * sum((cert.alphas[c] for c in kids), Fraction(0))
            if lhs > cert.alphas[k] * (1 - eps):
                return f"tuple {t.to_json()} violated: {frac_str(lhs)} > {frac_str(cert.alphas[k] * (1 - eps))}"
    return None


def bisect_epsilon(afset: AFSet, mu_table: MuTable, lo=Fraction(0), hi=Fraction(1, 2), steps: int = 20,
                   mate_in: Optional[dict] = None, cap=DEFAULT_CAP):
    """Largest ``eps`` (on a dyadic grid) for which :func:`solve` succeeds, with its certificate.

    Feasibility is monotone in ``eps``: a good vector for ``eps`` is good for
    every smaller value after rescaling to respect the lower bound.  Returns
    ``(None, last_infeasible)`` when no grid point works.
    """
    system = build_system(afset, mu_table, mate_in)
    lo, hi = Fraction(lo), Fraction(hi)
    best, fail = None, None
    for _ in range(steps):
        mid = (lo + hi) / 2
        approx, ok, trace, sweeps = _kleene_float(system, float(mid), float(cap))
        if ok:
            res = solve(afset, mu_table, mid, cap, mate_in, system=system)
        else:
            res = _witness(max(approx, key=lambda k: approx[k]), trace, mid, sweeps)
        if isinstance(res, DecayCertificate):
            best, lo = res, mid
        else:
            fail, hi = res, mid
    return best, fail


def mate_in_map(a_cat) -> dict:
    mate = triangle_mate(*CANONICAL_EDGE)
    return {i: mate in e.inside for i, e in enumerate(a_cat.entries)}


# ------------------------------------------------------------------ bounds

def decay_bound(cert: DecayCertificate, d: int) -> Fraction:
    return cert.alpha_max * (1 - cert.epsilon) ** d


def ssm_constant(eps, alpha_max=Fraction(5)) -> Fraction:
    """``6 alpha_max / (eps (1 - eps))``; equals ``30/(eps(1-eps))`` at ``alpha_max = 5``."""
    eps = Fraction(eps)
    return 6 * Fraction(alpha_max) / (eps * (1 - eps))


def ssm_bound(cert: DecayCertificate, d: int, alpha_max=None) -> Fraction:
    am = cert.alpha_max if alpha_max is None else Fraction(alpha_max)
    return ssm_constant(cert.epsilon, am) * (1 - cert.epsilon) ** d
