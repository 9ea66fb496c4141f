"""Command-line entry points for each pipeline stage.

Exit codes: 0 success, 2 usage error, 3 validation failure (bad input,
hash mismatch, violated certificate), 4 infeasible system, 5 budget exceeded.
Rationals are written as ``p/q``; progress goes to stderr.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from importlib import resources

from . import afset as afset_mod
from . import decay_cert, dynamics, gamma, lattice
from .boundary_pair import load_pair, validate
from .coloring import count_at_vertex
from .lattice import Vertex, edge
from .mu_engine import compute_mu_table, load_mu_table, save_mu_table
from .region import CatalogueError, load_catalogue, save_catalogue, shell_catalogue

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_INFEASIBLE = 4
EXIT_BUDGET = 5


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


def _log(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _frac(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {s!r}") from exc


def _fs(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def data_path(name: str):
    return resources.files("kagome_ssm") / "data" / name


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc


def _region_doc(path):
    doc = _read_json(path)
    if isinstance(doc, list):
        doc = {"region": doc}
    return frozenset(Vertex(*p) for p in doc["region"]), doc


# ------------------------------------------------------------------ commands

def cmd_shells(args) -> int:
    v = Vertex(*args.vertex)
    if not lattice.is_vertex(*v):
        raise CliError(f"{tuple(v)} is not a lattice vertex")
    counts = lattice.shells(v, args.dmax)
    w = csv.writer(sys.stdout)
    w.writerow(["d", "n_d", "lower", "upper"])
    for d, n in enumerate(counts):
        upper = (8 * d + 2) if lattice.is_odd(v) else (32 * d - 24 if d else 1)
        w.writerow([d, n, d // 2, upper])
    return EXIT_OK


def cmd_count(args) -> int:
    region, doc = _region_doc(args.region)
    bd = {edge(Vertex(*a), Vertex(*b)): c for a, b, c in doc.get("boundary", [])}
    v = Vertex(*args.vertex) if args.vertex else min(region)
    n = count_at_vertex(region, bd, v, args.q)
    print(json.dumps({"vertex": list(v), "counts": list(n), "total": sum(n)}))
    return EXIT_OK


def cmd_catalogue(args) -> int:
    cat = shell_catalogue(args.family, args.radius)
    cat.validate()
    save_catalogue(cat, args.out)
    _log(f"{len(cat)} entries, sha256 {cat.digest()}")
    return EXIT_OK


def cmd_mu_table(args) -> int:
    cat = load_catalogue(args.catalogue)
    if cat.family != "F":
        raise CliError("mu-table needs an F catalogue")
    progress = (lambda f, m, r: _log(f"f={f} m={m} mu={_fs(r.mu)}")) if args.verbose else None
    table = compute_mu_table(cat, args.q, args.method, progress)
    save_mu_table(table, args.out)
    _log(f"{len(table.entries)} constants, sha256 {table.digest()}")
    return EXIT_OK


def cmd_gamma(args) -> int:
    x = load_pair(args.pair)
    err = validate(x)
    if err:
        raise CliError(f"invalid pair: {err}")
    try:
        prof = gamma.GammaEngine(args.budget).profile(x, args.depth)
    except gamma.BudgetExceeded as exc:
        raise CliError(str(exc), EXIT_BUDGET) from exc
    for d, g in enumerate(prof, start=1):
        print(f"{d},{_fs(g)}")
    return EXIT_OK


def cmd_afset_build(args) -> int:
    a_cat = load_catalogue(args.a)
    f_cat = load_catalogue(args.f)
    table = load_mu_table(args.mu)
    s = afset_mod.build(a_cat, f_cat, table)
    s.save(args.out)
    _log(f"{len(s.tuples)} tuples, sha256 {s.digest()}")
    return EXIT_OK


def _load_stage(args):
    s = afset_mod.AFSet.load(args.afset)
    table = load_mu_table(args.mu)
    mate_in = decay_cert.mate_in_map(load_catalogue(args.a)) if args.a else None
    if table.digest() != s.mu_hash:
        raise CliError("the constant table does not match the one the tuple set was built from")
    return s, table, mate_in


def cmd_cert_solve(args) -> int:
    s, table, mate_in = _load_stage(args)
    if args.bisect:
        cert, fail = decay_cert.bisect_epsilon(s, table, hi=args.eps, steps=args.steps, mate_in=mate_in,
                                               cap=args.cap)
        if cert is None:
            print(fail.describe() if fail is not None else "infeasible")
            return EXIT_INFEASIBLE
    else:
        cert = decay_cert.solve(s, table, args.eps, args.cap, mate_in)
        if isinstance(cert, decay_cert.Infeasible):
            print(cert.describe())
            return EXIT_INFEASIBLE
    cert.save(args.out)
    print(f"feasible at eps={_fs(cert.epsilon)} alpha_max={_fs(cert.alpha_max)} ({float(cert.alpha_max):.6f})")
    return EXIT_OK


def cmd_cert_verify(args) -> int:
    s, table, mate_in = _load_stage(args)
    try:
        cert = decay_cert.DecayCertificate.load(args.cert)
        bad = decay_cert.verify(cert, s, table, mate_in)
    except (decay_cert.HashMismatch, ValueError, KeyError) as exc:
        raise CliError(str(exc)) from exc
    if bad:
        print(f"NOT GOOD: {bad}")
        return EXIT_INVALID
    print(f"GOOD w.r.t. ε={_fs(cert.epsilon)} (alpha_max={_fs(cert.alpha_max)})")
    return EXIT_OK


def cmd_lemma9(args) -> int:
    path = args.region or data_path("lemma9_candidate.json")
    region, _ = _region_doc(path)
    try:
        res = dynamics.check_two_equal_neighbours(region)
    except dynamics.StateBudgetExceeded as exc:
        raise CliError(str(exc), EXIT_BUDGET) from exc
    if res.holds:
        print(f"holds ({res.checked} colourings checked)")
        return EXIT_OK
    cex = {f"{v[0]},{v[1]}": c for v, c in sorted(res.counterexample.items())}
    print(f"counterexample {json.dumps(cex)} ({res.checked} colourings checked)")
    return EXIT_INVALID


def _chain(args):
    region, doc = _region_doc(args.region) if args.region else (frozenset(dynamics.FROZEN_REGION), {})
    if args.boundary in (None, "zero"):
        bd = {}
    elif args.boundary == "frozen":
        bd = dynamics.FROZEN_BOUNDARY
    else:
        bd = dynamics.load_boundary(args.boundary)
    return dynamics.ChainConfig(region, bd, args.q, args.variant, args.radius, args.seed)


def cmd_dynamics(args) -> int:
    cfg = _chain(args)
    try:
        verts, states = dynamics.all_states(cfg.region, cfg.boundary, cfg.q)
        if args.graph:
            g = dynamics.state_graph(cfg)
            comps = g.components()
            print(f"states={len(states)} components={len(comps)} isolated={len(g.isolated())}")
            return EXIT_OK
        start = dict(zip(verts, states[0]))
        w = csv.writer(sys.stdout)
        w.writerow(["step", "tv", "ci_lo", "ci_hi"])
        for t in range(0, args.steps + 1, max(1, args.every)):
            est = dynamics.tv_to_uniform(cfg, start, t, args.trials)
            w.writerow([t, f"{est.tv:.6f}", f"{est.lo:.6f}", f"{est.hi:.6f}"])
    except dynamics.StateBudgetExceeded as exc:
        raise CliError(str(exc), EXIT_BUDGET) from exc
    return EXIT_OK


def cmd_path(args) -> int:
    cfg = _chain(args)
    rng = cfg.rng()
    verts, states = dynamics.all_states(cfg.region, cfg.boundary, cfg.q)
    a = dict(zip(verts, states[int(rng.integers(len(states)))]))
    b = dict(zip(verts, states[int(rng.integers(len(states)))]))
    try:
        rep = dynamics.recolouring_path(cfg.region, a, b, cfg.boundary, cfg.q)
    except dynamics.PathSearchError as exc:
        raise CliError(str(exc), EXIT_BUDGET) from exc
    dynamics.apply_moves(cfg.region, a, rep.moves, cfg.boundary, cfg.q)
    print(json.dumps({"hamming": rep.hamming, "moves": [[list(v), c] for v, c in rep.moves]}))
    return EXIT_OK


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kagome-ssm", description="Decay certificates and dynamics on the kagome lattice")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shells", help="shell sizes n_d(v) with their lower/upper bounds")
    p.add_argument("--vertex", type=int, nargs=2, default=(1, 1))
    p.add_argument("--dmax", type=int, default=10)
    p.set_defaults(func=cmd_shells)

    p = sub.add_parser("count", help="exact colouring counts at a vertex")
    p.add_argument("--region", required=True, help="JSON with 'region' and optional 'boundary' edge colours")
    p.add_argument("--vertex", type=int, nargs=2)
    p.add_argument("--q", type=int, default=5)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("catalogue", help="generate a shell catalogue")
    p.add_argument("--family", choices=["A", "F"], required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_catalogue)

    p = sub.add_parser("mu-table", help="family constants for an F catalogue")
    p.add_argument("--catalogue", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--q", type=int, default=5)
    p.add_argument("--method", default="auto", choices=["auto", "direct", "split", "exhaustive"])
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_mu_table)

    p = sub.add_parser("gamma", help="Gamma^1..Gamma^d of an edge-boundary pair")
    p.add_argument("--pair", required=True)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--budget", type=int, default=200_000)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("afset-build", help="build the 5-tuple set")
    p.add_argument("--a", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_afset_build)

    helps = {"cert-solve": "solve the decay recursion for an exact certificate",
             "cert-verify": "re-check a certificate against a tuple set",
             "dynamics": "run heat-bath dynamics on a region",
             "path": "recolouring path between two random states"}
    for name, func in (("cert-solve", cmd_cert_solve), ("cert-verify", cmd_cert_verify)):
        p = sub.add_parser(name, help=helps[name])
        if name == "cert-verify":
            p.add_argument("cert")
        p.add_argument("afset")
        p.add_argument("mu")
        p.add_argument("--a", help="A catalogue (pins A-sets that are empty by definition)")
        if name == "cert-solve":
            p.add_argument("--eps", type=_frac, default=Fraction(1, 1000))
            p.add_argument("--cap", type=_frac, default=Fraction(10**6))
            p.add_argument("--bisect", action="store_true", help="search the largest eps below --eps")
            p.add_argument("--steps", type=int, default=20)
            p.add_argument("--out", default="cert.json")
        p.set_defaults(func=func)

    p = sub.add_parser("lemma9", help="two-equal-neighbours check on a region")
    p.add_argument("--region")
    p.set_defaults(func=cmd_lemma9)

    for name, func in (("dynamics", cmd_dynamics), ("path", cmd_path)):
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--region")
        p.add_argument("--boundary", help="JSON file, 'zero' or 'frozen'")
        p.add_argument("--variant", choices=list(dynamics.VARIANTS), default="glauber")
        p.add_argument("--radius", type=int, default=0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--q", type=int, default=5)
        if name == "dynamics":
            p.add_argument("--steps", type=int, default=100)
            p.add_argument("--every", type=int, default=10)
            p.add_argument("--trials", type=int, default=200)
            p.add_argument("--graph", action="store_true", help="report state-graph connectivity instead")
        p.set_defaults(func=func)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        _log(f"error: {exc}")
        return exc.code
    except CatalogueError as exc:
        _log(f"error: {exc}")
        return EXIT_INVALID
    except ValueError as exc:
        _log(f"error: {exc}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
