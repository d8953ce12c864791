"""Command-line interface. Every command prints one JSON document.

Exit codes: 0 ok or verified, 1 falsification finding, 2 usage error,
3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import bounds, classification, decomposition, wreath
from .acceptance import run_acceptance
from .builtins import a5_automorphism_generators, alternating, builtin, symmetric
from .groups import GeneratedGroup
from .irredundance import (
    SearchBudget,
    i_search,
    is_flat,
    is_strongly_flat,
    m_search,
    replacement_counterexample,
)
from .perm import Permutation, parse_perm, perm_from_json
from .rng import make_rng

EXIT_OK, EXIT_FINDING, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    def __init__(self, code: str, detail):
        super().__init__(detail)
        self.code = code
        self.detail = detail


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("usage", message)


# ---------------------------------------------------------------------------
# input helpers

def _read_json(arg: str):
    if os.path.exists(arg):
        with open(arg) as fh:
            return json.load(fh)
    try:
        return json.loads(arg)
    except json.JSONDecodeError:
        raise UsageError("bad_input", f"{arg!r} is neither a file nor JSON")


def _perm(obj, n: int | None) -> Permutation:
    """A cycle string, a list of 1-based cycles, or an {"n", ...} object."""
    if isinstance(obj, list):
        if n is None:
            n = max((max(c) for c in obj if c), default=1)
        return Permutation.from_cycles(obj, n)
    return perm_from_json(obj, n)


def load_group(arg: str) -> GeneratedGroup:
    """'builtin:A5', a bare builtin name, or a group file."""
    if not os.path.exists(arg):
        try:
            return builtin(arg)
        except KeyError as e:
            if arg.startswith("builtin:"):
                raise UsageError("unknown_group", str(e))
    d = _read_json(arg)
    try:
        n = int(d["n"])
        gens = [_perm(g, n) for g in d["generators"]]
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError("bad_group", f"group file needs n and generators: {e}")
    return GeneratedGroup(gens, n, d.get("name"))


def load_set(arg: str) -> list[Permutation]:
    d = _read_json(arg)
    if isinstance(d, dict):
        n = d.get("n")
        items = d.get("elements") or d.get("set") or d.get("generators") or []
    else:
        n, items = None, d
    if n is None:
        pts = [x for it in items for c in (it if isinstance(it, list) else []) for x in c]
        n = max(pts, default=1)
    try:
        return [_perm(x, int(n)) for x in items]
    except ValueError as e:
        raise UsageError("bad_set", str(e))


def _points(text: str) -> list[int]:
    return [int(x) - 1 for x in text.split(",") if x.strip()]


def _budget(args) -> SearchBudget:
    return SearchBudget(node_limit=args.budget_nodes, time_limit_seconds=args.budget_secs,
                        worker_count=args.workers)


def _num(x) -> str:
    return str(x)


# ---------------------------------------------------------------------------
# handlers: each returns (report, exit code)

def cmd_irr(args):
    G = load_group(args.group)
    b = _budget(args)
    if args.what == "m":
        r = m_search(G, b)
        return r.to_json(), EXIT_OK if r.exact else EXIT_BUDGET
    if args.what == "i":
        r = i_search(G, b)
        return r.to_json(), EXIT_OK if r.exact else EXIT_BUDGET
    if args.what == "replace":
        r = replacement_counterexample(G, b)
        return r.to_json(), EXIT_OK if r.exact else EXIT_BUDGET
    value = is_strongly_flat(G, b) if args.strong else is_flat(G, b)
    return {"invariant": "strongly_flat" if args.strong else "flat", "value": value}, EXIT_OK


def cmd_decomp(args):
    if args.what == "m":
        P = decomposition.OrderedPartition.parse(args.partition)
        h = parse_perm(args.perm, P.n)
        dec = decomposition.m_decompose(h, P)
        checks = decomposition.check_m_decomposition(h, P, dec)
        return {"decomposition": dec.to_json(), "checks": checks}, EXIT_OK if all(checks.values()) else EXIT_FINDING
    if args.what == "strong":
        X, Y = _points(args.x), _points(args.y)
        n = args.n or max(X + Y) + 1
        h = parse_perm(args.perm, n)
        return {"decomposition": decomposition.strong_m_decompose(h, X, Y).to_json()}, EXIT_OK
    H = load_set(args.setfile)
    P = decomposition.OrderedPartition.parse(args.partition, H[0].degree if H else None)
    rep = decomposition.closure_cover(H, P, mode=args.mode)
    return rep.to_json(), EXIT_FINDING if rep.verdict == "FALSIFIED" else EXIT_OK


def _unclassifiable(e: ValueError) -> dict:
    return {"error": "unclassifiable", "detail": str(e), "diagnostics": getattr(e, "diagnostics", {})}


def cmd_classify(args):
    if args.what == "an":
        H = load_set(args.setfile)
        try:
            T = classification.normalize_an(H, allow_small=args.allow_small)
        except ValueError as e:
            return _unclassifiable(e), EXIT_FINDING
        return {"tree_form": T.to_json(), "verified": True}, EXIT_OK
    if args.what == "sn":
        H = load_set(args.setfile)
        try:
            c = classification.classify_sn(H)
        except ValueError as e:
            return _unclassifiable(e), EXIT_FINDING
        return c.to_json(), EXIT_OK
    if args.what == "make":
        if args.spec:
            D = classification.TypeDescriptor.from_json(_read_json(args.spec))
        else:
            if args.n is None:
                raise UsageError("usage", "make needs --spec or --n")
            D = classification.random_descriptor(args.type, args.n, make_rng(args.seed))
        problems = classification.check_descriptor(D)
        if problems:
            return {"error": "invalid_descriptor", "detail": problems}, EXIT_USAGE
        H = classification.construct_type(D, verify=False)
        ok = classification.is_irredundant_generating(H, symmetric(D.n))
        return {"descriptor": D.to_json(), "elements": [h.cycle_decomposition() for h in H],
                "irredundant_generating": ok}, EXIT_OK if ok else EXIT_FINDING
    # sample
    name = args.group.replace("builtin:", "")
    kind, n = name[0].upper(), int(name[1:])
    rng = make_rng(args.seed)
    samples, fails = [], 0
    for _ in range(args.count):
        H = classification.sample_max_irredundant(n, rng, kind)
        entry = {"elements": [h.cycle_decomposition() for h in H]}
        try:
            if kind == "A":
                entry["tree_form"] = classification.normalize_an(H, allow_small=True).to_json()
            else:
                entry["types"] = classification.classify_sn(H).types
        except classification.Unclassifiable as e:
            entry["unclassifiable"] = str(e)
            fails += 1
        samples.append(entry)
    return {"group": name, "count": args.count, "unclassifiable": fails, "samples": samples}, \
        EXIT_FINDING if fails else EXIT_OK


def cmd_bounds(args):
    try:
        return _bounds_value(args)
    except bounds.TooLarge as e:
        return {"error": "budget_exhausted", "detail": str(e)}, EXIT_BUDGET


def _bounds_value(args):
    w = args.what
    if w == "f":
        return {"value": _num(bounds.f(args.a, Fraction(args.b)))}, EXIT_OK
    if w == "f1":
        return {"value": _num(bounds.f1(args.a, int(args.b)))}, EXIT_OK
    if w == "g1":
        return {"value": _num(bounds.g1(args.a, int(args.b)))}, EXIT_OK
    if w == "phi":
        return {"value": _num(bounds.phi(args.a, int(args.b)))}, EXIT_OK
    if w == "psi":
        return {"value": _num(bounds.psi(args.a, int(args.b)))}, EXIT_OK
    if w == "omega":
        return {"value": _num(bounds.omega(args.a, int(args.b)))}, EXIT_OK
    if w == "Psi":
        try:
            return {"value": _num(bounds.Psi(args.k, args.n0))}, EXIT_OK
        except bounds.Infeasible as e:
            return {"error": "infeasible", "detail": str(e),
                    "lower_bound": _num(bounds.Psi_lower_bound(args.k, args.n0))}, EXIT_BUDGET
    if w == "iota":
        x = parse_perm(args.perm, args.n)
        return {"member": bounds.iota_member(x, args.k), "displacement": x.displacement()}, EXIT_OK
    x = parse_perm(args.perm, args.n)
    r = bounds.displacement_construct(x, args.k, args.n, relaxed=args.relaxed)
    return r.to_json(), EXIT_OK if r.verified else EXIT_FINDING


def cmd_audit(args):
    claim = args.claim.lower()
    if claim == "displacement":
        target = load_set(args.target)
    else:
        target = load_group(args.target)
    params = {"k": args.k, "n0": args.n0}
    if args.block_size is not None:
        params["block_size"] = args.block_size
    elif claim == "block-kernel":
        raise UsageError("usage", "block-kernel needs --block-size")
    r = bounds.bound_audit(claim, target, **params)
    return r.to_json(), EXIT_FINDING if r.verdict == "FALSIFIED" else EXIT_OK


def _witness_set(G: GeneratedGroup) -> list[Permutation]:
    return m_search(G).witness.elements


def cmd_wreath(args):
    w = args.what
    if w == "build":
        W = wreath.build_wreath(load_group(args.base), load_group(args.top))
        return {"degree": W.degree, "order": str(W.order),
                "generators": [g.cycle_decomposition() for g in W.generators]}, EXIT_OK
    if w == "witness-m":
        S, P = load_group(args.base), load_group(args.top)
        r = wreath.m_witness(_witness_set(S), _witness_set(P), P.degree, S)
        return r.to_json(), EXIT_OK if r.irredundant and r.generating else EXIT_FINDING
    if w == "witness-i":
        S = load_group(args.base)
        r = wreath.i_witness(_witness_set(S), args.n)
        return r.to_json(), EXIT_OK if r.irredundant else EXIT_FINDING
    if w == "hall":
        S = load_group(args.base)
        d = _read_json(args.vectors)
        vecs = [[_perm(x, S.degree) for x in v] for v in d]
        auts = a5_automorphism_generators() if S.degree == 5 and S.order == 60 else None
        return wreath.hall_generates(vecs, S, auts).to_json(), EXIT_OK
    K = load_group(args.group)
    S = load_group(args.base) if args.base else alternating(K.degree // 2)
    return wreath.goursat_classify(K, S).to_json(), EXIT_OK


def cmd_acceptance(args):
    only = [c.strip().upper() for c in args.only.split(",")] if args.only else None
    results = run_acceptance(args.profile, args.seed, only,
                             on_result=lambda r: print(r.line(), file=sys.stderr, flush=True))
    failed = any(r.passed is False for r in results)
    return {"profile": args.profile, "seed": args.seed,
            "criteria": [r.to_json() for r in sorted(results, key=lambda r: int(r.cid[1:]))]}, \
        EXIT_FINDING if failed else EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    def add_globals(q, suppress: bool) -> None:
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        q.add_argument("--seed", type=int, default=d(0))
        q.add_argument("--workers", type=int, default=d(1))
        q.add_argument("--profile", choices=["fast", "slow"], default=d("fast"))
        q.add_argument("--json", action="store_true", default=d(False), help="JSON output (always on)")
        q.add_argument("--output", default=d(None), help="write the report to this file")

    p = _Parser(prog="irk", description="Irredundant generating sets of permutation groups.")
    add_globals(p, False)
    common = _Parser(add_help=False)
    add_globals(common, True)
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser)

    irr = sub.add_parser("irr", parents=[common])
    irr.add_argument("what", choices=["m", "i", "replace", "flat"])
    irr.add_argument("group")
    irr.add_argument("--budget-nodes", type=int)
    irr.add_argument("--budget-secs", type=float)
    irr.add_argument("--strong", action="store_true")
    irr.set_defaults(fn=cmd_irr)

    dc = sub.add_parser("decomp", parents=[common])
    dc.add_argument("what", choices=["m", "strong", "cover"])
    dc.add_argument("target", help="permutation (m, strong) or set file (cover)")
    dc.add_argument("--partition")
    dc.add_argument("--x")
    dc.add_argument("--y")
    dc.add_argument("--n", type=int)
    dc.add_argument("--mode", choices=["M", "K"], default="M")
    dc.set_defaults(fn=cmd_decomp)

    cl = sub.add_parser("classify", parents=[common])
    cl.add_argument("what", choices=["an", "sn", "make", "sample"])
    cl.add_argument("setfile", nargs="?")
    cl.add_argument("--type", type=int, default=1)
    cl.add_argument("--spec")
    cl.add_argument("--n", type=int)
    cl.add_argument("--group", default="A7")
    cl.add_argument("--count", type=int, default=10)
    cl.add_argument("--allow-small", action="store_true")
    cl.set_defaults(fn=cmd_classify)

    bd = sub.add_parser("bounds", parents=[common])
    bd.add_argument("what", choices=["f", "f1", "g1", "phi", "psi", "omega", "Psi", "iota", "lemma18"])
    bd.add_argument("args", nargs="*")
    bd.add_argument("--n0", type=int, default=25)
    bd.add_argument("--perm")
    bd.add_argument("--k", type=int)
    bd.add_argument("--n", type=int)
    bd.add_argument("--relaxed", action="store_true")
    bd.set_defaults(fn=cmd_bounds)

    au = sub.add_parser("audit", parents=[common])
    au.add_argument("claim", choices=["block-kernel", "pair-blocks", "transitive", "displacement"])
    au.add_argument("target")
    au.add_argument("--k", type=int, default=1)
    au.add_argument("--n0", type=int, default=25)
    au.add_argument("--block-size", type=int)
    au.set_defaults(fn=cmd_audit)

    wr = sub.add_parser("wreath", parents=[common])
    wr.add_argument("what", choices=["build", "witness-m", "witness-i", "hall", "goursat"])
    wr.add_argument("group", nargs="?")
    wr.add_argument("--base", default=None)
    wr.add_argument("--top")
    wr.add_argument("--n", type=int)
    wr.add_argument("--vectors")
    wr.set_defaults(fn=cmd_wreath)

    ac = sub.add_parser("acceptance", parents=[common])
    ac.add_argument("--only", help="comma-separated criterion ids, e.g. A1,A7")
    ac.set_defaults(fn=cmd_acceptance)
    return p


def _normalize(args) -> None:
    """Fill positional shapes that argparse cannot express directly."""
    if args.cmd == "decomp":
        if args.what == "m":
            if not args.partition:
                raise UsageError("usage", "decomp m needs --partition")
            args.perm = args.target
        elif args.what == "strong":
            if not (args.x and args.y):
                raise UsageError("usage", "decomp strong needs --x and --y")
            args.perm = args.target
        else:
            if not args.partition:
                raise UsageError("usage", "decomp cover needs --partition")
            args.setfile = args.target
    elif args.cmd == "classify" and args.what in ("an", "sn") and not args.setfile:
        raise UsageError("usage", f"classify {args.what} needs a set file")
    elif args.cmd == "bounds":
        pos = args.args
        if args.what in ("f", "f1", "g1", "phi", "psi", "omega"):
            if len(pos) != 2:
                raise UsageError("usage", f"bounds {args.what} needs two arguments")
            args.a, args.b = int(pos[0]), pos[1]
        elif args.what == "Psi":
            if len(pos) != 1:
                raise UsageError("usage", "bounds Psi needs k")
            args.k = int(pos[0])
        else:
            if not args.perm or args.k is None:
                raise UsageError("usage", f"bounds {args.what} needs --perm and --k")
    elif args.cmd == "wreath":
        if args.what in ("build", "witness-m") and not (args.base and args.top):
            raise UsageError("usage", f"wreath {args.what} needs --base and --top")
        if args.what == "witness-i" and not (args.base and args.n):
            raise UsageError("usage", "wreath witness-i needs --base and --n")
        if args.what == "hall" and not (args.base and args.vectors):
            raise UsageError("usage", "wreath hall needs --base and --vectors")
        if args.what == "goursat" and not args.group:
            raise UsageError("usage", "wreath goursat needs a group file")


def run(argv=None) -> int:
    parser = build_parser()
    out_path = None
    try:
        args = parser.parse_args(argv)
        out_path = args.output
        if not getattr(args, "fn", None):
            raise UsageError("usage", "missing command")
        if args.cmd in ("irr",):
            args.workers = max(1, args.workers)
        _normalize(args)
        report, code = args.fn(args)
    except UsageError as e:
        report, code = {"error": e.code, "detail": e.detail}, EXIT_USAGE
    except (ValueError, KeyError, ArithmeticError) as e:
        report, code = {"error": type(e).__name__.lower(), "detail": str(e)}, EXIT_USAGE
    text = json.dumps(report, sort_keys=True, default=str)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
