"""Command line front end: ``spectra <verb> ...``.

Exit codes: 0 on success, 1 when a property is false under ``--assert`` or a
verification suite reports failures, 2 on bad input.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import io
from .errors import SpectraError
from .examples import NAMES, example
from .graph import DEFAULT_CAP as GRAPH_CAP
from .graph import maximal_tails
from .order import DEFAULT_CAP as ORDER_CAP
from .order import PROPERTIES, apply_A_finite, apply_R_finite, check_property_finite, order_iso
from .rayposet import DEFAULT_DEPTH, apply_A, apply_AC, apply_R, check_property, structural_iso, truncate
from .spectrum import build_EP, enumerate_primes, spec_poset
from .verify import SUITES, verify

KINDS = ("poset", "rayposet", "graph")


class _Fail(Exception):
    """Raised to finish with exit code 1 after output has been written."""


def _load(kind: str, path: str):
    obj = io.load_file(path)
    if kind == "poset":
        return io.poset_from_json(obj)
    if kind == "rayposet":
        return io.rayposet_from_json(obj)
    return io.graph_from_json(obj)


def _to_json(kind: str, x):
    return {"poset": io.poset_to_json, "rayposet": io.rayposet_to_json, "graph": io.graph_to_json}[kind](x)


def _to_dot(kind: str, x) -> str:
    return {"poset": io.poset_to_dot, "rayposet": io.rayposet_to_dot, "graph": io.graph_to_dot}[kind](x)


def _props(spec: Optional[str]) -> list:
    if not spec:
        return list(PROPERTIES)
    lookup = {p.lower(): p for p in PROPERTIES}
    out = []
    for name in spec.split(","):
        name = name.strip()
        if name.lower() not in lookup:
            raise SpectraError(f"unknown property {name!r}; known: {', '.join(PROPERTIES)}")
        out.append(lookup[name.lower()])
    return out


def _ideal_label(I) -> str:
    G = I.graph
    return "<" + ",".join(sorted(I.H, key=lambda v: G.index[v])) + ">"


def _emit(out, args, text_json=None, dot: Optional[str] = None) -> None:
    if args.format == "dot":
        if dot is None:
            raise SpectraError("this command has no DOT output")
        out.write(dot)
    else:
        out.write(io.dumps(text_json))


# --- verbs -------------------------------------------------------------------------

def cmd_check(args, out):
    X = _load(args.kind, args.file)
    results = {}
    for prop in _props(args.props):
        if args.kind == "poset":
            results[prop] = {"holds": check_property_finite(X, prop, args.cap or ORDER_CAP), "witness": None}
        elif args.kind == "rayposet":
            res = check_property(X, prop)
            results[prop] = {"holds": res.holds, "witness": res.witness}
        else:
            raise SpectraError("check applies to posets and ray posets")
    out.write(io.dumps(results))
    if args.assert_ and not all(r["holds"] for r in results.values()):
        raise _Fail


def cmd_apply(args, out):
    X = _load(args.kind, args.file)
    op = args.op
    if args.kind == "poset":
        cap = args.cap or ORDER_CAP
        Y = {"A": apply_A_finite, "AC": apply_A_finite, "R": apply_R_finite}[op](X, cap)
        Y = Y.relabel({y: y if isinstance(y, str) else "x[" + ",".join(map(str, y[1])) + "]" for y in Y.elements})
        _emit(out, args, io.poset_to_json(Y), io.poset_to_dot(Y))
        return
    if args.kind != "rayposet":
        raise SpectraError("apply works on posets and ray posets")
    if op == "A":
        ext = apply_A(X)
        Y, extra = ext.poset, {"added": ext.added}
    elif op == "AC":
        Y, extra = apply_AC(X), {}
    else:
        Y, removed = apply_R(X)
        extra = {"removed": sorted(removed, key=X.order.get)}
    _emit(out, args, {"result": io.rayposet_to_json(Y, closed=True), **extra}, io.rayposet_to_dot(Y))


def cmd_iso(args, out):
    A, B = _load(args.kind, args.file), _load(args.kind, args.other)
    if args.kind == "poset":
        m = order_iso(A, B)
        mapping = None if m is None else {str(k): v for k, v in m.as_dict().items()}
    elif args.kind == "rayposet":
        mapping = structural_iso(A, B)
    else:
        raise SpectraError("iso works on posets and ray posets")
    out.write(io.dumps({"isomorphic": mapping is not None, "mapping": mapping}))
    if args.assert_ and mapping is None:
        raise _Fail


def cmd_graph_tails(args, out):
    G = _load("graph", args.file)
    tails = [sorted(M, key=G.index.get) for M in maximal_tails(G, args.cap or GRAPH_CAP)]
    out.write(io.dumps({"maximal_tails": tails}))


def cmd_graph_primes(args, out):
    G = _load("graph", args.file)
    out.write(io.dumps({"primes": [io.prime_to_json(I) for I in enumerate_primes(G, args.cap or GRAPH_CAP)]}))


def cmd_spec(args, out):
    G = _load("graph", args.file)
    SP = spec_poset(G, args.cap or GRAPH_CAP)
    F = SP.as_finite.relabel({I: _ideal_label(I) for I in SP.primes})
    _emit(out, args, io.poset_to_json(F), io.poset_to_dot(F, "Spec"))


def cmd_to_graph(args, out):
    G = build_EP(_load("poset", args.file))
    _emit(out, args, io.graph_to_json(G), io.graph_to_dot(G))


def cmd_verify(args, out):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    failed = False
    for name in names:
        report = verify(name, args.count, args.seed)
        failed |= bool(report["failures"])
        out.write(io.dumps(report))
    if failed:
        raise _Fail


def cmd_example(args, out):
    ex = example(args.name)
    checks = ex.run_checks()
    if args.format == "dot":
        out.write(_to_dot(ex.kind, ex.obj))
    else:
        out.write(
            io.dumps(
                {
                    "name": ex.name,
                    "kind": ex.kind,
                    "object": _to_json(ex.kind, ex.obj),
                    "checks": [{"check": d, "holds": ok} for d, ok in checks],
                }
            )
        )
    if args.assert_ and not all(ok for _, ok in checks):
        raise _Fail


def cmd_export(args, out):
    X = _load(args.kind, args.file)
    if args.kind == "rayposet" and args.truncate:
        T = truncate(X, args.depth)
        T = T.relabel({x: str(x) for x in T.elements})
        _emit(out, args, io.poset_to_json(T), io.poset_to_dot(T))
        return
    _emit(out, args, _to_json(args.kind, X), _to_dot(args.kind, X))


# --- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="ray truncation depth (default 6)")
    common.add_argument("--cap", type=int, default=None, help="enumeration cap on carrier size")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--count", type=int, default=None, help="corpus size for verify")
    common.add_argument("--format", choices=("json", "dot"), default="json")
    common.add_argument("--assert", dest="assert_", action="store_true", help="exit 1 when a property is false")

    p = argparse.ArgumentParser(prog="spectra", description="Posets, ray posets, graphs and their prime spectra.")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("check", parents=[common], help="decide order properties")
    s.add_argument("kind", choices=("poset", "rayposet"))
    s.add_argument("file")
    s.add_argument("--props", help="comma separated, e.g. GLB,DC (default: all)")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("apply", parents=[common], help="apply A, AC or R")
    s.add_argument("op", choices=("A", "AC", "R"))
    s.add_argument("kind", choices=("poset", "rayposet"))
    s.add_argument("file")
    s.set_defaults(func=cmd_apply)

    s = sub.add_parser("iso", parents=[common], help="search for an isomorphism")
    s.add_argument("kind", choices=("poset", "rayposet"))
    s.add_argument("file")
    s.add_argument("other")
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("graph-tails", parents=[common], help="list maximal tails")
    s.add_argument("file")
    s.set_defaults(func=cmd_graph_tails)

    s = sub.add_parser("graph-primes", parents=[common], help="classify prime ideals")
    s.add_argument("file")
    s.set_defaults(func=cmd_graph_primes)

    s = sub.add_parser("spec", parents=[common], help="spectrum poset of a graded-regime graph")
    s.add_argument("file")
    s.set_defaults(func=cmd_spec)

    s = sub.add_parser("to-graph", parents=[common], help="build E_P from a poset")
    s.add_argument("file")
    s.set_defaults(func=cmd_to_graph)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=tuple(SUITES) + ("all",))
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("example", parents=[common], help="print a worked example")
    s.add_argument("name", choices=NAMES)
    s.set_defaults(func=cmd_example)

    s = sub.add_parser("export", parents=[common], help="re-emit an input as JSON or DOT")
    s.add_argument("kind", choices=KINDS)
    s.add_argument("file")
    s.add_argument("--truncate", action="store_true", help="ray posets: export the depth truncation")
    s.set_defaults(func=cmd_export)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except _Fail:
        return 1
    except SpectraError as exc:
        err.write(f"spectra: {type(exc).__name__}: {exc}\n")
        return 2
    return 0


def main(argv=None) -> int:
    sys.exit(run(argv))
