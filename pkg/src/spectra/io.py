"""JSON reading/writing for posets, ray posets and graphs, plus DOT export.

Multiplicity ∞ is written as the string ``"inf"`` in both JSON and DOT.
"""
from __future__ import annotations

import json
from typing import Any

from .errors import SpectraError
from .graph import INF, MultiGraph
from .order import FinitePoset, validate_poset
from .rayposet import RayPoset, RealizedElement, validate_rayposet
from .spectrum import BreakingOmitted, CycleFamily, Graded


def _need(obj: Any, key: str, kind: type):
    if not isinstance(obj, dict) or key not in obj:
        raise SpectraError(f"missing key {key!r}")
    val = obj[key]
    if not isinstance(val, kind):
        raise SpectraError(f"{key!r} must be a {kind.__name__}")
    return val


# --- finite posets ---------------------------------------------------------------

def poset_from_json(obj) -> FinitePoset:
    elements = _need(obj, "elements", list)
    pairs = []
    for pair in obj.get("le", []):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise SpectraError(f"bad le entry {pair!r}")
        pairs.append(tuple(pair))
    return validate_poset(elements, pairs)


def poset_to_json(P: FinitePoset) -> dict:
    covers = sorted(P.covers, key=lambda c: (P.idx(c[0]), P.idx(c[1])))
    return {"elements": list(P.elements), "le": [[a, b] for a, b in covers]}


def _q(x) -> str:
    return json.dumps(str(x))


def poset_to_dot(P: FinitePoset, name: str = "P") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    lines += [f"  {_q(x)};" for x in P.elements]
    for a, b in sorted(P.covers, key=lambda c: (P.idx(c[0]), P.idx(c[1]))):
        lines.append(f"  {_q(a)} -> {_q(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- ray posets ------------------------------------------------------------------

def rayposet_from_json(obj) -> RayPoset:
    nodes = []
    for n in _need(obj, "nodes", list):
        nodes.append((_need(n, "id", str), _need(n, "kind", str)))
    rels = []
    for r in obj.get("relations", []):
        rels.append((_need(r, "lo", str), _need(r, "hi", str), _need(r, "kind", str)))
    try:
        return validate_rayposet(nodes, rels)
    except ValueError as exc:
        raise SpectraError(str(exc)) from exc


def rayposet_to_json(P: RayPoset, closed: bool = False) -> dict:
    """Declared relations by default; ``closed=True`` writes the full closure."""
    rels = P.relations if closed else P.declared
    return {
        "nodes": [{"id": label, "kind": k.value} for label, k in P.nodes],
        "relations": [{"lo": a, "hi": b, "kind": k.value} for a, b, k in rels],
    }


def rayposet_to_dot(P: RayPoset, name: str = "P") -> str:
    """Points are plain nodes; each ray is a box holding ``r[0] <- r[1] <- ...``."""
    lines = [f"digraph {name} {{", "  rankdir=BT;"]

    def rep(label):
        return _q(label if P.kind[label].value == "point" else f"{label}[0]")

    for label, k in P.nodes:
        if k.value == "point":
            lines.append(f"  {_q(label)};")
            continue
        a, b, c = f"{label}[0]", f"{label}[1]", f"{label}[...]"
        lines.append(f"  subgraph {_q('cluster_' + label)} {{")
        lines.append(f"    label={_q(label)};")
        lines.append(f"    {_q(a)}; {_q(b)}; {_q(c)} [label=\"...\"];")
        lines.append(f"    {_q(c)} -> {_q(b)} [style=dotted];")
        lines.append(f"    {_q(b)} -> {_q(a)};")
        lines.append("  }")
    for lo, hi, k in P.relations:
        lines.append(f"  {rep(lo)} -> {rep(hi)} [label={_q(k.value)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- graphs ----------------------------------------------------------------------

def _mult_from_json(m):
    if m == "inf":
        return INF
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise SpectraError(f"multiplicity must be a positive integer or \"inf\", got {m!r}")
    return m


def _mult_to_json(m):
    return "inf" if m == INF else m


def graph_from_json(obj) -> MultiGraph:
    vertices = _need(obj, "vertices", list)
    mult: dict = {}
    for e in obj.get("edges", []):
        key = (_need(e, "src", str), _need(e, "dst", str))
        m = _mult_from_json(e.get("mult", 1))
        mult[key] = INF if INF in (m, mult.get(key, 0)) else mult.get(key, 0) + m
    return MultiGraph(vertices, mult)


def graph_to_json(G: MultiGraph) -> dict:
    return {
        "vertices": list(G.vertices),
        "edges": [{"src": u, "dst": v, "mult": _mult_to_json(m)} for u, v, m in G.edges()],
    }


def graph_to_dot(G: MultiGraph, name: str = "E") -> str:
    lines = [f"digraph {name} {{"]
    lines += [f"  {_q(v)};" for v in G.vertices]
    for u, v, m in G.edges():
        attr = "" if m == 1 else f" [label={_q(_mult_to_json(m))}]"
        lines.append(f"  {_q(u)} -> {_q(v)}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- misc ------------------------------------------------------------------------

def prime_to_json(I) -> dict:
    G = I.graph
    key = (lambda v: G.index[v]) if G is not None else str
    out = {"variant": I.variant, "H": sorted(I.H, key=key)}
    if isinstance(I, BreakingOmitted):
        out["omitted"] = I.omitted
    elif isinstance(I, CycleFamily):
        out["cycle"] = list(I.cycle)
        out["parameter"] = I.parameter
    return out


def prime_from_json(obj, G: MultiGraph | None = None):
    H = frozenset(_need(obj, "H", list))
    variant = _need(obj, "variant", str)
    if variant == "Graded":
        return Graded(H, G)
    if variant == "BreakingOmitted":
        return BreakingOmitted(H, obj["omitted"], G)
    if variant == "CycleFamily":
        return CycleFamily(H, tuple(obj["cycle"]), obj.get("parameter", CycleFamily.parameter), G)
    raise SpectraError(f"unknown prime variant {variant!r}")


def jsonable(x):
    """Best-effort conversion of library values (witnesses etc.) to JSON data."""
    if isinstance(x, RealizedElement):
        return str(x)
    if isinstance(x, (Graded, BreakingOmitted, CycleFamily)):
        return prime_to_json(x)
    if isinstance(x, float) and x == INF:
        return "inf"
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (frozenset, set)):
        return sorted((jsonable(v) for v in x), key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "ray") and type(x).__name__ == "RayTail":
        return {"ray_tail": x.ray}
    if hasattr(x, "value") and hasattr(x, "name"):
        return x.value
    return x


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=False) + "\n"


def load_file(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SpectraError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise SpectraError(f"{path} is not valid JSON: {exc}") from exc
