"""Worked examples with their expected facts as runnable checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import UnknownExample
from .graph import INF, MultiGraph, maximal_tails
from .order import validate_poset
from .rayposet import (
    LT,
    PBR,
    POINT,
    RAY,
    SYNC,
    RealizedElement,
    apply_A,
    apply_R,
    check_property,
    leq_realized,
    lt_realized,
    structural_iso,
    validate_rayposet,
)
from .spectrum import build_EP, intersect_primes, spec_poset


@dataclass
class Example:
    name: str
    obj: object
    kind: str  # "poset", "rayposet" or "graph"
    checks: list = field(default_factory=list)  # (description, zero-arg callable -> bool)

    def run_checks(self) -> list:
        return [(desc, bool(fn())) for desc, fn in self.checks]


def diamond():
    return validate_poset(["s", "q", "r", "p"], [("s", "q"), ("s", "r"), ("q", "p"), ("r", "p")])


def zero_and_ray():
    """{0} together with the chain 1 > 1/2 > 1/3 > ...  (ray S)."""
    return validate_rayposet([("0", POINT), ("S", RAY)], [("0", "S", PBR)])


def spec_grid():
    """Two incomparable descending chains with common glb 0."""
    return validate_rayposet([("0", POINT), ("M", RAY), ("N", RAY)], [("0", "M", PBR), ("0", "N", PBR)])


def dc_vs_strong_dc():
    """Chains r_1 > r_2 > ... and q_1 > q_2 > ... with r_i < q_i, glbs r < q."""
    return validate_rayposet(
        [("r", POINT), ("q", POINT), ("R", RAY), ("Q", RAY)],
        [("r", "q", LT), ("r", "R", PBR), ("q", "Q", PBR), ("R", "Q", SYNC)],
    )


def union_eg_trunc():
    """Two tops u1, u2 over the chain v3 -> v2 -> v1.

    u_i has single edges to v1 and v2 and infinitely many to v3, which stands
    in for the infinite fan of the untruncated graph and keeps u_i an
    infinite emitter.
    """
    mult = {("v3", "v2"): INF, ("v2", "v1"): INF}
    for u in ("u1", "u2"):
        mult[u, "v1"] = 1
        mult[u, "v2"] = 1
        mult[u, "v3"] = INF
    return MultiGraph(["u1", "u2", "v1", "v2", "v3"], mult)


UNION_EG_TAILS = [
    {"u1"},
    {"u2"},
    {"u1", "u2", "v3"},
    {"u1", "u2", "v2", "v3"},
    {"u1", "u2", "v1", "v2", "v3"},
]

EP_DIAMOND_EDGES = {("v_p", "v_q"), ("v_p", "v_r"), ("v_p", "v_s"), ("v_q", "v_s"), ("v_r", "v_s")}


def _ep_example() -> Example:
    G = build_EP(diamond())

    def edges_ok():
        return {(u, v) for u, v, _ in G.edges()} == EP_DIAMOND_EDGES and all(m == INF for _, _, m in G.edges())

    return Example("EPExample", G, "graph", [("five infinite edges of the diamond", edges_ok)])


def _ap_example() -> Example:
    P = zero_and_ray()

    def adds_one():
        ext = apply_A(P)
        (x,) = ext.added.values()
        Q = ext.poset
        return (
            len(Q.nodes) == len(P.nodes) + 1
            and lt_realized(Q, RealizedElement("0"), RealizedElement(x))
            and all(lt_realized(Q, RealizedElement(x), RealizedElement("S", n)) for n in range(6))
            and not leq_realized(Q, RealizedElement("S", 5), RealizedElement(x))
        )

    return Example("APExample", P, "rayposet", [("apply_A adds exactly one point 0 < x < S", adds_one)])


def _rp_example() -> Example:
    P = zero_and_ray()

    def removes_zero():
        return apply_R(P)[1] == {"0"}

    def ar_iso():
        return structural_iso(apply_A(apply_R(P)[0]).poset, P) is not None

    return Example(
        "RPExample",
        P,
        "rayposet",
        [("apply_R removes exactly 0", removes_zero), ("A(R(P)) is isomorphic to P", ar_iso)],
    )


def _spec_grid() -> Example:
    P = spec_grid()

    def dc_witness():
        res = check_property(P, "DC")
        return not res.holds and res.witness == ("M", RealizedElement("N", 0))

    def not_ar():
        return structural_iso(P, apply_A(apply_R(P)[0]).poset) is None

    return Example(
        "SpecGrid",
        P,
        "rayposet",
        [
            ("GLB holds", lambda: check_property(P, "GLB").holds),
            ("DC fails with witness (M, N[0])", dc_witness),
            ("P is not A(R(P))", not_ar),
        ],
    )


def _dc_vs_strong() -> Example:
    P = dc_vs_strong_dc()

    def strong_witness():
        res = check_property(P, "StrongDC")
        return not res.holds and res.witness == ("R", RealizedElement("q"))

    return Example(
        "DCvsDCplus",
        P,
        "rayposet",
        [("DC holds", lambda: check_property(P, "DC").holds), ("StrongDC fails at (R, q)", strong_witness)],
    )


def _union_eg() -> Example:
    G = union_eg_trunc()

    def tails_ok():
        return sorted(map(sorted, maximal_tails(G))) == sorted(map(sorted, UNION_EG_TAILS))

    def union_not_prime():
        SP = spec_poset(G)
        top = [I for I in SP.primes if not any(I.H < J.H for J in SP.primes)]
        res = intersect_primes(top, SP)
        return (
            len(top) == 2
            and res.ideal.H == {"v1", "v2", "v3"}
            and not res.is_prime
            and res.witness == ("u1", "u2")
        )

    return Example(
        "UnionEgTrunc",
        G,
        "graph",
        [("exactly five maximal tails", tails_ok), ("two maximal primes intersect to a non-prime", union_not_prime)],
    )


_BUILDERS: dict = {
    "EPExample": _ep_example,
    "APExample": _ap_example,
    "RPExample": _rp_example,
    "SpecGrid": _spec_grid,
    "DCvsDCplus": _dc_vs_strong,
    "UnionEgTrunc": _union_eg,
}

NAMES = tuple(_BUILDERS)


def example(name: str) -> Example:
    try:
        build: Callable = _BUILDERS[name]
    except KeyError:
        raise UnknownExample(f"unknown example {name!r}; known: {', '.join(NAMES)}") from None
    return build()


def pinned_rayposets() -> list:
    """(name, ray poset) for every ray-poset example."""
    return [(n, example(n).obj) for n in NAMES if example(n).kind == "rayposet"]

