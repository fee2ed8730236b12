"""Prime ideals of graph algebras, as vertex combinatorics.

Primes come in three shapes, each pinned down by a hereditary saturated set
``H``:

* ``Graded(H)``: the complement of ``H`` is nonempty and downward directed;
* ``BreakingOmitted(H, u)``: ``u`` is a breaking vertex of ``H`` and the
  complement of ``H`` is exactly the set of vertices above ``u``;
* ``CycleFamily(H, c)``: ``c`` is a cycle without exits to other cycles,
  the complement of ``H`` is the set above its source, and the prime depends
  on an irreducible Laurent polynomial which is kept symbolic.

On acyclic graphs with no breaking vertices (the graded regime) only the
first kind occurs, primes correspond to maximal tails through complement,
and ideal inclusion is inclusion of the sets ``H``.  The spectrum is then a
finite poset and :func:`spec_poset` builds it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .errors import MixedGraphs, NoSuchPrime, NotGradedRegime, SpectraError, UnknownPrime
from .graph import (
    DEFAULT_CAP,
    INF,
    MultiGraph,
    breaking_mask,
    cycles,
    hs_masks,
    is_acyclic,
    mt3_witness_mask,
    reaches,
    tail_masks,
    wk_cycles,
)
from .order import FinitePoset, bits, glb, is_directed_mask, order_iso, popcount, validate_poset
from .order import OrderMap, removed_by_R_finite

LAURENT_PARAMETER = "irreducible f in K[x, x^-1]"
R_CHECK_LIMIT = 14  # above this size the finite R(P) = P check is skipped as vacuous


@dataclass(frozen=True)
class Graded:
    H: frozenset
    graph: Optional[MultiGraph] = field(default=None, compare=False, repr=False)

    variant = "Graded"

    def contains_vertex(self, v) -> bool:
        return v in self.H


@dataclass(frozen=True)
class BreakingOmitted:
    H: frozenset
    omitted: object
    graph: Optional[MultiGraph] = field(default=None, compare=False, repr=False)

    variant = "BreakingOmitted"

    def contains_vertex(self, v) -> bool:
        return v in self.H


@dataclass(frozen=True)
class CycleFamily:
    H: frozenset
    cycle: tuple
    parameter: str = LAURENT_PARAMETER
    graph: Optional[MultiGraph] = field(default=None, compare=False, repr=False)

    variant = "CycleFamily"

    def contains_vertex(self, v) -> bool:
        return v in self.H


PrimeDescriptor = Union[Graded, BreakingOmitted, CycleFamily]


class _WholeRing:
    """Intersection of the empty family of ideals."""

    def __repr__(self):
        return "WholeRing"


WholeRing = _WholeRing()


# --- E_P ---------------------------------------------------------------------

def ep_vertex(p) -> str:
    return f"v_{p}"


def build_EP(P: FinitePoset) -> MultiGraph:
    """One vertex ``v_p`` per element and infinitely many edges v_p -> v_q whenever p > q."""
    vs = [ep_vertex(p) for p in P.elements]
    mult = {(ep_vertex(p), ep_vertex(q)): INF for p in P.elements for q in P.elements if P.lt(q, p)}
    G = MultiGraph(vs, mult)
    assert is_acyclic(G)
    assert all(not G.is_regular(v) for v in vs)
    for p in P.elements:
        for q in P.elements:
            assert reaches(G, ep_vertex(p), ep_vertex(q)) == P.leq(q, p)
    return G


def check_EP_postconditions(P: FinitePoset, G: MultiGraph, cap: int = DEFAULT_CAP) -> Optional[str]:
    """Return a description of the first failed postcondition, or None."""
    if not is_acyclic(G):
        return "not acyclic"
    for v in G.vertices:
        if G.is_regular(v):
            return f"{v} is regular"
    for p in P.elements:
        for q in P.elements:
            if reaches(G, ep_vertex(p), ep_vertex(q)) != P.leq(q, p):
                return f"reachability of {p},{q} disagrees with the order"
    for H in hs_masks(G, cap):
        if breaking_mask(G, H):
            return f"breaking vertices for H={sorted(G.labels(H))}"
    return None


# --- classification -------------------------------------------------------------

def enumerate_primes(G: MultiGraph, cap: int = DEFAULT_CAP) -> list:
    """Every prime descriptor of G.  Ordered by H (bitmask order), then Graded,
    BreakingOmitted, CycleFamily."""
    wk = wk_cycles(G, cap)
    out = []
    for H in hs_masks(G, cap):
        comp = G.full & ~H
        Hs = G.labels(H)
        if comp and mt3_witness_mask(G, comp) is None:
            out.append(Graded(Hs, G))
        for i in bits(breaking_mask(G, H)):
            if G.reached_by[i] == comp:
                out.append(BreakingOmitted(Hs, G.vertices[i], G))
        for c in wk:
            if G.reached_by[G.idx(c.source)] == comp:
                out.append(CycleFamily(Hs, c.vertices, LAURENT_PARAMETER, G))
    return out


def graded_regime_witness(G: MultiGraph, cap: int = DEFAULT_CAP):
    """None in the graded regime, otherwise a cycle or an (H, breaking vertices) pair."""
    cs = cycles(G, cap)
    if cs:
        return cs[0].vertices
    for H in hs_masks(G, cap):
        B = breaking_mask(G, H)
        if B:
            return G.labels(H), G.labels(B)
    return None


def in_graded_regime(G: MultiGraph, cap: int = DEFAULT_CAP) -> bool:
    return graded_regime_witness(G, cap) is None


def _order_key(G: MultiGraph, H: frozenset):
    m = G.mask(H)
    return popcount(m), m


class SpecPoset:
    """Graded primes of a graph in the graded regime, ordered by inclusion of H."""

    def __init__(self, graph: MultiGraph, primes: list):
        self.graph = graph
        self.primes = tuple(primes)
        pairs = [(a, b) for a in self.primes for b in self.primes if a.H <= b.H]
        self.as_finite = validate_poset(self.primes, pairs)

    def __len__(self):
        return len(self.primes)

    def __contains__(self, I):
        return I in self.primes

    def prime(self, H) -> Graded:
        I = Graded(frozenset(H), self.graph)
        if I not in self.primes:
            raise UnknownPrime(f"H={sorted(map(str, H))} is not a prime of this graph")
        return I

    def leq(self, I, J) -> bool:
        return I.H <= J.H


def spec_poset(G: MultiGraph, cap: int = DEFAULT_CAP) -> SpecPoset:
    w = graded_regime_witness(G, cap)
    if w is not None:
        raise NotGradedRegime("graph is outside the graded regime", w)
    primes = [Graded(G.labels(G.full & ~M), G) for M in tail_masks(G, cap)]
    primes.sort(key=lambda I: _order_key(G, I.H))
    return SpecPoset(G, primes)


def ep_embedding(P: FinitePoset, SP: SpecPoset) -> OrderMap:
    """p -> the prime whose complement is the set of vertices above v_p."""
    G = SP.graph
    f = {}
    for p in P.elements:
        H = G.labels(G.full & ~G.reached_by[G.idx(ep_vertex(p))])
        f[p] = SP.prime(H)
    return OrderMap.from_dict(P, SP.as_finite, f)


# --- intersections --------------------------------------------------------------

@dataclass(frozen=True)
class Intersection:
    ideal: Graded
    is_prime: bool
    witness: Optional[tuple] = None


def _same_graph(ideals) -> MultiGraph:
    graphs = {id(I.graph): I.graph for I in ideals}
    if len(graphs) != 1:
        raise MixedGraphs("ideals come from different graphs")
    (G,) = graphs.values()
    if G is None:
        raise SpectraError("ideal carries no graph")
    return G


def intersect_H(ideals: Iterable):
    """H-intersection of a family of ideals; the empty family gives WholeRing."""
    ideals = list(ideals)
    if not ideals:
        return WholeRing
    H = ideals[0].H
    for I in ideals[1:]:
        H = H & I.H
    return H


def intersect_primes(S: Iterable, SP: Optional[SpecPoset] = None) -> Intersection:
    """Intersect graded primes.  The result is prime iff the complement of the
    intersected H is downward directed; for a directed family it must be, and it
    must be the glb in the spectrum."""
    S = list(S)
    if not S:
        raise SpectraError("cannot intersect an empty family")
    G = _same_graph(S)
    S = list(dict.fromkeys(S))
    H = intersect_H(S)
    comp = G.full & ~G.mask(H)
    w = mt3_witness_mask(G, comp) if comp else None
    prime = comp != 0 and w is None
    out = Intersection(Graded(H, G), prime, None if w is None else (G.vertices[w[0]], G.vertices[w[1]]))
    if SP is None and in_graded_regime(G):
        SP = spec_poset(G)
    if SP is not None:
        F = SP.as_finite
        if is_directed_mask(F, F.mask(S)):
            assert prime, "directed family of primes with non-prime intersection"
            assert glb(F, S) == out.ideal, "intersection is not the glb"
    return out


def not_locally_closed(SP: SpecPoset, I: Graded) -> bool:
    """True iff I is the intersection of the primes strictly containing it."""
    if I not in SP:
        raise UnknownPrime(f"{I!r} is not a prime of this spectrum")
    bigger = [J for J in SP.primes if I.H < J.H]
    inter = intersect_H(bigger)
    if inter is WholeRing:
        return False
    return inter == I.H


def _R_contains(SP: SpecPoset, I) -> bool:
    F = SP.as_finite
    if len(F) > R_CHECK_LIMIT:
        return True  # finite posets have no directed set without a least element
    return not removed_by_R_finite(F) >> F.idx(I) & 1


def max_prime_avoiding(SP: SpecPoset, v, above: Optional[Graded] = None) -> Graded:
    """A prime maximal among those containing ``above`` but not the vertex ``v``."""
    SP.graph.idx(v)
    if above is not None:
        if above not in SP:
            raise UnknownPrime(f"{above!r} is not a prime of this spectrum")
        if v in above.H:
            raise NoSuchPrime(f"{v} already lies in the given prime")
    base = above.H if above is not None else frozenset()
    cands = [J for J in SP.primes if base <= J.H and v not in J.H]
    if not cands:
        raise NoSuchPrime(f"every prime contains {v}")
    best = [J for J in cands if not any(J.H < K.H for K in cands)]
    I = best[0]
    assert _R_contains(SP, I)
    return I


def check_Mu_prop(G: MultiGraph, cap: int = DEFAULT_CAP) -> dict:
    """For every prime whose complement is the set above some u: u is not regular or
    lies on a cycle, and the prime survives R of the spectrum."""
    SP = spec_poset(G, cap)
    on_cycle = {v for c in cycles(G, cap) for v in c.vertices}
    checked, violations = 0, []
    for I in SP.primes:
        comp = G.full & ~G.mask(I.H)
        for i in bits(comp):
            if G.reached_by[i] != comp:
                continue
            u = G.vertices[i]
            checked += 1
            if G.is_regular(u) and u not in on_cycle:
                violations.append({"prime": sorted(map(str, I.H)), "vertex": u, "reason": "regular, no cycle"})
            elif not _R_contains(SP, I):
                violations.append({"prime": sorted(map(str, I.H)), "vertex": u, "reason": "removed by R"})
    return {"holds": not violations, "checked": checked, "violations": violations}


def spec_iso(P: FinitePoset, cap: int = DEFAULT_CAP):
    """Order isomorphism from the spectrum of E_P back onto P, or None."""
    return order_iso(spec_poset(build_EP(P), cap).as_finite, P)
