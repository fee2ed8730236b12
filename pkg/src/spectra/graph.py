"""Finite directed graphs with edge multiplicities in N ∪ {∞}.

Only edge counts matter for everything computed here, so a graph is a vertex
list plus a multiplicity table.  Vertex sets are bitmasks over the vertex
order; the public functions return frozensets of labels.

Saturation only ever constrains regular vertices (finite, nonzero
out-degree).  Sinks and infinite emitters are never forced into a saturated
set.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional

from .errors import CapExceeded, NotATail, NotHereditarySaturated, SpectraError, UnknownVertex
from .order import bits

INF = math.inf
DEFAULT_CAP = 20


class MultiGraph:
    def __init__(self, vertices: Iterable, mult: Optional[dict] = None):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise SpectraError("vertex labels must be unique")
        self.index = {v: i for i, v in enumerate(self.vertices)}
        self.mult = {}
        for (u, v), m in (mult or {}).items():
            self.idx(u), self.idx(v)
            if m != INF and (not isinstance(m, int) or m < 0):
                raise SpectraError(f"bad multiplicity {m!r} on {u}->{v}")
            if m:
                self.mult[u, v] = m
        n = len(self.vertices)
        self.full = (1 << n) - 1
        self.succ = [0] * n
        for u, v in self.mult:
            self.succ[self.index[u]] |= 1 << self.index[v]

    def idx(self, v) -> int:
        try:
            return self.index[v]
        except KeyError:
            raise UnknownVertex(f"{v!r} is not a vertex") from None

    def m(self, u, v):
        return self.mult.get((u, v), 0)

    def out_degree(self, v):
        return sum(m for (a, _), m in self.mult.items() if a == v)

    def is_sink(self, v) -> bool:
        return self.out_degree(v) == 0

    def is_regular(self, v) -> bool:
        d = self.out_degree(v)
        return 0 < d < INF

    def is_infinite_emitter(self, v) -> bool:
        return self.out_degree(v) == INF

    @cached_property
    def regular_mask(self) -> int:
        return sum(1 << i for i, v in enumerate(self.vertices) if self.is_regular(v))

    @cached_property
    def reach(self) -> list:
        """reach[i]: bitmask of vertices reachable from i (including i)."""
        n = len(self.vertices)
        out = [(1 << i) | self.succ[i] for i in range(n)]
        for k in range(n):
            bk = 1 << k
            for i in range(n):
                if out[i] & bk:
                    out[i] |= out[k]
        return out

    @cached_property
    def reached_by(self) -> list:
        n = len(self.vertices)
        out = [0] * n
        for i in range(n):
            for j in bits(self.reach[i]):
                out[j] |= 1 << i
        return out

    def mask(self, vs: Iterable) -> int:
        m = 0
        for v in vs:
            m |= 1 << self.idx(v)
        return m

    def labels(self, mask: int) -> frozenset:
        return frozenset(self.vertices[i] for i in bits(mask))

    def edges(self) -> list:
        """(src, dst, mult) in vertex order."""
        return sorted(
            ((u, v, m) for (u, v), m in self.mult.items()), key=lambda e: (self.index[e[0]], self.index[e[1]])
        )

    def __eq__(self, other):
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.mult == other.mult

    def __hash__(self):
        return hash((self.vertices, frozenset(self.mult.items())))

    def __repr__(self):
        es = ", ".join(f"{u}->{v}" + ("" if m == 1 else f"x{m}") for u, v, m in self.edges())
        return f"MultiGraph({list(self.vertices)}, [{es}])"


# --- reachability ---------------------------------------------------------------

def reaches(G: MultiGraph, u, v) -> bool:
    """u >= v: a path (possibly empty) runs from u to v."""
    return bool(G.reach[G.idx(u)] >> G.idx(v) & 1)


def big_M_mask(G: MultiGraph, i: int) -> int:
    return G.reached_by[i]


def big_M(G: MultiGraph, v) -> frozenset:
    """All w with w >= v."""
    return G.labels(G.reached_by[G.idx(v)])


def is_acyclic(G: MultiGraph) -> bool:
    return not any(
        G.reach[j] >> i & 1 for i in range(len(G.vertices)) for j in bits(G.succ[i])
    )


# --- hereditary and saturated sets --------------------------------------------------

def is_hereditary_mask(G: MultiGraph, H: int) -> bool:
    return all(G.succ[i] & ~H == 0 for i in bits(H))


def is_saturated_mask(G: MultiGraph, H: int) -> bool:
    for i in bits(G.regular_mask & ~H):
        if G.succ[i] & ~H == 0:
            return False
    return True


def hereditary_closure_mask(G: MultiGraph, H: int) -> int:
    out = H
    for i in bits(H):
        out |= G.reach[i]
    return out


def saturated_closure_mask(G: MultiGraph, H: int) -> int:
    while True:
        grow = 0
        for i in bits(G.regular_mask & ~H):
            if G.succ[i] & ~H == 0:
                grow |= 1 << i
        if not grow:
            return H
        H |= grow


def hereditary_closure(G: MultiGraph, vs) -> frozenset:
    return G.labels(hereditary_closure_mask(G, G.mask(vs)))


def saturated_closure(G: MultiGraph, vs) -> frozenset:
    return G.labels(saturated_closure_mask(G, G.mask(vs)))


def is_hereditary(G: MultiGraph, vs) -> bool:
    return is_hereditary_mask(G, G.mask(vs))


def is_saturated(G: MultiGraph, vs) -> bool:
    return is_saturated_mask(G, G.mask(vs))


def _check_cap(G: MultiGraph, cap: int) -> None:
    if len(G.vertices) > cap:
        raise CapExceeded(f"{len(G.vertices)} vertices exceeds cap {cap}")


def hs_masks(G: MultiGraph, cap: int = DEFAULT_CAP) -> Iterator[int]:
    _check_cap(G, cap)
    for H in range(G.full + 1):
        if is_hereditary_mask(G, H) and is_saturated_mask(G, H):
            yield H


def hereditary_saturated_sets(G: MultiGraph, cap: int = DEFAULT_CAP) -> Iterator[frozenset]:
    """All hereditary saturated sets, in increasing bitmask order."""
    for H in hs_masks(G, cap):
        yield G.labels(H)


# --- maximal tails --------------------------------------------------------------

def mt1_mask(G: MultiGraph, M: int) -> bool:
    return all(G.reached_by[i] & ~M == 0 for i in bits(M))


def mt2_mask(G: MultiGraph, M: int) -> bool:
    return all(G.succ[i] & M for i in bits(M & G.regular_mask))


def mt3_witness_mask(G: MultiGraph, M: int) -> Optional[tuple]:
    """First pair (i, j) in M with no common lower vertex inside M, or None."""
    idx = list(bits(M))
    for a, i in enumerate(idx):
        for j in idx[a + 1:]:
            if G.reach[i] & G.reach[j] & M == 0:
                return i, j
    return None


def is_maximal_tail_mask(G: MultiGraph, M: int) -> bool:
    return M != 0 and mt1_mask(G, M) and mt2_mask(G, M) and mt3_witness_mask(G, M) is None


def tail_masks(G: MultiGraph, cap: int = DEFAULT_CAP) -> Iterator[int]:
    _check_cap(G, cap)
    for M in range(1, G.full + 1):
        if not (mt1_mask(G, M) and mt2_mask(G, M)):
            continue
        comp = G.full & ~M
        assert is_hereditary_mask(G, comp) and is_saturated_mask(G, comp)
        if mt3_witness_mask(G, M) is None:
            yield M


def maximal_tails(G: MultiGraph, cap: int = DEFAULT_CAP) -> Iterator[frozenset]:
    """Nonempty vertex sets satisfying MT1, MT2 and MT3, in increasing bitmask order."""
    for M in tail_masks(G, cap):
        yield G.labels(M)


def is_maximal_tail(G: MultiGraph, vs) -> bool:
    return is_maximal_tail_mask(G, G.mask(vs))


# --- breaking vertices ------------------------------------------------------------

def breaking_mask(G: MultiGraph, H: int) -> int:
    out = 0
    for i in bits(G.full & ~H):
        v = G.vertices[i]
        if not G.is_infinite_emitter(v):
            continue
        into = sum(m for (a, b), m in G.mult.items() if a == v and not H >> G.index[b] & 1)
        if 0 < into < INF:
            out |= 1 << i
    return out


def breaking_vertices(G: MultiGraph, H) -> frozenset:
    Hm = G.mask(H)
    if not (is_hereditary_mask(G, Hm) and is_saturated_mask(G, Hm)):
        raise NotHereditarySaturated(f"{sorted(map(str, H))} is not hereditary and saturated")
    return G.labels(breaking_mask(G, Hm))


# --- cycles ---------------------------------------------------------------------

@dataclass(frozen=True)
class Cycle:
    """A closed path through distinct vertices, rotated to start at its least vertex.

    ``copy`` tells apart parallel cycles: a cycle whose edges have
    multiplicities m_1..m_k comes in m_1*...*m_k distinct edge-sets (∞ if any
    m_i is).  Only one representative per vertex path is listed.
    """

    vertices: tuple
    count: object = field(default=1, compare=False)

    @property
    def source(self):
        return self.vertices[0]


def cycles(G: MultiGraph, cap: int = DEFAULT_CAP) -> list:
    """Vertex-simple cycles, one per vertex path up to rotation, in a deterministic order."""
    _check_cap(G, cap)
    n = len(G.vertices)
    out = []
    for start in range(n):
        # only cycles whose least vertex is ``start``
        stack = [(start, [start], 1 << start)]
        while stack:
            cur, path, seen = stack.pop()
            for j in sorted(bits(G.succ[cur]), reverse=True):
                if j == start:
                    vs = tuple(G.vertices[i] for i in path)
                    count = 1
                    for a, b in zip(vs, vs[1:] + vs[:1]):
                        count *= G.m(a, b)
                    out.append(Cycle(vs, count))
                elif j > start and not seen >> j & 1:
                    stack.append((j, path + [j], seen | 1 << j))
    out.sort(key=lambda c: ([G.index[v] for v in c.vertices]))
    return out


def wk_cycles(G: MultiGraph, cap: int = DEFAULT_CAP) -> list:
    """Cycles none of whose vertices is the source of a different cycle.

    A cycle with a parallel edge is not WK: the parallel copy is a different
    cycle through the same vertices.
    """
    cs = cycles(G, cap)
    out = []
    for c in cs:
        if c.count != 1:
            continue
        support = set(c.vertices)
        if any(d != c and support & set(d.vertices) for d in cs):
            continue
        out.append(c)
    return out


def satisfies_condition_K(G: MultiGraph, cap: int = DEFAULT_CAP) -> bool:
    """Every vertex on a cycle sources at least two distinct cycles."""
    cs = cycles(G, cap)
    for c in cs:
        if c.count != 1:
            continue
        for v in c.vertices:
            if not any(d != c and v in d.vertices for d in cs):
                return False
    return True


# --- unions of tails -----------------------------------------------------------

@dataclass
class TailUnionReport:
    union: frozenset
    mt1: bool
    mt2: bool
    mt3: bool
    cohabit: bool
    mt3_witness: Optional[tuple] = None
    cohabit_witness: Optional[tuple] = None

    @property
    def consistent(self) -> bool:
        return self.mt1 and self.mt2 and self.mt3 == self.cohabit


def tail_union_check(G: MultiGraph, tails: Iterable) -> TailUnionReport:
    """Check a union of maximal tails: MT1 and MT2 always, MT3 iff every two
    members of the union lie in a common input tail."""
    masks = []
    for t in tails:
        M = G.mask(t)
        if not is_maximal_tail_mask(G, M):
            raise NotATail(f"{sorted(map(str, t))} is not a maximal tail")
        masks.append(M)
    U = 0
    for M in masks:
        U |= M
    w3 = mt3_witness_mask(G, U)
    wc = None
    idx = list(bits(U))
    for a, i in enumerate(idx):
        for j in idx[a + 1:]:
            if not any(M >> i & 1 and M >> j & 1 for M in masks):
                wc = (G.vertices[i], G.vertices[j])
                break
        if wc:
            break
    return TailUnionReport(
        union=G.labels(U),
        mt1=mt1_mask(G, U),
        mt2=mt2_mask(G, U),
        mt3=w3 is None,
        cohabit=wc is None,
        mt3_witness=None if w3 is None else (G.vertices[w3[0]], G.vertices[w3[1]]),
        cohabit_witness=wc,
    )


# --- random graphs --------------------------------------------------------------

def random_graph(rng: random.Random, max_vertices: int = 7, density: Optional[float] = None, acyclic: bool = False) -> MultiGraph:
    n = max(rng.randint(1, max_vertices), rng.randint(1, max_vertices))
    if density is None:
        density = rng.uniform(0.1, 0.5)
    vs = [f"v{i}" for i in range(n)]
    mult = {}
    for i in range(n):
        for j in range(n):
            if acyclic and j <= i:
                continue
            if rng.random() < density:
                r = rng.random()
                mult[vs[i], vs[j]] = INF if r < 0.3 else (2 if r < 0.45 else 1)
    return MultiGraph(vs, mult)
