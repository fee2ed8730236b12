"""Countable posets presented by finitely many nodes.

A node is either a point (one element) or a ray, which stands for the
descending chain ``(r,0) > (r,1) > (r,2) > ...``.  Relations between nodes
are typed:

==================  =====================================================
``lt``              point p < point q
``point_below_ray`` p < (r,n) for every n
``ray_below_point`` (r,n) < q for every n
``sync``            (r,n) <= (s,m) iff n >= m
``all``             (r,n) < (s,m) for every n, m
==================  =====================================================

Between two nodes at most one kind survives closure (``all`` absorbs
``sync``), so the closed relation is a dict keyed by node pairs.

Every downward directed subset with no least element is equivalent, under
the subset preorder, to the tail of exactly one ray: a strictly descending
chain can only change node finitely often, so it ends inside some ray, and
the rays a directed set meets infinitely often have a least one under
sync/all.  Distinct rays give inequivalent tails because node relations are
acyclic.  The operators A and R therefore only ever deal with one class per
ray.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Optional, Union

from .errors import ClosureConflict, InvalidRelation, NodeCycle, NotRepresentable, SpectraError, UnknownNode
from .order import FinitePoset, OrderMap, is_order_embedding, order_iso, validate_poset

DEFAULT_DEPTH = 6
GUARD_DEPTH = 4
KAP_LEVELS = 3


class NodeKind(str, Enum):
    POINT = "point"
    RAY = "ray"


class RelKind(str, Enum):
    LT = "lt"
    POINT_BELOW_RAY = "point_below_ray"
    RAY_BELOW_POINT = "ray_below_point"
    SYNC = "sync"
    ALL = "all"


POINT, RAY = NodeKind.POINT, NodeKind.RAY
LT, PBR, RBP, SYNC, ALL = RelKind

_EXPECTED = {
    (POINT, POINT): {LT},
    (POINT, RAY): {PBR},
    (RAY, POINT): {RBP},
    (RAY, RAY): {SYNC, ALL},
}


class RealizedElement(NamedTuple):
    node: str
    level: int = 0

    def __str__(self):
        return f"{self.node}[{self.level}]"


@dataclass(frozen=True)
class Least:
    element: RealizedElement


@dataclass(frozen=True)
class RayTail:
    ray: str


DirectedClass = Union[Least, RayTail]


def _compose(kind_a, k1, kind_b, k2, kind_c) -> RelKind:
    if kind_a is POINT and kind_c is POINT:
        return LT
    if kind_a is POINT:
        return PBR
    if kind_c is POINT:
        return RBP
    if kind_b is RAY and k1 is SYNC and k2 is SYNC:
        return SYNC
    return ALL


def _stronger(k1: Optional[RelKind], k2: RelKind) -> RelKind:
    if k1 is None:
        return k2
    return ALL if ALL in (k1, k2) else k1


class RayPoset:
    """Validated, relation-closed ray poset.  Build with :func:`validate_rayposet`."""

    def __init__(self, nodes, rel, declared, derived):
        self.nodes = tuple(nodes)
        self.kind = dict(self.nodes)
        self.order = {label: i for i, (label, _) in enumerate(self.nodes)}
        self.rel = dict(rel)
        self.declared = tuple(declared)
        self.derived = tuple(derived)

    @property
    def labels(self) -> tuple:
        return tuple(label for label, _ in self.nodes)

    @property
    def points(self) -> tuple:
        return tuple(label for label, k in self.nodes if k is POINT)

    @property
    def rays(self) -> tuple:
        return tuple(label for label, k in self.nodes if k is RAY)

    @property
    def relations(self) -> tuple:
        """Closed relation as sorted (lo, hi, kind) triples."""
        return tuple(
            sorted(((a, b, k) for (a, b), k in self.rel.items()), key=lambda t: (self.order[t[0]], self.order[t[1]]))
        )

    def relation(self, a: str, b: str) -> Optional[RelKind]:
        return self.rel.get((a, b))

    def __eq__(self, other):
        if not isinstance(other, RayPoset):
            return NotImplemented
        return set(self.nodes) == set(other.nodes) and self.rel == other.rel

    def __hash__(self):
        return hash((frozenset(self.nodes), frozenset(self.rel.items())))

    def __repr__(self):
        rels = ", ".join(f"{k.value}({a},{b})" for a, b, k in self.relations)
        nodes = ", ".join(f"{label}:{k.value}" for label, k in self.nodes)
        return f"RayPoset([{nodes}], [{rels}])"

    def element(self, node: str, level: int = 0) -> RealizedElement:
        if node not in self.kind:
            raise UnknownNode(f"{node!r} is not a node")
        if self.kind[node] is POINT and level != 0:
            raise SpectraError(f"point {node!r} only has level 0")
        if level < 0:
            raise SpectraError("levels are natural numbers")
        return RealizedElement(node, level)


def validate_rayposet(nodes: Iterable, relations: Iterable) -> RayPoset:
    """Close ``relations`` under composition and check the result is a partial order.

    ``nodes`` holds (label, kind) pairs, ``relations`` (lo, hi, kind) triples.
    Consequences forced by composition are added and listed in
    ``RayPoset.derived``.
    """
    nodes = [(label, NodeKind(kind)) for label, kind in nodes]
    kind = dict(nodes)
    if len(kind) != len(nodes):
        raise SpectraError("node labels must be unique")
    declared = []
    rel: dict = {}
    for lo, hi, k in relations:
        k = RelKind(k)
        for x in (lo, hi):
            if x not in kind:
                raise UnknownNode(f"{x!r} is not a declared node")
        if lo == hi:
            raise InvalidRelation(f"relation from {lo!r} to itself")
        if k not in _EXPECTED[kind[lo], kind[hi]]:
            raise InvalidRelation(f"{k.value} cannot relate a {kind[lo].value} to a {kind[hi].value}")
        declared.append((lo, hi, k))
        rel[lo, hi] = _stronger(rel.get((lo, hi)), k)
    for a, b in rel:
        if (b, a) in rel:
            raise NodeCycle(f"{a!r} and {b!r} are declared below each other")

    changed = True
    while changed:
        changed = False
        for (a, b), k1 in list(rel.items()):
            for c in kind:
                k2 = rel.get((b, c))
                if k2 is None:
                    continue
                if c == a:
                    raise NodeCycle(f"{a!r} lies below itself through {b!r}")
                k = _compose(kind[a], k1, kind[b], k2, kind[c])
                new = _stronger(rel.get((a, c)), k)
                if rel.get((a, c)) is not new:
                    if (c, a) in rel:
                        raise ClosureConflict(f"closure forces {a!r} below {c!r}, contradicting {c!r} below {a!r}")
                    rel[a, c] = new
                    changed = True

    declared_pairs = {(lo, hi) for lo, hi, _ in declared}
    derived = sorted(
        ((a, b, k) for (a, b), k in rel.items() if (a, b) not in declared_pairs),
        key=lambda t: (t[0], t[1]),
    )
    return RayPoset(nodes, rel, declared, derived)


def from_finite(P: FinitePoset) -> RayPoset:
    """Present a finite poset as a ray poset with no rays (labels become strings)."""
    return validate_rayposet(
        [(str(x), POINT) for x in P.elements], [(str(a), str(b), LT) for a, b in P.covers]
    )


# --- semantics -------------------------------------------------------------

def leq_realized(P: RayPoset, x: RealizedElement, y: RealizedElement) -> bool:
    for e in (x, y):
        if e.node not in P.kind:
            raise UnknownNode(f"{e.node!r} is not a node")
    if x.node == y.node:
        return x.level >= y.level if P.kind[x.node] is RAY else True
    k = P.rel.get((x.node, y.node))
    if k is None:
        return False
    if k is SYNC:
        return x.level >= y.level
    return True


def lt_realized(P: RayPoset, x: RealizedElement, y: RealizedElement) -> bool:
    return x != y and leq_realized(P, x, y)


def truncate(P: RayPoset, depth: int = DEFAULT_DEPTH) -> FinitePoset:
    """Finite subposet on the points and the top ``depth`` elements of each ray.

    The order is rebuilt from the declared generating relations and closed
    from scratch, so it checks the symbolic closure rather than reusing it.
    """
    if depth < 1:
        raise SpectraError("truncation depth must be at least 1")
    elements = []
    for label, k in P.nodes:
        levels = range(depth) if k is RAY else range(1)
        elements.extend(RealizedElement(label, n) for n in levels)
    pairs = []
    for r in P.rays:
        pairs.extend((RealizedElement(r, n + 1), RealizedElement(r, n)) for n in range(depth - 1))
    for lo, hi, k in P.declared:
        if k is LT:
            pairs.append((RealizedElement(lo), RealizedElement(hi)))
        elif k is PBR:
            pairs.extend((RealizedElement(lo), RealizedElement(hi, n)) for n in range(depth))
        elif k is RBP:
            pairs.extend((RealizedElement(lo, n), RealizedElement(hi)) for n in range(depth))
        elif k is SYNC:
            pairs.extend(
                (RealizedElement(lo, n), RealizedElement(hi, m)) for n in range(depth) for m in range(n + 1)
            )
        else:
            pairs.extend(
                (RealizedElement(lo, n), RealizedElement(hi, m)) for n in range(depth) for m in range(depth)
            )
    return validate_poset(elements, pairs)


def _probe_levels(P: RayPoset, *xs: RealizedElement) -> list:
    """Representative elements for questions about the interval between ``xs``.

    Any ray level above ``max level + 1`` behaves like ``max level + 2`` for
    comparisons against ``xs``, so these candidates decide existence exactly.
    """
    top = max((x.level for x in xs), default=0) + 2
    out = []
    for label, k in P.nodes:
        if k is POINT:
            out.append(RealizedElement(label))
        else:
            out.extend(RealizedElement(label, n) for n in range(top + 1))
    return out


# --- directed classes and greatest lower bounds ----------------------------

def directed_classes(P: RayPoset) -> list:
    """Classes of directed subsets without least element: one tail per ray."""
    return [RayTail(r) for r in P.rays]


def chain_classes(P: RayPoset) -> list:
    """Classes of chains without least element.

    Such a chain contains a coinitial strictly descending sequence, which
    ends up inside a single ray; each ray's tail is itself such a chain.
    """
    out = []
    for label, k in P.nodes:
        if k is RAY and all(label != c.ray for c in out):
            out.append(RayTail(label))
    return out


def _require_ray(P: RayPoset, r: str) -> None:
    if r not in P.kind:
        raise UnknownNode(f"{r!r} is not a node")
    if P.kind[r] is not RAY:
        raise SpectraError(f"{r!r} is a point, not a ray")


def glb_tail(P: RayPoset, r: str) -> Optional[RealizedElement]:
    """Greatest lower bound of the tail of ray ``r``, read off the relation table."""
    _require_ray(P, r)
    tops = []
    for label, k in P.nodes:
        kr = P.rel.get((label, r))
        if k is POINT and kr is PBR:
            tops.append(RealizedElement(label))
        elif k is RAY and kr is ALL:
            tops.append(RealizedElement(label, 0))
    for c in tops:
        if all(leq_realized(P, t, c) for t in tops):
            return c
    return None


def _glb_of_ray_chain(P: RayPoset, r: str) -> Optional[RealizedElement]:
    """Same question as :func:`glb_tail`, answered by probing the semantics only.

    ``x`` bounds the whole chain iff it lies below ``(r, level(x) + 1)``,
    because the down-sets along the chain shrink as the level grows.
    """
    tops = []
    for label, k in P.nodes:
        x = RealizedElement(label, 0)
        if leq_realized(P, x, RealizedElement(r, x.level + 1)):
            tops.append(x)
    greatest = [c for c in tops if all(leq_realized(P, t, c) for t in tops)]
    return greatest[0] if greatest else None


def removed_elements(P: RayPoset) -> dict:
    """Map each ray whose tail has a glb to that glb."""
    out = {}
    for r in P.rays:
        g = glb_tail(P, r)
        if g is not None:
            out[r] = g
    return out


# --- A, AC and R ------------------------------------------------------------

class Extension(NamedTuple):
    poset: RayPoset
    mapping: dict  # old node -> node in the result (labels are kept)
    added: dict  # ray -> fresh point adjoined below its tail


def _fresh(taken: set, base: str) -> str:
    label, n = base, 2
    while label in taken:
        label, n = f"{base}_{n}", n + 1
    taken.add(label)
    return label


def _adjoin(P: RayPoset, classes: list) -> Extension:
    taken = set(P.labels)
    added = {c.ray: _fresh(taken, f"x_{c.ray}") for c in classes}
    nodes = list(P.nodes) + [(x, POINT) for x in added.values()]
    rels = [(a, b, k) for (a, b), k in P.rel.items()]
    for r, x in added.items():
        rels.append((x, r, PBR))
        for label, k in P.nodes:
            below = P.rel.get((label, r))
            above = P.rel.get((r, label))
            if k is POINT:
                if below is PBR:
                    rels.append((label, x, LT))
                if above is RBP:
                    rels.append((x, label, LT))
            else:
                if below is ALL:
                    rels.append((label, x, RBP))
                if above in (SYNC, ALL):
                    rels.append((x, label, PBR))
        for s, y in added.items():
            if P.rel.get((s, r)) in (SYNC, ALL):
                rels.append((y, x, LT))
    try:
        out = validate_rayposet(nodes, rels)
    except ClosureConflict as exc:  # pragma: no cover - would be a bug in the construction
        raise AssertionError(f"adjoining glbs produced an invalid poset: {exc}") from exc
    return Extension(out, {label: label for label in P.labels}, added)


def apply_A(P: RayPoset) -> Extension:
    """Adjoin one new point ``x_r`` per ray, sitting just below the tail of ``r``."""
    return _adjoin(P, directed_classes(P))


def apply_AC(P: RayPoset) -> RayPoset:
    return _adjoin(P, chain_classes(P)).poset


def apply_R(P: RayPoset) -> tuple:
    """Remove every glb of a ray tail.  Returns (sub-poset, removed node labels).

    When a glb is the top of another ray, the remainder of that ray would be
    a chain whose sync alignment is shifted by one; that shape has no
    presentation here and NotRepresentable is raised.
    """
    gone = removed_elements(P)
    tops = sorted({str(g) for g in gone.values() if P.kind[g.node] is RAY})
    if tops:
        raise NotRepresentable(f"removing ray tops {', '.join(tops)} leaves no ray-poset presentation")
    removed = frozenset(g.node for g in gone.values())
    return induced(P, [label for label in P.labels if label not in removed]), removed


def induced(P: RayPoset, keep: Iterable[str]) -> RayPoset:
    keep = set(keep)
    nodes = [(label, k) for label, k in P.nodes if label in keep]
    rels = [(a, b, k) for (a, b), k in P.rel.items() if a in keep and b in keep]
    return validate_rayposet(nodes, rels)


# --- properties --------------------------------------------------------------

class PropertyResult(NamedTuple):
    holds: bool
    witness: object = None

    def __bool__(self):
        return self.holds


def _in_R(gone: set, x: RealizedElement) -> bool:
    return x not in gone


def _dc_violation(P: RayPoset, strong: bool):
    """First (ray, element) breaking directed compatibility, or None."""
    glbs = removed_elements(P)
    gone = set(glbs.values())
    for r, g in glbs.items():
        for label, k in P.nodes:
            if k is POINT:
                x = RealizedElement(label)
                if not strong and not _in_R(gone, x):
                    continue
                if not (lt_realized(P, g, x) if strong else leq_realized(P, g, x)):
                    continue
                if P.rel.get((r, label)) is not RBP:
                    return r, x
            else:
                if label == r or P.rel.get((r, label)) in (SYNC, ALL):
                    continue
                for m in (0, 1):
                    x = RealizedElement(label, m)
                    if not strong and not _in_R(gone, x):
                        continue
                    if lt_realized(P, g, x) if strong else leq_realized(P, g, x):
                        return r, x
    return None


def _dd_violation(P: RayPoset):
    """A removed glb that no directed subset of R(P) reaches, or None."""
    glbs = removed_elements(P)
    gone = set(glbs.values())
    for g in dict.fromkeys(glbs.values()):
        found = False
        for r2 in P.rays:
            if glbs.get(r2) != g:
                continue
            start = 0 if _in_R(gone, RealizedElement(r2, 0)) else 1
            # the tail from ``start`` lies in R(P): only level-0 elements are ever glbs
            if all(_in_R(gone, RealizedElement(r2, n)) for n in range(start, start + 2)):
                found = True
                break
        if not found:
            return g
    return None


def is_cover(P: RayPoset, x: RealizedElement, y: RealizedElement) -> bool:
    """True iff x < y with nothing strictly between them."""
    if not lt_realized(P, x, y):
        return False
    for t in _probe_levels(P, x, y):
        if t != x and t != y and leq_realized(P, x, t) and leq_realized(P, t, y):
            return False
    return True


def kap_witness(P: RayPoset, p: RealizedElement, q: RealizedElement):
    """A cover pair (p', q') with p <= p' < q' <= q, or None.

    If some ray lies entirely above p and reaches below q, two consecutive
    elements of it form a cover.  Otherwise the interval is finite and a
    maximal element of [p, q) is covered by q.  Both guesses are checked, and
    an exhaustive search over the probe elements backs them up.
    """
    if not lt_realized(P, p, q):
        return None
    cands = [t for t in _probe_levels(P, p, q) if leq_realized(P, p, t) and leq_realized(P, t, q)]
    top = max(p.level, q.level) + 2
    for r in P.rays:
        deep = RealizedElement(r, top)
        if deep in cands:
            n = min(t.level for t in cands if t.node == r)
            pair = RealizedElement(r, n + 1), RealizedElement(r, n)
            if is_cover(P, *pair):
                return pair
    below = [t for t in cands if t != q]
    for lo in below:
        if not any(lt_realized(P, lo, t) for t in below) and is_cover(P, lo, q):
            return lo, q
    for hi in cands:
        for lo in cands:
            if is_cover(P, lo, hi):
                return lo, hi
    return None


def _kap_violation(P: RayPoset, levels: int = KAP_LEVELS):
    elems = []
    for label, k in P.nodes:
        elems.extend(RealizedElement(label, n) for n in (range(levels + 1) if k is RAY else range(1)))
    for p in elems:
        for q in elems:
            if lt_realized(P, p, q) and kap_witness(P, p, q) is None:
                return p, q
    return None


def check_property(P: RayPoset, prop: str) -> PropertyResult:
    """Decide GLB, GLBC, DC, DD, KAP, DCC or StrongDC exactly.

    A failing answer carries a witness: the offending class for GLB/GLBC/DCC,
    a (ray, element) pair for DC/StrongDC, the unreachable glb for DD and the
    interval endpoints for KAP.
    """
    if prop == "GLB":
        for c in directed_classes(P):
            if glb_tail(P, c.ray) is None:
                return PropertyResult(False, c)
        return PropertyResult(True)
    if prop == "GLBC":
        for c in chain_classes(P):
            if _glb_of_ray_chain(P, c.ray) is None:
                return PropertyResult(False, c)
        return PropertyResult(True)
    if prop == "DCC":
        rays = P.rays
        return PropertyResult(not rays, RayTail(rays[0]) if rays else None)
    if prop in ("DC", "StrongDC"):
        w = _dc_violation(P, strong=prop == "StrongDC")
        return PropertyResult(w is None, w)
    if prop == "DD":
        w = _dd_violation(P)
        return PropertyResult(w is None, w)
    if prop == "KAP":
        w = _kap_violation(P)
        return PropertyResult(w is None, w)
    raise ValueError(f"unknown property {prop!r}")


# --- isomorphism -------------------------------------------------------------

def is_structural_iso(P: RayPoset, Q: RayPoset, mapping: dict) -> bool:
    if len(P.nodes) != len(Q.nodes) or set(mapping) != set(P.labels):
        return False
    if set(mapping.values()) != set(Q.labels):
        return False
    if any(P.kind[a] is not Q.kind[mapping[a]] for a in P.labels):
        return False
    if len(P.rel) != len(Q.rel):
        return False
    return all(Q.rel.get((mapping[a], mapping[b])) is k for (a, b), k in P.rel.items())


def _truncation_guard(P: RayPoset, Q: RayPoset, mapping: dict, depth: int) -> None:
    for d in range(1, depth + 1):
        TP, TQ = truncate(P, d), truncate(Q, d)
        induced_map = {x: RealizedElement(mapping[x.node], x.level) for x in TP.elements}
        m = OrderMap.from_dict(TP, TQ, induced_map)
        if not (m.bijective and is_order_embedding(m)):
            raise AssertionError(f"node bijection fails on the depth-{d} truncation")
        if d <= 2 and order_iso(TP, TQ) is None:
            raise AssertionError(f"no isomorphism between depth-{d} truncations")


def structural_iso(P: RayPoset, Q: RayPoset, guard_depth: int = GUARD_DEPTH) -> Optional[dict]:
    """Kind- and relation-preserving node bijection P -> Q, or None.

    A bijection that is found is cross-checked on truncations up to
    ``guard_depth``.
    """
    if len(P.nodes) != len(Q.nodes) or len(P.rel) != len(Q.rel):
        return None

    def sig(R, a):
        outs = sorted(k.value for (x, _), k in R.rel.items() if x == a)
        ins = sorted(k.value for (_, y), k in R.rel.items() if y == a)
        return R.kind[a], tuple(outs), tuple(ins)

    sp = {a: sig(P, a) for a in P.labels}
    sq = {b: sig(Q, b) for b in Q.labels}
    if sorted(sp.values()) != sorted(sq.values()):
        return None
    plabels = P.labels
    cands = {a: [b for b in Q.labels if sq[b] == sp[a]] for a in plabels}
    order = sorted(plabels, key=lambda a: (len(cands[a]), P.order[a]))
    f: dict = {}
    used: set = set()

    def ok(a, b):
        for c, d in f.items():
            if P.rel.get((a, c)) is not Q.rel.get((b, d)) or P.rel.get((c, a)) is not Q.rel.get((d, b)):
                return False
        return True

    def search(i):
        if i == len(order):
            return True
        a = order[i]
        for b in cands[a]:
            if b not in used and ok(a, b):
                f[a] = b
                used.add(b)
                if search(i + 1):
                    return True
                del f[a]
                used.discard(b)
        return False

    if not search(0):
        return None
    mapping = {a: f[a] for a in plabels}
    _truncation_guard(P, Q, mapping, guard_depth)
    return mapping


# --- random generation ---------------------------------------------------------

def random_rayposet(rng: random.Random, max_nodes: int = 6, density: Optional[float] = None) -> RayPoset:
    """Random valid skeleton: relations only run forward along a random node order."""
    n = max(rng.randint(1, max_nodes), rng.randint(1, max_nodes))
    if density is None:
        density = rng.uniform(0.2, 0.7)
    kinds = [RAY if rng.random() < 0.45 else POINT for _ in range(n)]
    labels = [f"{'r' if k is RAY else 'p'}{i}" for i, k in enumerate(kinds)]
    rels = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() >= density:
                continue
            a, b = labels[i], labels[j]
            pair = kinds[i], kinds[j]
            if pair == (RAY, RAY):
                k = SYNC if rng.random() < 0.5 else ALL
            else:
                (k,) = _EXPECTED[pair]
            rels.append((a, b, k))
    return validate_rayposet(list(zip(labels, kinds)), rels)


def has_point_glbs(P: RayPoset) -> bool:
    """True when every existing ray-tail glb is a point (so apply_R is representable)."""
    return all(P.kind[g.node] is POINT for g in removed_elements(P).values())


def ray_corpus(count: int, seed: int, max_nodes: int = 6) -> list:
    """Seeded list of random ray posets whose tail glbs are all points."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        P = random_rayposet(rng, max_nodes)
        if has_point_glbs(P):
            out.append(P)
    return out
