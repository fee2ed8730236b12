"""Finite posets stored as bit matrices.

Every element gets an index; ``down[i]`` is the bitmask of indices ``j`` with
``j <= i`` and ``up[i]`` the mask of indices above ``i``.  Subsets are masks
too, so enumeration over subsets is a loop over integers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Optional

from .errors import CapExceeded, CycleDetected, EmptySubset, NotDirected, SpectraError, UnknownElement

DEFAULT_CAP = 24

PROPERTIES = ("GLB", "GLBC", "DC", "DD", "KAP", "DCC", "StrongDC")


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class FinitePoset:
    """An explicit finite partial order over hashable labels.

    Build one with :func:`validate_poset`; the constructor trusts its input.
    """

    def __init__(self, elements: Iterable[Hashable], down: Iterable[int]):
        self.elements = tuple(elements)
        self.down = tuple(down)
        self.index = {x: i for i, x in enumerate(self.elements)}
        n = len(self.elements)
        up = [0] * n
        for i, d in enumerate(self.down):
            for j in bits(d):
                up[j] |= 1 << i
        self.up = tuple(up)
        self.full = (1 << n) - 1

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __repr__(self):
        covers = sorted((repr(a), repr(b)) for a, b in self.covers)
        return f"FinitePoset({list(self.elements)!r}, covers={covers})"

    def __eq__(self, other):
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return set(self.elements) == set(other.elements) and self.le_pairs() == other.le_pairs()

    def __hash__(self):
        return hash((frozenset(self.elements), self.le_pairs()))

    def idx(self, x) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise UnknownElement(f"{x!r} is not an element") from None

    def leq(self, a, b) -> bool:
        return bool(self.down[self.idx(b)] >> self.idx(a) & 1)

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def le_pairs(self) -> frozenset:
        return frozenset(
            (self.elements[j], self.elements[i]) for i, d in enumerate(self.down) for j in bits(d)
        )

    @cached_property
    def cover_masks(self) -> tuple:
        """``cover_masks[i]`` holds the indices covered by ``i``."""
        out = []
        for i, d in enumerate(self.down):
            strict = d & ~(1 << i)
            c = 0
            for j in bits(strict):
                between = strict & self.up[j] & ~(1 << j)
                if not between:
                    c |= 1 << j
            out.append(c)
        return tuple(out)

    @cached_property
    def covers(self) -> frozenset:
        """Hasse diagram as (lower, upper) label pairs."""
        return frozenset(
            (self.elements[j], self.elements[i]) for i, c in enumerate(self.cover_masks) for j in bits(c)
        )

    def mask(self, subset: Iterable) -> int:
        m = 0
        for x in subset:
            m |= 1 << self.idx(x)
        return m

    def labels(self, mask: int) -> tuple:
        return tuple(self.elements[i] for i in bits(mask))

    def subposet(self, keep: Iterable) -> "FinitePoset":
        keep = set(keep)
        kept = [x for x in self.elements if x in keep]
        return _from_leq(kept, lambda a, b: self.leq(a, b))

    def relabel(self, mapping) -> "FinitePoset":
        return FinitePoset([mapping[x] for x in self.elements], self.down)


def _from_leq(elements, leq) -> FinitePoset:
    down = []
    for b in elements:
        d = 0
        for j, a in enumerate(elements):
            if leq(a, b):
                d |= 1 << j
        down.append(d)
    return FinitePoset(elements, down)


def transitive_closure(n: int, masks: list) -> list:
    """Reflexive-transitive closure of a relation given as per-index down masks."""
    down = [m | (1 << i) for i, m in enumerate(masks)]
    for k in range(n):
        bk = 1 << k
        dk = down[k]
        for i in range(n):
            if down[i] & bk:
                down[i] |= dk
    return down


def validate_poset(elements: Iterable[Hashable], le_pairs: Iterable[tuple]) -> FinitePoset:
    """Close a generating relation and check it is a partial order.

    ``le_pairs`` may be any generating set of ``(lower, upper)`` pairs, e.g.
    Hasse covers.  Raises CycleDetected if the closure is not antisymmetric.
    """
    elements = list(elements)
    if len(set(elements)) != len(elements):
        raise SpectraError("element labels must be unique")
    index = {x: i for i, x in enumerate(elements)}
    masks = [0] * len(elements)
    for lo, hi in le_pairs:
        if lo not in index:
            raise UnknownElement(f"{lo!r} is not a declared element")
        if hi not in index:
            raise UnknownElement(f"{hi!r} is not a declared element")
        masks[index[hi]] |= 1 << index[lo]
    down = transitive_closure(len(elements), masks)
    for i, d in enumerate(down):
        for j in bits(d & ~(1 << i)):
            if down[j] >> i & 1:
                raise CycleDetected(f"{elements[i]!r} and {elements[j]!r} lie below each other")
    return FinitePoset(elements, down)


def chain(labels: Iterable) -> FinitePoset:
    """Chain with ``labels`` listed from bottom to top."""
    labels = list(labels)
    return validate_poset(labels, zip(labels, labels[1:]))


def antichain(labels: Iterable) -> FinitePoset:
    return validate_poset(list(labels), [])


# --- greatest lower bounds -------------------------------------------------

def lower_bounds_mask(P: FinitePoset, mask: int) -> int:
    lb = P.full
    for i in bits(mask):
        lb &= P.down[i]
    return lb


def glb_mask(P: FinitePoset, mask: int) -> Optional[int]:
    lb = lower_bounds_mask(P, mask)
    for x in bits(lb):
        if lb & ~P.down[x] == 0:
            return x
    return None


def glb(P: FinitePoset, S: Iterable) -> Optional[Hashable]:
    """Greatest lower bound of ``S`` in ``P``, or None.

    For the empty subset every element is a lower bound, so this returns the
    greatest element of ``P`` if there is one.
    """
    x = glb_mask(P, P.mask(S))
    return None if x is None else P.elements[x]


# --- downward directed subsets ---------------------------------------------

@dataclass(frozen=True)
class SubsetClass:
    carrier: FinitePoset = field(repr=False, compare=False)
    members: tuple
    downward_directed: bool
    has_least: bool

    @property
    def mask(self) -> int:
        return self.carrier.mask(self.members)


def is_directed_mask(P: FinitePoset, mask: int) -> bool:
    if not mask:
        return False
    idx = list(bits(mask))
    for a, i in enumerate(idx):
        di = P.down[i] & mask
        for j in idx[a + 1:]:
            if not di & P.down[j]:
                return False
    return True


def least_mask(P: FinitePoset, mask: int) -> Optional[int]:
    for i in bits(mask):
        if mask & ~P.up[i] == 0:
            return i
    return None


def is_chain_mask(P: FinitePoset, mask: int) -> bool:
    for i in bits(mask):
        if mask & ~(P.up[i] | P.down[i]):
            return False
    return True


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise CapExceeded(f"{n} elements exceeds the enumeration cap of {cap}")


def directed_masks(P: FinitePoset, cap: int = DEFAULT_CAP) -> Iterator[int]:
    _check_cap(len(P), cap)
    for mask in range(1, P.full + 1):
        if is_directed_mask(P, mask):
            yield mask


def downward_directed_subsets(P: FinitePoset, cap: int = DEFAULT_CAP) -> Iterator[SubsetClass]:
    """Yield every downward directed subset, in increasing bitmask order."""
    for mask in directed_masks(P, cap):
        yield SubsetClass(P, P.labels(mask), True, least_mask(P, mask) is not None)


def is_downward_directed(P: FinitePoset, S: Iterable) -> bool:
    return is_directed_mask(P, P.mask(S))


# --- the subset preorder ---------------------------------------------------

def preceq_mask(P: FinitePoset, m1: int, m2: int) -> bool:
    return all(P.down[j] & m1 for j in bits(m2))


def subset_preceq(P: FinitePoset, S1: Iterable, S2: Iterable) -> bool:
    """True iff every element of S2 lies above some element of S1."""
    m1, m2 = P.mask(S1), P.mask(S2)
    if not m1 or not m2:
        raise EmptySubset("the subset preorder is defined on nonempty subsets")
    return preceq_mask(P, m1, m2)


def subset_equiv(P: FinitePoset, S1: Iterable, S2: Iterable) -> bool:
    S1, S2 = list(S1), list(S2)
    return subset_preceq(P, S1, S2) and subset_preceq(P, S2, S1)


def filter_generated(P: FinitePoset, S: Iterable) -> tuple:
    """Smallest filter containing the directed set ``S`` (its up-closure)."""
    mask = P.mask(S)
    if not is_directed_mask(P, mask):
        raise NotDirected("filter_generated needs a nonempty downward directed subset")
    out = mask
    for i in bits(mask):
        out |= P.up[i]
    return P.labels(out)


# --- maps and isomorphism --------------------------------------------------

@dataclass(frozen=True)
class OrderMap:
    domain: FinitePoset = field(repr=False)
    codomain: FinitePoset = field(repr=False)
    assignment: tuple  # (source, target) pairs in domain order

    @classmethod
    def from_dict(cls, domain, codomain, mapping) -> "OrderMap":
        return cls(domain, codomain, tuple((x, mapping[x]) for x in domain.elements))

    def as_dict(self) -> dict:
        return dict(self.assignment)

    @property
    def order_preserving(self) -> bool:
        f = self.as_dict()
        return all(self.codomain.leq(f[a], f[b]) for a, b in self.domain.le_pairs())

    @property
    def order_reflecting(self) -> bool:
        f = self.as_dict()
        els = self.domain.elements
        return all(
            self.domain.leq(a, b) for a in els for b in els if self.codomain.leq(f[a], f[b])
        )

    @property
    def injective(self) -> bool:
        targets = [t for _, t in self.assignment]
        return len(set(targets)) == len(targets)

    @property
    def bijective(self) -> bool:
        return self.injective and len(self.assignment) == len(self.codomain)


def is_order_embedding(m: OrderMap) -> bool:
    return m.order_preserving and m.order_reflecting


def _heights(P: FinitePoset) -> list:
    """Length of the longest chain ending at each element."""
    order = sorted(range(len(P)), key=lambda i: popcount(P.down[i]))
    h = [0] * len(P)
    for i in order:
        for j in bits(P.down[i] & ~(1 << i)):
            h[i] = max(h[i], h[j] + 1)
    return h


def _signatures(P: FinitePoset) -> list:
    h = _heights(P)
    return [(popcount(P.down[i]), popcount(P.up[i]), h[i], popcount(P.cover_masks[i])) for i in range(len(P))]


def order_iso(P: FinitePoset, Q: FinitePoset) -> Optional[OrderMap]:
    """Find an order-isomorphism P -> Q by backtracking, or return None.

    Candidates are pruned by (down-set size, up-set size, height, lower
    covers) and tried in index order, so the answer is deterministic.
    """
    n = len(P)
    if n != len(Q):
        return None
    sp, sq = _signatures(P), _signatures(Q)
    if sorted(sp) != sorted(sq):
        return None
    cands = [[j for j in range(n) if sq[j] == sp[i]] for i in range(n)]
    # most constrained first keeps the search small; ties fall back to index order
    order = sorted(range(n), key=lambda i: (len(cands[i]), i))
    f = [-1] * n
    used = [False] * n

    def consistent(i, j):
        for k in order:
            fk = f[k]
            if fk < 0:
                continue
            if bool(P.down[i] >> k & 1) != bool(Q.down[j] >> fk & 1):
                return False
            if bool(P.down[k] >> i & 1) != bool(Q.down[fk] >> j & 1):
                return False
        return True

    def search(pos):
        if pos == n:
            return True
        i = order[pos]
        for j in cands[i]:
            if not used[j] and consistent(i, j):
                f[i], used[j] = j, True
                if search(pos + 1):
                    return True
                f[i], used[j] = -1, False
        return False

    if not search(0):
        return None
    return OrderMap(P, Q, tuple((P.elements[i], Q.elements[f[i]]) for i in range(n)))


# --- the operators A and R on finite carriers -------------------------------

def directed_classes_finite(P: FinitePoset, cap: int = DEFAULT_CAP) -> list:
    """Representatives (masks) of the classes of directed sets with no least element."""
    reps = []
    for mask in directed_masks(P, cap):
        if least_mask(P, mask) is not None:
            continue
        if not any(preceq_mask(P, r, mask) and preceq_mask(P, mask, r) for r in reps):
            reps.append(mask)
    return reps


def apply_A_finite(P: FinitePoset, cap: int = DEFAULT_CAP) -> FinitePoset:
    """Adjoin a new lower bound for each class of directed sets lacking a least element."""
    reps = directed_classes_finite(P, cap)
    new = [("x", P.labels(m)) for m in reps]
    pairs = set(P.le_pairs())
    for label, m in zip(new, reps):
        for p in range(len(P)):
            if m & ~P.up[p] == 0:
                pairs.add((P.elements[p], label))
            if m & P.down[p]:
                pairs.add((label, P.elements[p]))
        for other, m2 in zip(new, reps):
            if preceq_mask(P, m, m2):
                pairs.add((label, other))
    return validate_poset(list(P.elements) + new, pairs)


def removed_by_R_finite(P: FinitePoset, cap: int = DEFAULT_CAP) -> int:
    removed = 0
    for mask in directed_masks(P, cap):
        if least_mask(P, mask) is None:
            g = glb_mask(P, mask)
            if g is not None:
                removed |= 1 << g
    return removed


def apply_R_finite(P: FinitePoset, cap: int = DEFAULT_CAP) -> FinitePoset:
    """Drop every element that is the glb of a directed set with no least element."""
    removed = removed_by_R_finite(P, cap)
    return P.subposet(P.labels(P.full & ~removed))


def _has_cover_between(P: FinitePoset, p: int, q: int) -> bool:
    interval = P.up[p] & P.down[q]
    return any(P.cover_masks[b] & interval for b in bits(interval))


def check_property_finite(P: FinitePoset, prop: str, cap: int = DEFAULT_CAP) -> bool:
    """Decide an order property by direct enumeration over subsets of ``P``."""
    _check_cap(len(P), cap)
    if prop == "GLB":
        return all(glb_mask(P, m) is not None for m in directed_masks(P, cap))
    if prop == "GLBC":
        return all(
            glb_mask(P, m) is not None for m in range(1, P.full + 1) if is_chain_mask(P, m)
        )
    if prop in ("DC", "StrongDC"):
        keep = P.full & ~removed_by_R_finite(P, cap) if prop == "DC" else P.full
        for m in directed_masks(P, cap):
            g = glb_mask(P, m)
            if g is None:
                continue
            above = P.up[g] & keep
            if prop == "StrongDC":
                above &= ~(1 << g)
            for p in bits(above):
                if not P.down[p] & m:
                    return False
        return True
    if prop == "DD":
        rest = P.full & ~removed_by_R_finite(P, cap)
        reachable = set()
        for m in directed_masks(P, cap):
            if m & ~rest == 0:
                g = glb_mask(P, m)
                if g is not None:
                    reachable.add(g)
        for m in directed_masks(P, cap):
            g = glb_mask(P, m)
            if g is not None and g not in reachable:
                return False
        return True
    if prop == "KAP":
        for q in range(len(P)):
            for p in bits(P.down[q] & ~(1 << q)):
                if not _has_cover_between(P, p, q):
                    return False
        return True
    if prop == "DCC":
        for m in range(1, P.full + 1):
            if not any(P.down[i] & m == 1 << i for i in bits(m)):
                return False
        return True
    raise ValueError(f"unknown property {prop!r}")
