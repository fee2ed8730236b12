"""Slow reference implementations straight from the definitions.

Nothing here reuses the bitmask machinery of the package; the tests compare
the package against these.
"""
from itertools import chain as _chain
from itertools import combinations, permutations

from spectra.graph import INF
from spectra.rayposet import RealizedElement, leq_realized, truncate


def subsets(xs, nonempty=True):
    xs = list(xs)
    start = 1 if nonempty else 0
    return _chain.from_iterable(combinations(xs, k) for k in range(start, len(xs) + 1))


# --- finite posets ---------------------------------------------------------------

def leq_from_pairs(elements, pairs):
    """Reflexive-transitive closure by repeated relaxation."""
    le = {(x, x) for x in elements} | set(pairs)
    changed = True
    while changed:
        changed = False
        for a, b in list(le):
            for c, d in list(le):
                if b == c and (a, d) not in le:
                    le.add((a, d))
                    changed = True
    return le


def lower_bounds(P, S):
    return [x for x in P.elements if all(P.leq(x, s) for s in S)]


def glb(P, S):
    lbs = lower_bounds(P, S)
    top = [g for g in lbs if all(P.leq(x, g) for x in lbs)]
    return top[0] if top else None


def directed(P, S):
    return bool(S) and all(any(P.leq(z, x) and P.leq(z, y) for z in S) for x in S for y in S)


def iso_exists(P, Q):
    if len(P) != len(Q):
        return False
    for perm in permutations(Q.elements):
        f = dict(zip(P.elements, perm))
        if all(P.leq(a, b) == Q.leq(f[a], f[b]) for a in P.elements for b in P.elements):
            return True
    return False


def covers(P):
    out = set()
    for a in P.elements:
        for b in P.elements:
            if P.lt(a, b) and not any(P.lt(a, c) and P.lt(c, b) for c in P.elements):
                out.add((a, b))
    return out


# --- ray posets --------------------------------------------------------------------

def glb_tail_via_truncation(P, r, depth=7):
    """glb of the tail of ``r``, read off a finite truncation.

    Lower bounds of the top ``depth`` elements that sit at level < depth-2
    are exactly the genuine lower bounds at those levels; the greatest one
    (if any) is the glb.
    """
    T = truncate(P, depth)
    chain = [RealizedElement(r, n) for n in range(depth)]
    lbs = [x for x in T.elements if x.level < depth - 2 and all(T.leq(x, c) for c in chain)]
    top = [g for g in lbs if all(T.leq(x, g) for x in lbs)]
    return top[0] if top else None


def realized(P, levels):
    out = []
    for label, k in P.nodes:
        out.extend(RealizedElement(label, n) for n in (range(levels) if k.value == "ray" else [0]))
    return out


def tail_below(P, r, p, search=12):
    """Some element of the tail of r lies below p."""
    return any(leq_realized(P, RealizedElement(r, n), p) for n in range(search))


def dc_holds(P, strong=False, levels=4):
    """DC / strong DC from the definition, over realized elements up to ``levels``."""
    glbs = {r: glb_tail_via_truncation(P, r) for r in P.rays}
    gone = {g for g in glbs.values() if g is not None}
    for r, g in glbs.items():
        if g is None:
            continue
        for p in realized(P, levels):
            if not strong and p in gone:
                continue
            above = leq_realized(P, g, p) and (p != g if strong else True)
            if above and not tail_below(P, r, p):
                return False
    return True


def leq_A(P, ext, a, b):
    """Order of A(P) from its definition, using only the order of P.

    New points are x_[T] for the tail T of each ray; ``ext.added`` names them.
    """
    new = {x: r for r, x in ext.added.items()}
    tail = lambda r: [RealizedElement(r, n) for n in range(10)]  # noqa: E731
    an, bn = a.node in new, b.node in new
    if not an and not bn:
        return leq_realized(P, a, b)
    if an and bn:
        # x_[S] <= x_[T] iff S precedes T: every t in T has some s in S below it
        S, T = tail(new[a.node]), tail(new[b.node])[:5]
        return all(any(leq_realized(P, s, t) for s in S) for t in T)
    if bn:
        # p <= x_[T] iff p is a lower bound of T
        return all(leq_realized(P, a, t) for t in tail(new[b.node]))
    # x_[S] <= p iff some s in S is below p
    return any(leq_realized(P, s, b) for s in tail(new[a.node]))


# --- graphs ----------------------------------------------------------------------

def reach_set(G, u):
    seen, todo = {u}, [u]
    while todo:
        x = todo.pop()
        for (a, b), m in G.mult.items():
            if a == x and m and b not in seen:
                seen.add(b)
                todo.append(b)
    return seen


def geq(G, u, v):
    return v in reach_set(G, u)


def regular(G, v):
    d = 0
    for (a, _), m in G.mult.items():
        if a == v:
            d = INF if m == INF or d == INF else d + m
    return 0 < d < INF


def hereditary(G, H):
    return all(v in H for u in H for v in reach_set(G, u))


def saturated(G, H):
    for v in G.vertices:
        if v in H or not regular(G, v):
            continue
        children = {b for (a, b), m in G.mult.items() if a == v and m}
        if children <= set(H):
            return False
    return True


def mt1(G, M):
    return all(w in M for v in M for w in G.vertices if geq(G, w, v))


def mt2(G, M):
    for v in M:
        if regular(G, v) and not any(b in M for (a, b), m in G.mult.items() if a == v and m):
            return False
    return True


def mt3(G, M):
    return all(any(geq(G, u, w) and geq(G, v, w) for w in M) for u in M for v in M)


def maximal_tails(G):
    return {frozenset(M) for M in subsets(G.vertices) if mt1(G, M) and mt2(G, M) and mt3(G, M)}


def hs_sets(G):
    return {frozenset(H) for H in subsets(G.vertices, nonempty=False) if hereditary(G, H) and saturated(G, H)}


def breaking(G, H):
    out = set()
    for v in G.vertices:
        if v in H:
            continue
        ms = [m for (a, _), m in G.mult.items() if a == v]
        if INF not in ms:
            continue
        into = sum(m for (a, b), m in G.mult.items() if a == v and b not in H)
        if 0 < into < INF:
            out.add(v)
    return out
