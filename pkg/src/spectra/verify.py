"""Named verification suites over seeded random corpora.

Each suite returns a plain dict::

    {"suite": name, "corpus": {...}, "passes": int, "failures": [{"instance": ..., "witness": ...}]}

Corpora are drawn from ``random.Random(seed)``, so a fixed seed gives a
byte-identical report.
"""
from __future__ import annotations

import random
from typing import Callable, Optional

from . import io
from .errors import SpectraError, UnknownSuite
from .examples import NAMES, diamond, example
from .graph import MultiGraph, random_graph, tail_masks, tail_union_check
from .order import (
    apply_A_finite,
    check_property_finite,
    directed_masks,
    glb,
    is_order_embedding,
    order_iso,
    validate_poset,
)
from .rayposet import (
    RayPoset,
    apply_A,
    apply_AC,
    apply_R,
    check_property,
    is_cover,
    is_structural_iso,
    leq_realized,
    ray_corpus,
    structural_iso,
    truncate,
)
from .spectrum import (
    build_EP,
    check_EP_postconditions,
    enumerate_primes,
    ep_embedding,
    in_graded_regime,
    intersect_primes,
    Graded,
    spec_poset,
)

POSET_COUNT, POSET_MAX = 500, 7
RAY_COUNT, RAY_MAX = 300, 6
GRAPH_COUNT, GRAPH_MAX = 500, 7
FAMILY_LIMIT = 14  # up to this many tails every subfamily is checked
FAMILY_SAMPLE = 4096
FAMILY_POSET_CAP = 16


# --- corpora -------------------------------------------------------------------

def random_poset(rng: random.Random, max_size: int = POSET_MAX, density: Optional[float] = None):
    """Random DAG on a shuffled order, then transitive closure."""
    n = max(rng.randint(1, max_size), rng.randint(1, max_size))
    if density is None:
        density = rng.uniform(0.1, 0.6)
    labels = [f"e{i}" for i in range(n)]
    rng.shuffle(labels)
    pairs = [(labels[i], labels[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return validate_poset(sorted(labels, key=lambda s: int(s[1:])), pairs)


def poset_corpus(count: int, seed: int, max_size: int = POSET_MAX) -> list:
    rng = random.Random(seed)
    return [random_poset(rng, max_size) for _ in range(count)]


def graph_corpus(count: int, seed: int, max_vertices: int = GRAPH_MAX, acyclic: bool = False) -> list:
    rng = random.Random(seed)
    return [random_graph(rng, max_vertices, acyclic=acyclic) for _ in range(count)]


def pinned_rayposets() -> list:
    return [(name, ex.obj) for name, ex in ((n, example(n)) for n in NAMES) if ex.kind == "rayposet"]


# --- per-instance checks (None means pass, anything else is the witness) ------------

def _dccthrm(P):
    return None if order_iso(spec_poset(build_EP(P)).as_finite, P) is not None else "no isomorphism"


def _ep_spec_finite(P):
    G = build_EP(P)
    bad = check_EP_postconditions(P, G)
    if bad:
        return bad
    SP = spec_poset(G)
    if any(not isinstance(I, Graded) for I in enumerate_primes(G)):
        return "non-graded prime in the graded regime"
    if set(enumerate_primes(G)) != set(SP.primes):
        return "enumerate_primes disagrees with spec_poset"
    if apply_A_finite(P) != P:
        return "A(P) differs from P"
    if order_iso(SP.as_finite, P) is None:
        return "spectrum not isomorphic to P"
    return None


def _pembeds(P):
    SP = spec_poset(build_EP(P))
    m = ep_embedding(P, SP)
    if not is_order_embedding(m):
        return "p -> <E0 minus M(v_p)> is not an order embedding"
    return None


def _r_a_identity(P):
    back, removed = apply_R(apply_A(P).poset)
    identity = {label: label for label in P.labels}
    if not is_structural_iso(back, P, identity):
        return {"removed": sorted(removed)}
    if structural_iso(back, P) is None:
        return "structural search failed on an identity isomorphism"
    return None


def _ap_cor(P):
    A = apply_A(P).poset
    for prop in ("GLB", "DC", "DD"):
        res = check_property(A, prop)
        if not res.holds:
            return {"property": prop, "witness": res.witness}
    return None


def _ap_prop(P):
    iso = structural_iso(P, apply_A(apply_R(P)[0]).poset) is not None
    props = {p: check_property(P, p).holds for p in ("GLB", "DC", "DD")}
    if iso != all(props.values()):
        return {"iso": iso, **props}
    return None


def _bergman(P):
    a, b = check_property(P, "GLB"), check_property(P, "GLBC")
    return None if a.holds == b.holds else {"GLB": a.holds, "GLBC": b.holds}


def truncation_mismatch(P, depth: int):
    """First pair where leq_realized disagrees with the closed truncation, or None."""
    T = truncate(P, depth)
    for x in T.elements:
        for y in T.elements:
            if T.leq(x, y) != leq_realized(P, x, y):
                return {"depth": depth, "pair": [str(x), str(y)], "truncation": T.leq(x, y)}
    return None


def cover_mismatch(P, depth: int):
    """Compare is_cover with truncation covers on elements deep inside the truncation."""
    T = truncate(P, depth)
    inner = [x for x in T.elements if x.level <= depth - 3]
    for x in inner:
        for y in inner:
            if T.lt(x, y) and is_cover(P, x, y) != _truncation_cover(T, x, y):
                return {"depth": depth, "pair": [str(x), str(y)]}
    return None


def _truncation_cover(T, x, y) -> bool:
    i, j = T.idx(x), T.idx(y)
    return bool(T.cover_masks[j] >> i & 1)


def _kap_iff_dd(P):
    kap = check_property(P, "KAP")
    if not kap.holds:
        return {"KAP": False, "witness": kap.witness}
    if check_property(P, "GLB").holds and check_property(P, "StrongDC").holds:
        if not check_property(P, "DD").holds:
            return {"KAP": True, "DD": False}
    for d in range(3, 7):
        bad = cover_mismatch(P, d)
        if bad:
            return bad
    return None


def _dcc_iff_A(P):
    dcc = check_property(P, "DCC").holds
    ext = apply_A(P).poset
    fixed = structural_iso(ext, P) is not None
    if dcc != fixed:
        return {"DCC": dcc, "A(P) = P": fixed}
    if structural_iso(apply_AC(P), ext) is None:
        return "A and AC disagree"
    return None


def _dcc_iff_A_finite(P):
    dcc = check_property_finite(P, "DCC")
    fixed = apply_A_finite(P) == P
    return None if dcc and fixed else {"DCC": dcc, "A(P) = P": fixed}


def _tail_lemma(G, rng: random.Random):
    tails = list(tail_masks(G))
    k = len(tails)
    if k <= FAMILY_LIMIT:
        families = (
            [tails[i] for i in range(k) if sel >> i & 1] for sel in range(1, 1 << k)
        )
    else:
        families = (rng.sample(tails, rng.randint(1, k)) for _ in range(FAMILY_SAMPLE))
    for fam in families:
        rep = tail_union_check(G, [G.labels(M) for M in fam])
        if not rep.consistent:
            return {
                "family": [sorted(G.labels(M)) for M in fam],
                "MT1": rep.mt1,
                "MT2": rep.mt2,
                "MT3": rep.mt3,
                "cohabit": rep.cohabit,
            }
    return None


def _prime_intersect(G):
    SP = spec_poset(G)
    F = SP.as_finite
    if len(F) > FAMILY_POSET_CAP:
        raise SpectraError(f"spectrum with {len(F)} primes exceeds the family cap")
    for mask in directed_masks(F, FAMILY_POSET_CAP):
        fam = F.labels(mask)
        res = intersect_primes(fam, SP)
        if not res.is_prime or glb(F, fam) != res.ideal:
            return {"family": [sorted(I.H) for I in fam], "prime": res.is_prime}
    return None


# --- driver ----------------------------------------------------------------------

def _instance(obj, name: Optional[str] = None):
    if name is not None:
        return {"example": name}
    if isinstance(obj, RayPoset):
        return io.rayposet_to_json(obj)
    if isinstance(obj, MultiGraph):
        return io.graph_to_json(obj)
    return io.poset_to_json(obj)


def _run(suite: str, corpus_info: dict, items: list, check: Callable) -> dict:
    passes, failures = 0, []
    for name, obj in items:
        try:
            w = check(obj)
        except SpectraError as exc:
            w = {"error": type(exc).__name__, "message": str(exc)}
        if w is None:
            passes += 1
        else:
            failures.append({"instance": _instance(obj, name), "witness": io.jsonable(w)})
    return {"suite": suite, "corpus": corpus_info, "passes": passes, "failures": failures}


def _posets(count, seed):
    info = {"kind": "poset", "count": count, "seed": seed, "max_size": POSET_MAX, "pinned": ["diamond"]}
    items = [("diamond", diamond())] + [(None, P) for P in poset_corpus(count, seed)]
    return info, items


def _rays(count, seed, pinned=True):
    info = {"kind": "rayposet", "count": count, "seed": seed, "max_nodes": RAY_MAX}
    items = [(None, P) for P in ray_corpus(count, seed, RAY_MAX)]
    if pinned:
        pins = pinned_rayposets()
        info["pinned"] = [n for n, _ in pins]
        items = pins + items
    return info, items


def _graphs(count, seed, acyclic=False):
    info = {"kind": "graph", "count": count, "seed": seed, "max_vertices": GRAPH_MAX, "acyclic": acyclic}
    return info, [(None, G) for G in graph_corpus(count, seed, acyclic=acyclic)]


def suite_dccthrm(count=POSET_COUNT, seed=0):
    return _run("dccthrm", *_posets(count, seed), _dccthrm)


def suite_EPspec_finite(count=POSET_COUNT, seed=0):
    return _run("EPspec_finite", *_posets(count, seed), _ep_spec_finite)


def suite_PembedsinSpec(count=POSET_COUNT, seed=0):
    return _run("PembedsinSpec", *_posets(count, seed), _pembeds)


def suite_R_A_identity(count=RAY_COUNT, seed=0):
    return _run("R_A_identity", *_rays(count, seed), _r_a_identity)


def suite_APprop(count=RAY_COUNT, seed=0):
    return _run("APprop", *_rays(count, seed), _ap_prop)


def suite_APcor(count=RAY_COUNT, seed=0):
    return _run("APcor", *_rays(count, seed), _ap_cor)


def suite_bergman(count=RAY_COUNT, seed=0):
    return _run("bergman", *_rays(count, seed), _bergman)


def suite_KAPiffDD(count=RAY_COUNT, seed=0):
    return _run("KAPiffDD", *_rays(count, seed), _kap_iff_dd)


def suite_dcciffA(count=RAY_COUNT, seed=0):
    ray_info, ray_items = _rays(count, seed)
    fin_info, fin_items = _posets(count, seed)
    a = _run("dcciffA", ray_info, ray_items, _dcc_iff_A)
    b = _run("dcciffA", fin_info, fin_items, _dcc_iff_A_finite)
    return {
        "suite": "dcciffA",
        "corpus": {"rayposets": ray_info, "posets": fin_info},
        "passes": a["passes"] + b["passes"],
        "failures": a["failures"] + b["failures"],
    }


def suite_taillemma(count=GRAPH_COUNT, seed=0):
    rng = random.Random(seed + 1)
    info, items = _graphs(count, seed)
    info["family_limit"] = FAMILY_LIMIT
    info["family_sample"] = FAMILY_SAMPLE
    return _run("taillemma", info, items, lambda G: _tail_lemma(G, rng))


def suite_primeintersect(count=GRAPH_COUNT, seed=0):
    info, items = _graphs(count, seed, acyclic=True)
    graded = [(n, G) for n, G in items if in_graded_regime(G)]
    info["graded"] = len(graded)
    items = [("UnionEgTrunc", example("UnionEgTrunc").obj)] + graded
    info["pinned"] = ["UnionEgTrunc"]
    return _run("primeintersect", info, items, _prime_intersect)


SUITES = {
    "dccthrm": suite_dccthrm,
    "EPspec_finite": suite_EPspec_finite,
    "PembedsinSpec": suite_PembedsinSpec,
    "R_A_identity": suite_R_A_identity,
    "APprop": suite_APprop,
    "APcor": suite_APcor,
    "bergman": suite_bergman,
    "taillemma": suite_taillemma,
    "primeintersect": suite_primeintersect,
    "KAPiffDD": suite_KAPiffDD,
    "dcciffA": suite_dcciffA,
}


def verify(name: str, count: Optional[int] = None, seed: int = 0) -> dict:
    try:
        fn = SUITES[name]
    except KeyError:
        raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(SUITES)}") from None
    return fn(seed=seed) if count is None else fn(count=count, seed=seed)


def truncation_suite(count=RAY_COUNT, seed=0, max_depth=6) -> dict:
    """leq_realized against every truncation up to ``max_depth``."""

    def check(P):
        for d in range(1, max_depth + 1):
            bad = truncation_mismatch(P, d)
            if bad:
                return bad
        return None

    return _run("truncation", *_rays(count, seed), check)

