import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from spectra.errors import MixedGraphs, NoSuchPrime, NotGradedRegime, UnknownPrime
from spectra.examples import diamond, union_eg_trunc
from spectra.graph import INF, MultiGraph, random_graph
from spectra.order import antichain, chain, is_order_embedding, order_iso, validate_poset
from spectra.spectrum import (
    BreakingOmitted,
    CycleFamily,
    Graded,
    build_EP,
    check_Mu_prop,
    enumerate_primes,
    ep_embedding,
    in_graded_regime,
    intersect_H,
    intersect_primes,
    max_prime_avoiding,
    not_locally_closed,
    spec_poset,
    WholeRing,
)
from spectra.verify import random_poset

seeds = st.integers(min_value=0, max_value=10**6)


def graded_graph(seed, n=6):
    rng = random.Random(seed)
    while True:
        G = random_graph(rng, n, acyclic=True)
        if in_graded_regime(G):
            return G


# --- E_P ---------------------------------------------------------------------------------

def test_ep_of_diamond():
    G = build_EP(diamond())
    assert {(u, v): m for u, v, m in G.edges()} == {
        ("v_p", "v_q"): INF,
        ("v_p", "v_r"): INF,
        ("v_p", "v_s"): INF,
        ("v_q", "v_s"): INF,
        ("v_r", "v_s"): INF,
    }


def test_ep_of_trivial_posets():
    assert build_EP(chain(["a"])).edges() == []
    G = build_EP(antichain(["a", "b"]))
    assert G.vertices == ("v_a", "v_b") and G.edges() == []


# --- the classification -------------------------------------------------------------------

def brute_primes(G):
    """Classification read off the definitions, using the slow oracles."""
    from itertools import product

    out = set()
    V = set(G.vertices)
    cyc = []
    # vertex-simple cycles up to rotation, by brute force over vertex sequences
    for k in range(1, len(V) + 1):
        for seq in product(G.vertices, repeat=k):
            if len(set(seq)) == k and seq[0] == min(seq, key=G.vertices.index):
                if all(G.m(a, b) for a, b in zip(seq, seq[1:] + seq[:1])):
                    cyc.append(seq)
    for H in oracles.hs_sets(G):
        comp = V - H
        up = lambda u: {w for w in V if oracles.geq(G, w, u)}  # noqa: E731
        if comp and oracles.mt3(G, comp):
            out.add(("Graded", H))
        for u in oracles.breaking(G, H):
            if up(u) == comp:
                out.add(("BreakingOmitted", H, u))
        for c in cyc:
            mults = [G.m(a, b) for a, b in zip(c, c[1:] + c[:1])]
            others = [d for d in cyc if d != c and set(d) & set(c)]
            if mults == [1] * len(c) and not others and up(c[0]) == comp:
                out.add(("CycleFamily", H, c))
    return out


def descr(I):
    if isinstance(I, Graded):
        return ("Graded", I.H)
    if isinstance(I, BreakingOmitted):
        return ("BreakingOmitted", I.H, I.omitted)
    return ("CycleFamily", I.H, I.cycle)


ONE_LOOP = MultiGraph(["v"], {("v", "v"): 1})
TWO_LOOPS = MultiGraph(["v"], {("v", "v"): 2})
EMITTER = MultiGraph(["w", "a", "b"], {("w", "a"): INF, ("w", "b"): 1})

# frozen from brute_primes before the package implementation was trusted
FROZEN = {
    "one_loop": {("Graded", frozenset()), ("CycleFamily", frozenset(), ("v",))},
    "two_loops": {("Graded", frozenset())},
    # H = {} fails: a and b have no common lower vertex; B_{a} = {w} but M(w) = {w}
    "emitter": {
        ("Graded", frozenset({"a"})),
        ("Graded", frozenset({"b"})),
        ("Graded", frozenset({"a", "b"})),
    },
}


@pytest.mark.parametrize("name,G", [("one_loop", ONE_LOOP), ("two_loops", TWO_LOOPS), ("emitter", EMITTER)])
def test_rangaswamy_examples(name, G):
    assert brute_primes(G) == FROZEN[name]
    assert {descr(I) for I in enumerate_primes(G)} == FROZEN[name]


def test_one_loop_cycle_family_is_symbolic():
    fam = [I for I in enumerate_primes(ONE_LOOP) if isinstance(I, CycleFamily)]
    assert len(fam) == 1 and "irreducible" in fam[0].parameter


def test_breaking_vertex_gives_omitted_prime():
    # loop at u plus infinitely many edges u -> a; for H = {a}, u is breaking and
    # the complement {u} is exactly the set above u
    G = MultiGraph(["u", "a"], {("u", "u"): 1, ("u", "a"): INF})
    want = {
        ("Graded", frozenset()),
        ("Graded", frozenset({"a"})),
        ("BreakingOmitted", frozenset({"a"}), "u"),
        ("CycleFamily", frozenset({"a"}), ("u",)),
    }
    assert brute_primes(G) == want
    assert {descr(I) for I in enumerate_primes(G)} == want


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_classification_matches_brute_force(seed):
    G = random_graph(random.Random(seed), 5)
    assert {descr(I) for I in enumerate_primes(G)} == brute_primes(G)


# --- spectrum posets --------------------------------------------------------------------------

def test_spec_of_diamond_ep():
    SP = spec_poset(build_EP(diamond()))
    assert len(SP) == 4
    assert order_iso(SP.as_finite, diamond()) is not None


def test_spec_single_vertex():
    SP = spec_poset(MultiGraph(["v"]))
    assert SP.primes == (Graded(frozenset()),)


def test_spec_union_eg():
    G = union_eg_trunc()
    SP = spec_poset(G)
    Hs = [I.H for I in SP.primes]
    assert Hs[:3] == [frozenset(), {"v1"}, {"v1", "v2"}]
    assert set(Hs[3:]) == {frozenset({"u1", "v1", "v2", "v3"}), frozenset({"u2", "v1", "v2", "v3"})}
    F = SP.as_finite
    assert F.leq(SP.primes[0], SP.primes[1]) and F.leq(SP.primes[2], SP.primes[3])
    assert not F.leq(SP.primes[3], SP.primes[4]) and not F.leq(SP.primes[4], SP.primes[3])


def test_spec_refuses_non_graded():
    with pytest.raises(NotGradedRegime) as exc:
        spec_poset(ONE_LOOP)
    assert exc.value.witness == ("v",)
    with pytest.raises(NotGradedRegime):
        spec_poset(EMITTER)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_dccthrm_and_embedding(seed):
    P = random_poset(random.Random(seed), 6)
    SP = spec_poset(build_EP(P))
    assert order_iso(SP.as_finite, P) is not None
    assert is_order_embedding(ep_embedding(P, SP))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_enumerate_agrees_with_spec_in_graded_regime(seed):
    G = graded_graph(seed)
    assert set(enumerate_primes(G)) == set(spec_poset(G).primes)


# --- intersections -----------------------------------------------------------------------------

def test_intersect_single():
    SP = spec_poset(union_eg_trunc())
    I = SP.primes[2]
    res = intersect_primes([I], SP)
    assert res.is_prime and res.ideal == I


def test_intersect_union_eg_tops():
    G = union_eg_trunc()
    SP = spec_poset(G)
    res = intersect_primes(SP.primes[3:], SP)
    assert res.ideal.H == {"v1", "v2", "v3"}
    assert not res.is_prime and res.witness == ("u1", "u2")


def test_intersect_mixed_graphs():
    A = spec_poset(union_eg_trunc()).primes[0]
    B = spec_poset(MultiGraph(["v"])).primes[0]
    with pytest.raises(MixedGraphs):
        intersect_primes([A, B])


def test_empty_intersection_is_whole_ring():
    assert intersect_H([]) is WholeRing


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_directed_chains_intersect_to_glb(seed):
    G = graded_graph(seed)
    SP = spec_poset(G)
    F = SP.as_finite
    for fam in oracles.subsets(SP.primes):
        if oracles.directed(F, fam):
            res = intersect_primes(fam, SP)
            assert res.is_prime and res.ideal == oracles.glb(F, fam)


# --- locally closed, avoiding primes, and the M(u) clause -----------------------------------

def test_maximal_prime_is_locally_closed():
    SP = spec_poset(union_eg_trunc())
    assert not not_locally_closed(SP, SP.primes[-1])
    with pytest.raises(UnknownPrime):
        not_locally_closed(SP, Graded(frozenset({"u1"}), SP.graph))


def test_three_chain_by_definition():
    G = MultiGraph(["a", "b", "c"], {("a", "b"): INF, ("b", "c"): INF})
    SP = spec_poset(G)
    assert [I.H for I in SP.primes] == [frozenset(), {"c"}, {"b", "c"}]
    zero = SP.primes[0]
    assert not_locally_closed(SP, zero) == (SP.primes[1].H == frozenset())
    assert not not_locally_closed(SP, zero)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_finite_spectra_have_no_non_locally_closed_primes(seed):
    SP = spec_poset(graded_graph(seed))
    assert not any(not_locally_closed(SP, I) for I in SP.primes)


def test_max_prime_avoiding_examples():
    SP = spec_poset(build_EP(diamond()))
    zero = SP.prime([])
    assert max_prime_avoiding(SP, "v_s", zero) == zero
    assert max_prime_avoiding(SP, "v_p", zero).H == {"v_s", "v_q", "v_r"}
    one = spec_poset(MultiGraph(["v"]))
    assert max_prime_avoiding(one, "v", one.primes[0]) == one.primes[0]
    U = spec_poset(union_eg_trunc())
    assert max_prime_avoiding(U, "v1", U.prime([])).H == frozenset()
    assert max_prime_avoiding(U, "v2", U.prime([])).H == {"v1"}
    with pytest.raises(NoSuchPrime):
        max_prime_avoiding(U, "v1", U.prime(["v1"]))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_max_prime_avoiding_is_maximal(seed):
    SP = spec_poset(graded_graph(seed))
    for I in SP.primes:
        for v in SP.graph.vertices:
            if v in I.H:
                continue
            J = max_prime_avoiding(SP, v, I)
            assert I.H <= J.H and v not in J.H
            assert not any(J.H < K.H and v not in K.H for K in SP.primes)


def test_mu_prop_on_ep_and_sinks():
    assert check_Mu_prop(build_EP(diamond()))["holds"]
    assert check_Mu_prop(MultiGraph(["a", "b"]))["holds"]


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_mu_prop_on_graded_graphs(seed):
    rep = check_Mu_prop(graded_graph(seed))
    assert rep["holds"], rep["violations"]


def test_spec_of_generic_poset():
    P = validate_poset(["a", "b", "c"], [("a", "c"), ("b", "c")])
    assert order_iso(spec_poset(build_EP(P)).as_finite, P) is not None
