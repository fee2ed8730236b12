import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from spectra.errors import CapExceeded, NotATail, NotHereditarySaturated, UnknownVertex
from spectra.examples import UNION_EG_TAILS, diamond, union_eg_trunc
from spectra.graph import (
    INF,
    MultiGraph,
    big_M,
    breaking_vertices,
    cycles,
    hereditary_closure,
    hereditary_saturated_sets,
    is_hereditary,
    is_saturated,
    maximal_tails,
    random_graph,
    reaches,
    saturated_closure,
    tail_union_check,
    wk_cycles,
)
from spectra.spectrum import build_EP

seeds = st.integers(min_value=0, max_value=10**6)


def graph(seed, n=6, acyclic=False):
    return random_graph(random.Random(seed), n, acyclic=acyclic)


def sets(xs):
    return {frozenset(x) for x in xs}


# --- degrees and reachability -------------------------------------------------------

def test_vertex_kinds():
    G = MultiGraph(["w", "a", "b"], {("w", "a"): INF, ("w", "b"): 1, ("a", "b"): 2})
    assert G.is_infinite_emitter("w") and not G.is_regular("w")
    assert G.is_regular("a") and G.out_degree("a") == 2
    assert G.is_sink("b") and not G.is_regular("b")


def test_reachability_basics():
    G = MultiGraph(["v"])
    assert big_M(G, "v") == {"v"}
    H = MultiGraph(["a", "b"])
    assert not reaches(H, "a", "b")
    with pytest.raises(UnknownVertex):
        reaches(H, "a", "z")


def test_big_M_of_diamond_bottom():
    G = build_EP(diamond())
    assert big_M(G, "v_s") == {"v_s", "v_q", "v_r", "v_p"}


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_reaches_matches_search(seed):
    G = graph(seed, 7)
    for u in G.vertices:
        for v in G.vertices:
            assert reaches(G, u, v) == oracles.geq(G, u, v)


# --- hereditary and saturated --------------------------------------------------------

def test_hs_sets_of_two_chain():
    G = MultiGraph(["a", "b"], {("a", "b"): 1})
    # {b} is hereditary but not saturated: a is regular and all its edges land in {b}
    assert sets(hereditary_saturated_sets(G)) == sets([[], ["a", "b"]])
    assert is_hereditary(G, ["b"]) and not is_saturated(G, ["b"])
    assert not is_hereditary(G, ["a"])


def test_hs_sets_single_vertex():
    assert sets(hereditary_saturated_sets(MultiGraph(["v"]))) == sets([[], ["v"]])


def test_saturated_closure_pulls_in_regular_vertex():
    G = MultiGraph(["v", "a", "b"], {("v", "a"): 1, ("v", "b"): 2})
    assert saturated_closure(G, ["a", "b"]) == {"a", "b", "v"}
    assert not is_saturated(G, ["a", "b"])
    # an infinite emitter is never forced in
    G2 = MultiGraph(["v", "a"], {("v", "a"): INF})
    assert saturated_closure(G2, ["a"]) == {"a"}


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_hs_sets_match_definition(seed):
    G = graph(seed, 6)
    assert sets(hereditary_saturated_sets(G)) == oracles.hs_sets(G)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(min_value=0, max_value=63))
def test_closures_are_closure_operators(seed, sel):
    G = graph(seed, 6)
    X = {v for i, v in enumerate(G.vertices) if sel >> i & 1}
    for close in (hereditary_closure, saturated_closure):
        C = close(G, X)
        assert X <= C
        assert close(G, C) == C
        bigger = C | set(G.vertices[:1])
        assert C <= close(G, bigger)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_complement_duality(seed):
    G = graph(seed, 6)
    V = set(G.vertices)
    for M in oracles.subsets(G.vertices, nonempty=False):
        M = set(M)
        assert oracles.mt1(G, M) == oracles.hereditary(G, V - M)
        assert oracles.mt2(G, M) == oracles.saturated(G, V - M)


# --- maximal tails ---------------------------------------------------------------------

def test_tails_of_single_vertex():
    assert sets(maximal_tails(MultiGraph(["v"]))) == sets([["v"]])


def test_tails_of_ep_diamond():
    G = build_EP(diamond())
    assert sets(maximal_tails(G)) == {frozenset(big_M(G, v)) for v in G.vertices}


def test_union_eg_tails():
    assert sets(maximal_tails(union_eg_trunc())) == sets(UNION_EG_TAILS)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_tails_match_definition(seed):
    G = graph(seed, 6)
    assert sets(maximal_tails(G)) == oracles.maximal_tails(G)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_big_M_is_mt1_and_mt3(seed):
    G = graph(seed, 6)
    for v in G.vertices:
        M = big_M(G, v)
        assert M and oracles.mt1(G, M) and oracles.mt3(G, M)


def test_cap():
    G = MultiGraph([str(i) for i in range(5)])
    with pytest.raises(CapExceeded):
        list(maximal_tails(G, cap=4))


# --- breaking vertices -------------------------------------------------------------------

def test_breaking_vertex_example():
    G = MultiGraph(["w", "a", "b"], {("w", "a"): INF, ("w", "b"): 1})
    assert breaking_vertices(G, ["a"]) == {"w"}
    assert breaking_vertices(G, []) == set()
    with pytest.raises(NotHereditarySaturated):
        breaking_vertices(G, ["w"])


def test_no_breaking_vertices_without_infinite_emitters():
    G = MultiGraph(["a", "b", "c"], {("a", "b"): 2, ("b", "c"): 1, ("a", "c"): 1})
    for H in hereditary_saturated_sets(G):
        assert breaking_vertices(G, H) == set()


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_breaking_matches_definition(seed):
    G = graph(seed, 6)
    for H in hereditary_saturated_sets(G):
        assert breaking_vertices(G, H) == oracles.breaking(G, H)


# --- cycles -----------------------------------------------------------------------------

def test_single_loop_is_wk():
    G = MultiGraph(["v"], {("v", "v"): 1})
    assert [c.vertices for c in cycles(G)] == [("v",)]
    assert [c.vertices for c in wk_cycles(G)] == [("v",)]


def test_double_loop_is_not_wk():
    G = MultiGraph(["v"], {("v", "v"): 2})
    assert wk_cycles(G) == []


def test_cycle_with_exit_to_other_cycle():
    G = MultiGraph(["a", "b"], {("a", "b"): 1, ("b", "a"): 1, ("a", "a"): 1})
    assert {c.vertices for c in cycles(G)} == {("a",), ("a", "b")}
    assert wk_cycles(G) == []


def test_two_disjoint_cycles_are_both_wk():
    G = MultiGraph(["a", "b", "c"], {("a", "b"): 1, ("b", "a"): 1, ("c", "c"): 1, ("a", "c"): 1})
    assert [c.vertices for c in wk_cycles(G)] == [("a", "b"), ("c",)]


def test_acyclic_ep_has_no_cycles():
    assert cycles(build_EP(diamond())) == []


# --- tail unions --------------------------------------------------------------------------

def test_union_of_one_tail():
    G = union_eg_trunc()
    rep = tail_union_check(G, [{"u1"}])
    assert rep.mt1 and rep.mt2 and rep.mt3 and rep.cohabit


def test_union_eg_tops_fail_mt3():
    G = union_eg_trunc()
    rep = tail_union_check(G, [{"u1"}, {"u2"}])
    assert rep.mt1 and rep.mt2 and not rep.mt3
    assert rep.mt3_witness == ("u1", "u2")
    assert rep.consistent


def test_nested_union():
    G = union_eg_trunc()
    rep = tail_union_check(G, [{"u1", "u2", "v3"}, {"u1", "u2", "v2", "v3"}])
    assert rep.mt3 and rep.cohabit


def test_non_tail_rejected():
    with pytest.raises(NotATail):
        tail_union_check(union_eg_trunc(), [{"v1"}])
