import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkbuild.experiments import find_nonsubmodular_witness, random_digraph, recheck_witness
from linkbuild.families import cycle_vs_sink, sink_vs_sink
from linkbuild.graph import build_graph, with_backlinks
from linkbuild.selectors import (
    SelectionError,
    candidate_set,
    exhaustive_select,
    naive_select,
    pi_greedy_select,
    r_greedy_select,
    select,
)
from linkbuild.surfer import SurferParams, pagerank, surfer_metrics
from oracles import dense_pagerank

P = SurferParams()


@st.composite
def small_instances(draw, max_n=9, k_max=3):
    n = draw(st.integers(3, max_n))
    p = draw(st.sampled_from([0.1, 0.3, 0.5]))
    g = random_digraph(np.random.default_rng(draw(st.integers(0, 2**32 - 1))), n, p)
    x = draw(st.integers(0, n - 1))
    cands = candidate_set(g, x)
    if cands.shape[0] == 0:
        g = build_graph(n, [])
        cands = candidate_set(g, x)
    k = draw(st.integers(1, min(k_max, cands.shape[0])))
    return g, x, k


# candidates

def test_star_has_no_candidates():
    g = build_graph(4, [(1, 0), (2, 0), (3, 0)])
    assert candidate_set(g, 0).tolist() == []


def test_isolated_target_candidates():
    assert candidate_set(build_graph(3, []), 0).tolist() == [1, 2]


def test_existing_backlink_excluded():
    assert candidate_set(build_graph(3, [(1, 0)]), 0).tolist() == [2]


@pytest.mark.parametrize("strategy", ["naive", "rgreedy", "pigreedy", "exhaustive"])
def test_budget_too_large(strategy):
    g = build_graph(3, [(1, 0)])
    with pytest.raises(SelectionError, match="k=2 exceeds the 1 available"):
        select(strategy, g, 0, 2, P)


def test_unknown_strategy():
    with pytest.raises(SelectionError, match="unknown strategy"):
        select("bogus", build_graph(2, []), 0, 1, P)


# naive

def test_naive_only_candidate():
    assert naive_select(build_graph(2, [(0, 1)]), 0, 1, P).sources == (1,)


def test_naive_prefers_sink_by_hand():
    # pi = [20, 37, 20] / 77; scores 37/77 for the sink and (20/77)/2 for node 2
    edges = [(2, 1)]
    np.testing.assert_allclose(dense_pagerank(3, edges, 0.85), np.array([20, 37, 20]) / 77, atol=1e-14)
    res = naive_select(build_graph(3, edges), 0, 1, P)
    assert res.sources == (1,)
    assert res.trace[0].value == pytest.approx(37 / 77, abs=1e-12)


def test_naive_ties_go_to_smallest_ids():
    g = build_graph(6, [])
    assert naive_select(g, 0, 3, P).sources == (1, 2, 3)


def test_naive_takes_cycle_nodes():
    inst = cycle_vs_sink(20, 5, delta=0.01)
    res = naive_select(inst.graph, inst.target, 5, P)
    assert res.source_set == frozenset(inst.roles["cycle"].tolist())


# r-Greedy

def test_rgreedy_prefers_tailed_sink():
    # node 1 is a sink with a 3-node tail 2->1, 3->1, 4->1; node 5 is a bare sink
    g = build_graph(6, [(2, 1), (3, 1), (4, 1)])
    res = r_greedy_select(g, 0, 1, P)
    r = {u: surfer_metrics(with_backlinks(g, [u], 0), 0).r_x for u in (1, 5)}
    assert r[1] > r[5]
    assert res.sources == (1,)


def test_rgreedy_takes_light_nodes():
    inst = sink_vs_sink(10, 5)
    res = r_greedy_select(inst.graph, inst.target, 5, P)
    assert res.source_set == frozenset(inst.roles["light"].tolist())


def test_rgreedy_rejects_unknown_mode():
    with pytest.raises(ValueError):
        r_greedy_select(build_graph(3, []), 0, 1, P, evaluation="lazy")


@given(small_instances(max_n=12))
@settings(max_examples=150, deadline=None)
def test_pruned_equals_full(case):
    g, x, k = case
    a = r_greedy_select(g, x, k, P, evaluation="pruned")
    b = r_greedy_select(g, x, k, P, evaluation="full")
    assert a.sources == b.sources
    assert [s.value for s in a.trace] == pytest.approx([s.value for s in b.trace], rel=1e-12)


@given(small_instances())
@settings(max_examples=60, deadline=None)
def test_rgreedy_trace_non_decreasing(case):
    g, x, k = case
    res = r_greedy_select(g, x, k, P)
    vals = [s.value for s in res.trace]
    assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))


@given(small_instances())
@settings(max_examples=60, deadline=None)
def test_rgreedy_trace_is_pi_over_z(case):
    g, x, k = case
    res = r_greedy_select(g, x, k, P)
    h = with_backlinks(g, res.sources, x)
    assert res.trace[-1].value == pytest.approx(surfer_metrics(h, x).pi_over_z, rel=1e-10)


def test_workers_do_not_change_output():
    inst = sink_vs_sink(6, 3)
    one = r_greedy_select(inst.graph, 0, 3, P, evaluation="full", workers=1)
    four = r_greedy_select(inst.graph, 0, 3, P, evaluation="full", workers=4)
    assert one == four
    assert pi_greedy_select(inst.graph, 0, 2, P, workers=3) == pi_greedy_select(inst.graph, 0, 2, P)


# pi-greedy and exhaustive

@given(small_instances(k_max=1))
@settings(max_examples=60, deadline=None)
def test_pigreedy_one_step_is_exact(case):
    g, x, _ = case
    assert pi_greedy_select(g, x, 1, P).sources == exhaustive_select(g, x, 1, P).sources


def test_pigreedy_takes_shaded_nodes():
    inst = sink_vs_sink(10, 5)
    res = pi_greedy_select(inst.graph, inst.target, 5, P)
    assert res.source_set == frozenset(inst.roles["shaded"].tolist())


@given(small_instances())
@settings(max_examples=40, deadline=None)
def test_selection_never_lowers_pi_x(case):
    g, x, k = case
    for fn in (naive_select, r_greedy_select, pi_greedy_select):
        res = fn(g, x, k, P)
        assert res.final_pi_x >= res.initial_pi_x - 1e-12


def test_exhaustive_full_budget():
    g = build_graph(5, [(1, 2), (3, 0)])
    assert exhaustive_select(g, 0, 3, P).sources == (1, 2, 4)


@given(small_instances(max_n=7))
@settings(max_examples=40, deadline=None)
def test_exhaustive_is_optimal(case):
    g, x, k = case
    res = exhaustive_select(g, x, k, P)
    best = max(
        pagerank(with_backlinks(g, S, x), P)[x]
        for S in itertools.combinations(candidate_set(g, x).tolist(), k)
    )
    assert res.final_pi_x == pytest.approx(best, abs=1e-12)
    for fn in (naive_select, r_greedy_select, pi_greedy_select):
        assert fn(g, x, k, P).final_pi_x <= res.final_pi_x + 1e-12


def test_exhaustive_cap():
    g = build_graph(30, [])
    with pytest.raises(SelectionError, match="enumeration cap"):
        exhaustive_select(g, 0, 5, P, cap=1000)


def test_exhaustive_takes_shaded_nodes():
    inst = sink_vs_sink(2, 2)
    assert exhaustive_select(inst.graph, 0, 2, P).source_set == frozenset(inst.roles["shaded"].tolist())


@pytest.mark.parametrize("u", [2, 3])
def test_exhaustive_takes_sink_nodes(u):
    inst = cycle_vs_sink(u, 2, delta=0.01)
    res = exhaustive_select(inst.graph, 0, 2, P)
    assert res.source_set == frozenset(inst.roles["sink"].tolist())


# pi_x is not submodular in the backlink set

def test_witness_found_and_rechecks():
    w = find_nonsubmodular_witness()
    assert w is not None
    assert set(w.small) < set(w.large)
    assert w.gain_large > w.gain_small
    assert recheck_witness(w)
    pi = lambda S: dense_pagerank(w.graph.n, [tuple(e) for e in with_backlinks(w.graph, S, w.target).edges()], 0.85)[w.target]
    late = pi(w.large + (w.y,)) - pi(w.large)
    early = pi(w.small + (w.y,)) - pi(w.small)
    assert late > early


def test_witness_search_tiny_bound():
    assert find_nonsubmodular_witness(max_n=2) is None
