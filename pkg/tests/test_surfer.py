import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkbuild.graph import add_edge, build_graph, with_backlinks
from linkbuild.surfer import (
    ConvergenceError,
    SurferParams,
    pagerank,
    reach_probabilities,
    reachability,
    stationarity_residual,
    surfer_metrics,
    transition_row,
    visit_mass,
    visits_zxx,
)
from oracles import dense_pagerank, dense_reach, dense_visits, random_edges

ALPHA = 0.85


@st.composite
def instances(draw, max_n=15, self_loops=False):
    n = draw(st.integers(2, max_n))
    p = draw(st.sampled_from([0.1, 0.3, 0.5]))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    edges = random_edges(rng, n, p, self_loops=self_loops)
    x = draw(st.integers(0, n - 1))
    alpha = draw(st.sampled_from([0.5, 0.85, 0.95]))
    return n, edges, x, alpha


# transition rows

def test_row_with_link():
    g = build_graph(2, [(0, 1)])
    np.testing.assert_allclose(transition_row(g, 0, ALPHA), [0.075, 0.925], atol=1e-15)


def test_row_of_sink_is_uniform():
    g = build_graph(2, [(0, 1)])
    np.testing.assert_allclose(transition_row(g, 1, ALPHA), [0.5, 0.5], atol=1e-15)


@given(instances())
@settings(max_examples=50)
def test_rows_stochastic(inst):
    n, edges, _, alpha = inst
    g = build_graph(n, edges)
    for i in range(n):
        assert abs(transition_row(g, i, alpha).sum() - 1.0) < 1e-14


# pagerank

def test_pagerank_single_node():
    np.testing.assert_allclose(pagerank(build_graph(1, [])), [1.0])


def test_pagerank_two_nodes():
    # exact: 20/57, 37/57
    pi = pagerank(build_graph(2, [(0, 1)]))
    np.testing.assert_allclose(pi, [20 / 57, 37 / 57], atol=1e-12)
    assert abs(pi[0] - 0.35088) < 1e-5


@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.85, 0.99])
def test_pagerank_cycle_uniform(alpha):
    pi = pagerank(build_graph(3, [(0, 1), (1, 2), (2, 0)]), SurferParams(alpha=alpha))
    np.testing.assert_allclose(pi, [1 / 3] * 3, atol=1e-14)


@given(instances(max_n=30, self_loops=True))
@settings(max_examples=60)
def test_pagerank_matches_dense_solve(inst):
    n, edges, _, alpha = inst
    g = build_graph(n, edges)
    pi = pagerank(g, SurferParams(alpha=alpha))
    assert abs(pi.sum() - 1.0) < 1e-12
    assert (pi > 0).all()
    np.testing.assert_allclose(pi, dense_pagerank(n, edges, alpha), atol=1e-11)
    assert stationarity_residual(g, pi, alpha) <= 1e-12


def test_pagerank_nonconvergence_is_reported():
    g = build_graph(3, [(0, 1), (1, 2)])
    with pytest.raises(ConvergenceError) as info:
        pagerank(g, SurferParams(alpha=0.99, tol=1e-15, max_iter=3))
    assert info.value.iterations == 3


@pytest.mark.parametrize("kw", [dict(alpha=0.0), dict(alpha=1.0), dict(tol=0.0), dict(max_iter=0)])
def test_params_validated(kw):
    with pytest.raises(ValueError):
        SurferParams(**kw)


# reach probabilities

def test_reach_single_hop():
    g = build_graph(3, [(1, 0)])
    assert reach_probabilities(g, 0)[1] == pytest.approx(0.85, abs=1e-12)


def test_reach_unreachable_is_zero():
    g = build_graph(3, [(1, 2), (2, 1)])
    assert reach_probabilities(g, 0)[1] == 0.0


def test_reach_mutual_sinks():
    # f_1 = a/2 (1 + f_1)  ->  f_1 = a / (2 - a) = 17/23
    g = build_graph(2, [])
    assert reach_probabilities(g, 0)[1] == pytest.approx(17 / 23, abs=1e-12)


@given(instances())
@settings(max_examples=60)
def test_reach_matches_dense(inst):
    n, edges, x, alpha = inst
    f = reach_probabilities(build_graph(n, edges), x, alpha)
    np.testing.assert_allclose(f, dense_reach(n, edges, x, alpha), atol=1e-11)
    assert f[x] == 1.0
    assert ((f >= 0) & (f <= 1)).all()


# visits z_xx

def test_z_without_return_paths():
    g = build_graph(3, [(0, 1), (1, 2), (2, 1)])
    assert visits_zxx(g, 0) == pytest.approx(1.0, abs=1e-12)


def test_z_two_cycle_attains_bound():
    g = build_graph(2, [(0, 1), (1, 0)])
    for method in ("return", "series"):
        assert visits_zxx(g, 0, method=method) == pytest.approx(1 / (1 - ALPHA**2), abs=1e-10)
    assert visits_zxx(g, 0) == pytest.approx(3.6036, abs=1e-4)


def test_z_into_sink():
    # rho = a * f_1 with f_1 = a/2 (1 + f_1) -> 17/23, so z = 1/(1 - 0.85*17/23)
    g = build_graph(2, [(0, 1)])
    expected = 1.0 / (1.0 - ALPHA * 17 / 23)
    assert visits_zxx(g, 0) == pytest.approx(expected, abs=1e-12)
    assert visits_zxx(g, 0) == pytest.approx(2.6900584795, abs=1e-9)
    assert dense_visits(2, [(0, 1)], ALPHA)[0, 0] == pytest.approx(expected, abs=1e-12)


def test_z_unknown_method():
    with pytest.raises(ValueError):
        visits_zxx(build_graph(2, []), 0, method="magic")


@given(instances(self_loops=True))
@settings(max_examples=60)
def test_z_methods_agree_with_dense(inst):
    n, edges, x, alpha = inst
    g = build_graph(n, edges)
    z_dense = dense_visits(n, edges, alpha)[x, x]
    assert visits_zxx(g, x, alpha) == pytest.approx(z_dense, abs=1e-10)
    assert visits_zxx(g, x, alpha, method="series") == pytest.approx(z_dense, abs=1e-10)


@given(instances())
@settings(max_examples=100)
def test_z_bounds_when_returns_take_two_steps(inst):
    n, edges, x, alpha = inst
    g = build_graph(n, edges)
    if g.sinks[x]:
        g = add_edge(g, x, (x + 1) % n)
    z = visits_zxx(g, x, alpha)
    assert 1.0 <= z <= 1.0 / (1.0 - alpha**2) + 1e-12


def test_self_loop_can_exceed_two_cycle_bound():
    g = build_graph(1, [(0, 0)])
    assert visits_zxx(g, 0) > 1.0 / (1.0 - ALPHA**2)


def test_sink_target_can_exceed_two_cycle_bound():
    # a sink jumps back to itself with probability alpha/n in one step
    g = build_graph(2, [(1, 0)])
    rho = 0.5 * (1 + 0.5) / 2
    assert visits_zxx(g, 0, 0.5) == pytest.approx(1 / (1 - rho), abs=1e-12)
    assert visits_zxx(g, 0, 0.5) > 1 / (1 - 0.25)


# reachability and the pi_x identity

def test_isolated_reachability():
    # no sinks besides x, otherwise their uniform jump reaches x
    assert reachability(build_graph(4, [(1, 2), (2, 3), (3, 1)]), 0) == pytest.approx(1.0)


@pytest.mark.parametrize("k", [1, 3, 7])
def test_star_reachability(k):
    g = build_graph(k + 1, [(i, 0) for i in range(1, k + 1)])
    assert reachability(g, 0) == pytest.approx(1 + k * ALPHA, abs=1e-12)


@given(instances(max_n=30, self_loops=True))
@settings(max_examples=80)
def test_pi_identity(inst):
    n, edges, x, alpha = inst
    g = build_graph(n, edges)
    m = surfer_metrics(g, x, alpha)
    pi = pagerank(g, SurferParams(alpha=alpha))
    assert abs(m.pi_x - pi[x]) <= 1e-12
    assert m.pi_over_z == pytest.approx((1 - alpha) / n * m.r_x, rel=1e-14)


# visit mass (used to bound r-Greedy gains)

@given(instances())
@settings(max_examples=40)
def test_visit_mass_matches_dense(inst):
    n, edges, x, alpha = inst
    from oracles import dense_walk
    P = dense_walk(n, edges)
    keep = [i for i in range(n) if i != x]
    M = np.linalg.inv(np.eye(n - 1) - alpha * P[np.ix_(keep, keep)])
    expected = np.zeros(n)
    expected[keep] = M.sum(axis=0)
    np.testing.assert_allclose(visit_mass(build_graph(n, edges), x, alpha), expected, rtol=1e-10)


# structural properties of reach under added backlinks

@st.composite
def nested_sets(draw, max_n=15):
    n, edges, x, alpha = draw(instances(max_n=max_n))
    others = [v for v in range(n) if v != x]
    B = draw(st.lists(st.sampled_from(others), unique=True, max_size=len(others)))
    A = draw(st.lists(st.sampled_from(B), unique=True)) if B else []
    rest = [v for v in others if v not in B]
    y = draw(st.sampled_from(rest)) if rest else None
    i = draw(st.integers(0, n - 1))
    return n, edges, x, alpha, A, B, y, i


def _reach(g, S, x, alpha, i):
    return reach_probabilities(with_backlinks(g, S, x), x, alpha)[i]


@given(nested_sets())
@settings(max_examples=500, deadline=None)
def test_reach_gain_diminishes(case):
    n, edges, x, alpha, A, B, y, i = case
    if y is None:
        return
    g = build_graph(n, edges)
    early = _reach(g, A + [y], x, alpha, i) - _reach(g, A, x, alpha, i)
    late = _reach(g, B + [y], x, alpha, i) - _reach(g, B, x, alpha, i)
    assert late <= early + 1e-10


@given(nested_sets())
@settings(max_examples=500, deadline=None)
def test_reach_monotone(case):
    n, edges, x, alpha, A, B, _, i = case
    g = build_graph(n, edges)
    assert _reach(g, A, x, alpha, i) <= _reach(g, B, x, alpha, i) + 1e-10


@given(instances(), st.data())
@settings(max_examples=60)
def test_backlink_never_lowers_pi_x(inst, data):
    n, edges, x, alpha = inst
    g = build_graph(n, edges)
    u = data.draw(st.sampled_from([v for v in range(n) if v != x]))
    params = SurferParams(alpha=alpha)
    assert pagerank(add_edge(g, u, x), params)[x] >= pagerank(g, params)[x] - 1e-12
