"""Backlink selection strategies for a target node.

All strategies draw from the same candidate pool (every node except the
target and its current in-neighbors) and break ties toward the smallest
node id.  Objectives that differ by less than ``TIE_RTOL`` (relative)
count as ties so that symmetric nodes resolve deterministically despite
floating-point noise.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .graph import DirectedGraph, add_edge, with_backlinks
from .surfer import (
    SurferParams,
    pagerank,
    reach_probabilities,
    reachability,
    visit_mass,
)

TIE_RTOL = 1e-10
EXHAUSTIVE_CAP = 10**6


class SelectionError(ValueError):
    pass


@dataclass(frozen=True)
class Step:
    node: int
    value: float


@dataclass(frozen=True)
class SelectionResult:
    strategy: str
    target: int
    sources: tuple[int, ...]
    final_pi_x: float
    initial_pi_x: float
    trace: tuple[Step, ...] = field(default=())

    @property
    def source_set(self) -> frozenset[int]:
        return frozenset(self.sources)


def candidate_set(g: DirectedGraph, x: int) -> np.ndarray:
    """Nodes that could still gain a new link to ``x``, ascending."""
    if not 0 <= x < g.n:
        raise IndexError(f"target {x} out of range for n={g.n}")
    mask = np.ones(g.n, dtype=bool)
    mask[x] = False
    mask[g.in_neighbors(x)] = False
    return np.flatnonzero(mask)


def _check_budget(cands: np.ndarray, k: int) -> None:
    if k < 1:
        raise SelectionError(f"k must be >= 1, got {k}")
    if k > cands.shape[0]:
        raise SelectionError(f"k={k} exceeds the {cands.shape[0]} available candidates")


def _tied(a: float, b: float) -> bool:
    return abs(a - b) <= TIE_RTOL * max(1.0, abs(a), abs(b))


def _argmax(nodes, values) -> tuple[int, float]:
    """Deterministic reduction: largest value, then smallest node id."""
    best_node, best_val = None, -math.inf
    for node, val in zip(nodes, values):
        if best_node is None or val > best_val and not _tied(val, best_val):
            best_node, best_val = node, val
        elif _tied(val, best_val):
            if node < best_node:
                best_node = node
            best_val = max(best_val, val)
    return int(best_node), float(best_val)


def _map(fn, items, workers: int):
    if workers <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _pi_x(g: DirectedGraph, x: int, params: SurferParams) -> float:
    return float(pagerank(g, params)[x])


def _result(strategy, g, x, sources, trace, params, initial=None) -> SelectionResult:
    final = _pi_x(with_backlinks(g, sources, x), x, params)
    if initial is None:
        initial = _pi_x(g, x, params)
    return SelectionResult(
        strategy=strategy,
        target=x,
        sources=tuple(int(s) for s in sources),
        final_pi_x=final,
        initial_pi_x=initial,
        trace=tuple(trace),
    )


def naive_select(g: DirectedGraph, x: int, k: int, params: SurferParams | None = None) -> SelectionResult:
    """Pick the ``k`` candidates with the largest ``pi_i / (outdeg_i + 1)``.

    PageRank is computed once, on the unmodified graph.  The trace holds
    each chosen node's score.
    """
    params = params or SurferParams()
    cands = candidate_set(g, x)
    _check_budget(cands, k)
    pi = pagerank(g, params)
    scores = pi[cands] / (g.outdeg[cands] + 1.0)
    remaining = list(zip(cands.tolist(), scores.tolist()))
    chosen, trace = [], []
    for _ in range(k):
        node, val = _argmax([c for c, _ in remaining], [s for _, s in remaining])
        remaining = [(c, s) for c, s in remaining if c != node]
        chosen.append(node)
        trace.append(Step(node, val))
    return _result("naive", g, x, chosen, trace, params, initial=float(pi[x]))


def _upper_bounds(g: DirectedGraph, x: int, cands: np.ndarray, params: SurferParams):
    """Per-candidate upper bound on the ``r_x`` gain from adding ``(u, x)``.

    A new backlink only changes row ``u`` of the walk, so the gain equals
    ``s_u * nu_u / (1 + c_u (G_uu - 1))`` where ``s`` is the summed visit
    mass, ``nu_u`` the jump in ``u``'s one-step reach value and ``G_uu >= 1``
    the expected returns to ``u``.  Dropping the denominator gives the bound.
    """
    alpha = params.alpha
    reach = reach_probabilities(g, x, alpha, params.tol, params.max_iter)
    s = visit_mass(g, x, alpha, params.tol, params.max_iter)
    deg = g.outdeg[cands].astype(float)
    nbr_sum = (g.walk_matrix @ reach)[cands] * deg
    after = np.where(deg > 0, alpha * (nbr_sum + 1.0) / (deg + 1.0), alpha)
    nu = np.maximum(after - reach[cands], 0.0)
    r_x = 1.0 + float(reach.sum() - reach[x])
    return s[cands] * nu, r_x


def r_greedy_select(
    g: DirectedGraph,
    x: int,
    k: int,
    params: SurferParams | None = None,
    evaluation: str = "pruned",
    workers: int = 1,
) -> SelectionResult:
    """Greedy on ``pi_x / z_xx``, which equals ``(1 - alpha)/n * r_x``.

    Each round scores every remaining candidate ``u`` by ``r_x`` of the
    graph plus ``(u, x)`` and commits the best.  With
    ``evaluation="pruned"`` a candidate is only solved exactly when its
    gain upper bound could still reach the round's best; the outcome is
    identical to ``evaluation="full"``.
    """
    params = params or SurferParams()
    if evaluation not in ("pruned", "full"):
        raise ValueError(f"unknown evaluation {evaluation!r}")
    cands = candidate_set(g, x)
    _check_budget(cands, k)
    alpha, n = params.alpha, g.n
    scale = (1.0 - alpha) / n

    def objective(h: DirectedGraph, u: int) -> float:
        return reachability(add_edge(h, u, x), x, alpha, params.tol, params.max_iter)

    current = g
    remaining = cands
    chosen, trace = [], []
    for _ in range(k):
        if evaluation == "full":
            vals = _map(lambda u: objective(current, u), remaining.tolist(), workers)
            node, best = _argmax(remaining.tolist(), vals)
        else:
            bounds, r_now = _upper_bounds(current, x, remaining, params)
            order = np.lexsort((remaining, -bounds))
            slack = 1e-9 * max(1.0, r_now)
            node, best = None, -math.inf
            evaluated_nodes, evaluated_vals = [], []
            for idx in order:
                u = int(remaining[idx])
                cutoff = best - TIE_RTOL * max(1.0, abs(best)) - slack
                if r_now + bounds[idx] < cutoff:
                    break
                val = objective(current, u)
                evaluated_nodes.append(u)
                evaluated_vals.append(val)
                node, best = _argmax(evaluated_nodes, evaluated_vals)
        current = add_edge(current, node, x)
        remaining = remaining[remaining != node]
        chosen.append(node)
        trace.append(Step(node, scale * best))
    return _result("rgreedy", g, x, chosen, trace, params)


def pi_greedy_select(
    g: DirectedGraph,
    x: int,
    k: int,
    params: SurferParams | None = None,
    workers: int = 1,
) -> SelectionResult:
    """Greedy on ``pi_x`` itself: one full PageRank per candidate per round."""
    params = params or SurferParams()
    cands = candidate_set(g, x)
    _check_budget(cands, k)
    current = g
    remaining = cands.tolist()
    chosen, trace = [], []
    for _ in range(k):
        vals = _map(lambda u: _pi_x(add_edge(current, u, x), x, params), remaining, workers)
        node, best = _argmax(remaining, vals)
        current = add_edge(current, node, x)
        remaining.remove(node)
        chosen.append(node)
        trace.append(Step(node, best))
    return _result("pigreedy", g, x, chosen, trace, params)


def exhaustive_select(
    g: DirectedGraph,
    x: int,
    k: int,
    params: SurferParams | None = None,
    cap: int = EXHAUSTIVE_CAP,
    workers: int = 1,
) -> SelectionResult:
    """Exact optimum by enumerating every ``k``-subset of candidates.

    Returns the lexicographically smallest maximizer.  Refuses to run when
    the number of subsets exceeds ``cap``.
    """
    params = params or SurferParams()
    cands = candidate_set(g, x)
    _check_budget(cands, k)
    count = math.comb(cands.shape[0], k)
    if count > cap:
        raise SelectionError(
            f"{count} subsets of size {k} exceed the enumeration cap {cap}; use a smaller instance"
        )
    subsets = list(itertools.combinations(cands.tolist(), k))
    vals = _map(lambda S: _pi_x(with_backlinks(g, S, x), x, params), subsets, workers)
    best_idx = 0
    for i in range(1, len(subsets)):
        if vals[i] > vals[best_idx] and not _tied(vals[i], vals[best_idx]):
            best_idx = i
    best = subsets[best_idx]
    trace = [
        Step(int(u), _pi_x(with_backlinks(g, best[: i + 1], x), x, params))
        for i, u in enumerate(best[:-1])
    ]
    trace.append(Step(int(best[-1]), float(vals[best_idx])))
    return SelectionResult(
        strategy="exhaustive",
        target=x,
        sources=tuple(int(u) for u in best),
        final_pi_x=float(vals[best_idx]),
        initial_pi_x=_pi_x(g, x, params),
        trace=tuple(trace),
    )


STRATEGIES = {
    "naive": naive_select,
    "rgreedy": r_greedy_select,
    "pigreedy": pi_greedy_select,
    "exhaustive": exhaustive_select,
}


def select(strategy: str, g: DirectedGraph, x: int, k: int, params: SurferParams | None = None, **kw):
    try:
        fn = STRATEGIES[strategy]
    except KeyError:
        raise SelectionError(
            f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}"
        ) from None
    return fn(g, x, k, params, **kw)
