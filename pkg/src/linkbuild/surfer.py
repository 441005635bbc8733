"""Random-surfer quantities: transition rows, PageRank, reach, z_xx.

Everything is computed with sparse fixed-point iterations over the
graph's row-normalized adjacency.  Sink rows are never stored; a sink is
treated as linking uniformly to every node (itself included), and that
term is added explicitly on each step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import DirectedGraph

DEFAULT_ALPHA = 0.85
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 100_000


class ConvergenceError(RuntimeError):
    def __init__(self, what: str, iterations: int, residual: float):
        super().__init__(
            f"{what}: no convergence after {iterations} iterations (residual {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


@dataclass(frozen=True)
class SurferParams:
    alpha: float = DEFAULT_ALPHA
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.tol > 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass(frozen=True)
class SurferMetrics:
    """Per-target bundle.

    ``reach[i]`` is the probability that a surfer started at ``i`` hits the
    target before zapping; ``reach[target]`` is stored as 1.
    """

    target: int
    alpha: float
    reach: np.ndarray
    z_xx: float
    r_x: float

    @property
    def n(self) -> int:
        return int(self.reach.shape[0])

    @property
    def pi_over_z(self) -> float:
        return (1.0 - self.alpha) / self.n * self.r_x

    @property
    def pi_x(self) -> float:
        """PageRank of the target rebuilt from ``z_xx`` and ``r_x``."""
        return self.pi_over_z * self.z_xx


def _check_node(g: DirectedGraph, i: int) -> None:
    if not 0 <= i < g.n:
        raise IndexError(f"node {i} out of range for n={g.n}")


def _average_step(g: DirectedGraph, f: np.ndarray) -> np.ndarray:
    """``P @ f``: mean of ``f`` over each node's out-neighbors (sinks: over all)."""
    out = g.walk_matrix @ f
    if g.sinks.any():
        out[g.sinks] = f.mean()
    return out


def transition_row(g: DirectedGraph, i: int, alpha: float = DEFAULT_ALPHA) -> np.ndarray:
    _check_node(g, i)
    n = g.n
    row = np.full(n, (1.0 - alpha) / n)
    succ = g.successors(i)
    if succ.shape[0] == 0:
        row += alpha / n
    else:
        row[succ] += alpha / succ.shape[0]
    return row


def pagerank(g: DirectedGraph, params: SurferParams | None = None) -> np.ndarray:
    """Stationary distribution of the random surfer by power iteration.

    Starts from the uniform vector and stops once successive iterates
    differ by at most ``tol`` in L1, which bounds the stationarity
    residual of the returned vector by ``alpha * tol``.
    """
    p = params or SurferParams()
    n = g.n
    alpha = p.alpha
    wt = g.walk_matrix_t
    sinks = g.sinks
    has_sinks = bool(sinks.any())
    v = np.full(n, 1.0 / n)
    delta = np.inf
    for _ in range(p.max_iter):
        nxt = alpha * (wt @ v)
        dangling = v[sinks].sum() if has_sinks else 0.0
        nxt += (alpha * dangling + (1.0 - alpha) * v.sum()) / n
        delta = np.abs(nxt - v).sum()
        v = nxt
        if delta <= p.tol:
            return v
    raise ConvergenceError("pagerank", p.max_iter, float(delta))


def stationarity_residual(g: DirectedGraph, v: np.ndarray, alpha: float) -> float:
    """``||v^T - v^T Q||_1`` without forming ``Q``."""
    step = alpha * (g.walk_matrix_t @ v)
    step += (alpha * v[g.sinks].sum() + (1.0 - alpha) * v.sum()) / g.n
    return float(np.abs(v - step).sum())


def _pinned_fixed_point(g, x, alpha, tol, max_iter, what):
    f = np.zeros(g.n)
    f[x] = 1.0
    stop = tol * (1.0 - alpha)
    gap = np.inf
    for _ in range(max_iter):
        nxt = alpha * _average_step(g, f)
        nxt[x] = 1.0
        gap = np.abs(nxt - f).max()
        f = nxt
        if gap <= stop:
            return f
    raise ConvergenceError(what, max_iter, float(gap))


def reach_probabilities(
    g: DirectedGraph,
    x: int,
    alpha: float = DEFAULT_ALPHA,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> np.ndarray:
    """Probability of hitting ``x`` before the first zap, per start node.

    Solves ``f_i = alpha * mean_{i->j} f_j`` with ``f_x`` pinned to 1,
    iterating from zero.  The map is an ``alpha``-contraction in the sup
    norm, so stopping at a step gap of ``tol * (1 - alpha)`` leaves an
    error of at most ``alpha * tol``.
    """
    _check_node(g, x)
    return _pinned_fixed_point(g, x, alpha, tol, max_iter, "reach_probabilities")


def return_probability(g: DirectedGraph, x: int, reach: np.ndarray, alpha: float) -> float:
    """Probability of coming back to ``x`` before zapping, from ``reach``."""
    succ = g.successors(x)
    if succ.shape[0] == 0:
        return alpha * float(reach.mean())
    return alpha * float(reach[succ].mean())


def _visits_series(g, x, alpha, tol, max_iter):
    # z_i = [i == x] + alpha * (P z)_i, read at i = x.
    z = np.zeros(g.n)
    stop = tol * (1.0 - alpha)
    gap = np.inf
    for _ in range(max_iter):
        nxt = alpha * _average_step(g, z)
        nxt[x] += 1.0
        gap = np.abs(nxt - z).max()
        z = nxt
        if gap <= stop:
            return float(z[x])
    raise ConvergenceError("visits_zxx", max_iter, float(gap))


def visits_zxx(
    g: DirectedGraph,
    x: int,
    alpha: float = DEFAULT_ALPHA,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    method: str = "return",
) -> float:
    """Expected visits to ``x`` starting at ``x`` before the first zap.

    ``method="return"`` uses ``1 / (1 - rho)`` with ``rho`` the return
    probability computed from the reach vector; ``method="series"`` runs
    the visit-count recursion directly.  Both agree to within a few
    ``tol``.  When ``x`` has out-links and no self-loop, every return
    takes at least two steps and the value lies in ``[1, 1/(1 - alpha**2)]``.
    A sink ``x`` can exceed that, since its uniform jump may land on itself.
    """
    _check_node(g, x)
    if method == "return":
        reach = reach_probabilities(g, x, alpha, tol, max_iter)
        return 1.0 / (1.0 - return_probability(g, x, reach, alpha))
    if method == "series":
        return _visits_series(g, x, alpha, tol, max_iter)
    raise ValueError(f"unknown method {method!r}")


def surfer_metrics(
    g: DirectedGraph,
    x: int,
    alpha: float = DEFAULT_ALPHA,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SurferMetrics:
    reach = reach_probabilities(g, x, alpha, tol, max_iter)
    z = 1.0 / (1.0 - return_probability(g, x, reach, alpha))
    r_x = 1.0 + float(reach.sum() - reach[x])
    return SurferMetrics(target=x, alpha=alpha, reach=reach, z_xx=z, r_x=r_x)


def reachability(
    g: DirectedGraph,
    x: int,
    alpha: float = DEFAULT_ALPHA,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    """``r_x = 1 + sum_{i != x} reach[i]``."""
    reach = reach_probabilities(g, x, alpha, tol, max_iter)
    return 1.0 + float(reach.sum() - reach[x])


def visit_mass(
    g: DirectedGraph,
    x: int,
    alpha: float = DEFAULT_ALPHA,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> np.ndarray:
    """Expected visits to each node before hitting ``x`` or zapping, summed
    over all start nodes other than ``x``.

    This is ``1^T (I - alpha P_TT)^{-1}`` with ``T = V \\ {x}``; entry ``x``
    is 0.  Used to bound how much one new backlink can raise ``r_x``.
    """
    _check_node(g, x)
    n = g.n
    wt = g.walk_matrix_t
    sinks = g.sinks
    s = np.ones(n)
    s[x] = 0.0
    gap = np.inf
    for _ in range(max_iter):
        nxt = alpha * (wt @ s)
        nxt += alpha * s[sinks].sum() / n
        nxt += 1.0
        nxt[x] = 0.0
        gap = np.abs(nxt - s).max()
        s = nxt
        if gap <= tol * (1.0 - alpha) * s.max():
            return s
    raise ConvergenceError("visit_mass", max_iter, float(gap))
