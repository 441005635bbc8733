"""Dense linear-algebra oracles.

These build the full transition matrix and solve directly, so they share
no code path with the sparse fixed-point iterations under test.
"""

import numpy as np


def dense_walk(n, edges):
    P = np.zeros((n, n))
    for i, j in edges:
        P[i, j] = 1.0
    for i in range(n):
        s = P[i].sum()
        P[i] = P[i] / s if s else 1.0 / n
    return P


def dense_pagerank(n, edges, alpha):
    Q = (1 - alpha) / n + alpha * dense_walk(n, edges)
    A = Q.T - np.eye(n)
    A[-1] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    return np.linalg.solve(A, b)


def dense_visits(n, edges, alpha):
    """Z = (I - alpha P)^{-1}; Z[i, j] = expected visits to j from i before zapping."""
    return np.linalg.inv(np.eye(n) - alpha * dense_walk(n, edges))


def dense_reach(n, edges, x, alpha):
    Z = dense_visits(n, edges, alpha)
    return Z[:, x] / Z[x, x]


def random_edges(rng, n, p, self_loops=False):
    adj = rng.random((n, n)) < p
    if not self_loops:
        np.fill_diagonal(adj, False)
    return [tuple(map(int, e)) for e in np.argwhere(adj)]
