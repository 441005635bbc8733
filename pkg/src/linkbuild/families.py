"""Adversarial graph families: cycle-versus-sink and sink-versus-sink.

Node layout is fixed so ids are predictable: the target is node 0, then
the two groups of ``k`` "special" nodes, then tails grouped by owner, then
the absorbing clique.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .graph import DirectedGraph, build_graph
from .surfer import SurferParams, pagerank

ROLES = ("target", "cycle", "sink", "shaded", "light", "tail", "clique")


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyInstance:
    family: str
    graph: DirectedGraph
    target: int
    roles: dict[str, np.ndarray]
    params: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.graph.n

    def role_of(self, node: int) -> str:
        for name, ids in self.roles.items():
            if node in ids:
                return name
        raise KeyError(node)

    def role_tags(self) -> list[str]:
        tags = [""] * self.graph.n
        for name, ids in self.roles.items():
            for i in ids.tolist():
                tags[i] = name
        return tags


def lambda_param(alpha: float, k: int, u: int, delta: float) -> float:
    """Tail-balance parameter giving ``pi_cycle / pi_sink = 2 + delta``."""
    a, d = alpha, delta
    num = (
        ((a**2 - a) * d + 2 * a**2) * k * u
        + 2 * ((a - 1) * d + 2 * a - 1) * k
        + 2 * (a**2 - a) * d
        + 4 * (a**2 - a)
    )
    den = (
        2 * a**2 * k * u
        + ((2 * a**2 - 2 * a) * d + 4 * a**2 - 2 * a) * k
        + (2 * a**3 - 2 * a**2) * d
        + 4 * a**3
        - 4 * a**2
    )
    lam = num / den
    if 1.0 - lam * a <= 0.0:
        raise ConstructionError(
            f"1 - lambda*alpha = {1.0 - lam * a:.3g} is not positive "
            f"(alpha={alpha}, k={k}, u={u}, delta={delta})"
        )
    return lam


def _clique_edges(start: int, size: int, degree: int | None) -> np.ndarray:
    # Complete digraph by default; otherwise a circulant j -> j+1..j+degree.
    ids = np.arange(size, dtype=np.int64)
    if degree is None or degree >= size - 1:
        src = np.repeat(ids, size - 1)
        off = np.tile(np.arange(1, size, dtype=np.int64), size)
    else:
        if degree < 1:
            raise ConstructionError(f"clique_degree must be >= 1, got {degree}")
        src = np.repeat(ids, degree)
        off = np.tile(np.arange(1, degree + 1, dtype=np.int64), size)
    return np.column_stack([start + src, start + (src + off) % size])


def _tail_edges(start: int, owners: np.ndarray, per_owner: int) -> np.ndarray:
    tails = start + np.arange(owners.shape[0] * per_owner, dtype=np.int64)
    return np.column_stack([tails, np.repeat(owners, per_owner)])


def _assemble(n, blocks):
    edges = np.vstack([b for b in blocks if b.size]) if blocks else np.zeros((0, 2), np.int64)
    return build_graph(n, edges)


def _cycle_vs_sink_graph(k, t_c, t_s, t_i, clique_degree):
    n = k * (t_s + t_c + 2) + t_i + 1
    cycle = np.arange(1, k + 1, dtype=np.int64)
    sinks = np.arange(k + 1, 2 * k + 1, dtype=np.int64)
    cycle_tail0 = 2 * k + 1
    sink_tail0 = cycle_tail0 + k * t_c
    clique0 = sink_tail0 + k * t_s
    assert clique0 + t_i == n
    blocks = [
        np.column_stack([np.zeros(k, np.int64), sinks]),
        np.column_stack([cycle, np.roll(cycle, -1)]),
        _tail_edges(cycle_tail0, cycle, t_c),
        _tail_edges(sink_tail0, sinks, t_s),
        _clique_edges(clique0, t_i, clique_degree),
    ]
    roles = {
        "target": np.array([0]),
        "cycle": cycle,
        "sink": sinks,
        "tail": np.arange(cycle_tail0, clique0),
        "clique": np.arange(clique0, n),
    }
    return _assemble(n, blocks), roles


def cycle_vs_sink(
    u: int,
    k: int,
    delta: float = 0.01,
    alpha: float = 0.85,
    clique_degree: int | None = None,
    tol: float = 1e-12,
) -> FamilyInstance:
    """Graph on which the naive strategy links from the cycle instead of the sinks.

    ``t_c = u``, ``t_i = u**2`` and ``t_s`` is the rounded tail-balance
    size.  After building, PageRank is computed and ``t_s`` is lowered by
    up to three steps if rounding broke ``pi_cycle / 2 > pi_sink``.
    """
    if u < 2 or k < 2:
        raise ConstructionError(f"cycle_vs_sink needs u >= 2 and k >= 2, got u={u}, k={k}")
    if not delta > 0:
        raise ConstructionError(f"delta must be positive, got {delta}")
    lam = lambda_param(alpha, k, u, delta)
    t_c, t_i = u, max(u * u, 2)
    t_s = max(int(round(u / (2.0 * (1.0 - lam * alpha)))), 1)
    params = SurferParams(alpha=alpha, tol=tol)
    for attempt in range(4):
        g, roles = _cycle_vs_sink_graph(k, t_c, t_s, t_i, clique_degree)
        pi = pagerank(g, params)
        measured = pi[roles["cycle"][0]] / pi[roles["sink"][0]]
        if measured > 2.0 or t_s == 1 or attempt == 3:
            break
        t_s -= 1
    if not measured > 2.0:
        raise ConstructionError(
            f"could not make pi_c/pi_s exceed 2 (measured {measured}) for u={u}, k={k}, delta={delta}"
        )
    return FamilyInstance(
        family="cycle_vs_sink",
        graph=g,
        target=0,
        roles=roles,
        params=dict(
            u=u, k=k, delta=delta, alpha=alpha, t_c=t_c, t_s=t_s, t_i=t_i,
            lam=lam, clique_degree=clique_degree, pi_c_over_pi_s=float(measured),
        ),
    )


def sink_vs_sink(
    c: int,
    k: int,
    alpha: float = 0.85,
    clique_degree: int | None = None,
) -> FamilyInstance:
    """Graph on which r-Greedy prefers light sinks over the shaded ones.

    ``k`` shaded sinks (``c`` tails each, fed by the target) and ``k``
    light sinks (``c + 1`` tails each) plus a ``c**2``-node clique.
    """
    if c < 1 or k < 1:
        raise ConstructionError(f"sink_vs_sink needs c >= 1 and k >= 1, got c={c}, k={k}")
    t_b, t_c, t_i = c, c + 1, max(c * c, 2)
    n = k * (t_c + t_b + 2) + t_i + 1
    shaded = np.arange(1, k + 1, dtype=np.int64)
    light = np.arange(k + 1, 2 * k + 1, dtype=np.int64)
    shaded_tail0 = 2 * k + 1
    light_tail0 = shaded_tail0 + k * t_b
    clique0 = light_tail0 + k * t_c
    blocks = [
        np.column_stack([np.zeros(k, np.int64), shaded]),
        _tail_edges(shaded_tail0, shaded, t_b),
        _tail_edges(light_tail0, light, t_c),
        _clique_edges(clique0, t_i, clique_degree),
    ]
    roles = {
        "target": np.array([0]),
        "shaded": shaded,
        "light": light,
        "tail": np.arange(shaded_tail0, clique0),
        "clique": np.arange(clique0, n),
    }
    return FamilyInstance(
        family="sink_vs_sink",
        graph=_assemble(n, blocks),
        target=0,
        roles=roles,
        params=dict(c=c, k=k, alpha=alpha, t_b=t_b, t_c=t_c, t_i=t_i, clique_degree=clique_degree),
    )


def save_roles(inst: FamilyInstance) -> bytes:
    """Role sidecar: one ``nodeid role`` line per node."""
    buf = io.StringIO()
    for i, tag in enumerate(inst.role_tags()):
        buf.write(f"{i} {tag}\n")
    return buf.getvalue().encode("utf-8")


def load_roles(data: bytes | str) -> dict[int, str]:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 or parts[1] not in ROLES:
            raise ValueError(f"line {lineno}: expected 'nodeid role', got {line!r}")
        out[int(parts[0])] = parts[1]
    return out
