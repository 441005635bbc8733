"""Experiment drivers behind the CLI and the scripts in ``scripts/``.

Each driver returns plain row dicts (one per parameter point, sorted by
parameters) so the same data can go to CSV, JSON or a test assertion.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import closed_form as cf
from .families import cycle_vs_sink, sink_vs_sink
from .graph import DirectedGraph, build_graph, save_edge_list, with_backlinks
from .selectors import (
    candidate_set,
    exhaustive_select,
    naive_select,
    r_greedy_select,
)
from .surfer import SurferParams, pagerank, reachability

EDGE_PROBABILITIES = (0.1, 0.3, 0.5)


@dataclass
class ExperimentConfig:
    """Options of one experiment run; ``seed`` fixes every random draw."""

    command: str
    alpha: float = 0.85
    k: list[int] = field(default_factory=lambda: [5])
    u: list[int] = field(default_factory=lambda: [20])
    c: list[int] = field(default_factory=lambda: [10])
    delta: float = 0.01
    instances: int = 100
    max_n: int = 12
    seed: int = 0
    tol: float = 1e-12
    clique_degree: int | None = 8
    fmt: str = "csv"
    out: str | None = None


def _role_summary(inst, sources) -> str:
    names = sorted({inst.role_of(s) for s in sources})
    return "+".join(names)


def theorem1_rows(
    u_values,
    k_values,
    delta: float = 0.01,
    alpha: float = 0.85,
    clique_degree: int | None = 8,
    tol: float = 1e-12,
    exhaustive_cap: int = 20_000,
) -> list[dict]:
    """Naive strategy versus linking every sink, on cycle-versus-sink graphs."""
    params = SurferParams(alpha=alpha, tol=tol)
    rows = []
    for u, k in sorted(itertools.product(u_values, k_values)):
        inst = cycle_vs_sink(u, k, delta=delta, alpha=alpha, clique_degree=clique_degree, tol=tol)
        p = inst.params
        g, x = inst.graph, inst.target
        naive = naive_select(g, x, k, params)
        pi_opt = float(pagerank(with_backlinks(g, inst.roles["sink"], x), params)[x])
        row = dict(
            u=u, k=k, t_c=p["t_c"], t_s=p["t_s"], t_i=p["t_i"], n=inst.n,
            naive_choice=_role_summary(inst, naive.sources),
            pi_x_naive=naive.final_pi_x,
            pi_x_sinks=pi_opt,
            ratio_empirical=pi_opt / naive.final_pi_x,
            ratio_system=cf.system_ratio("cycle_vs_sink", alpha, k, p["t_c"], p["t_s"], p["t_i"]),
            ratio_closed_form=cf.naive_ratio(alpha, k, p["t_s"], p["t_c"]),
            ratio_large_clique=cf.system_ratio("cycle_vs_sink", alpha, k, p["t_c"], p["t_s"], None),
            limit=cf.naive_limit(alpha, delta),
            bound=cf.theorem1_bound(alpha),
            exhaustive_agrees="",
        )
        if math.comb(candidate_set(g, x).shape[0], k) <= exhaustive_cap:
            best = exhaustive_select(g, x, k, params, cap=exhaustive_cap)
            row["exhaustive_agrees"] = str(best.final_pi_x >= pi_opt * (1 - 1e-9)).lower()
        rows.append(row)
    return rows


def theorem3_rows(
    c_values,
    k: int = 5,
    alpha: float = 0.85,
    clique_degree: int | None = 8,
    tol: float = 1e-12,
) -> list[dict]:
    """r-Greedy versus linking every shaded node, on sink-versus-sink graphs."""
    params = SurferParams(alpha=alpha, tol=tol)
    rows = []
    for c in sorted(c_values):
        inst = sink_vs_sink(c, k, alpha=alpha, clique_degree=clique_degree)
        p = inst.params
        g, x = inst.graph, inst.target
        greedy = r_greedy_select(g, x, k, params)
        pi_opt = float(pagerank(with_backlinks(g, inst.roles["shaded"], x), params)[x])
        rows.append(dict(
            c=c, k=k, t_b=p["t_b"], t_c=p["t_c"], t_i=p["t_i"], n=inst.n,
            rgreedy_choice=_role_summary(inst, greedy.sources),
            pi_x_rgreedy=greedy.final_pi_x,
            pi_x_shaded=pi_opt,
            ratio_empirical=pi_opt / greedy.final_pi_x,
            ratio_system=cf.system_ratio("sink_vs_sink", alpha, k, p["t_c"], p["t_b"], p["t_i"]),
            ratio_closed_form=cf.rgreedy_ratio(alpha, k, c),
            bound=cf.rgreedy_limit(alpha),
        ))
    return rows


def random_digraph(rng: np.random.Generator, n: int, p: float) -> DirectedGraph:
    """Erdos-Renyi style digraph without self-loops; sinks allowed."""
    adj = rng.random((n, n)) < p
    np.fill_diagonal(adj, False)
    return build_graph(n, np.argwhere(adj))


@dataclass(frozen=True)
class RandomInstance:
    index: int
    graph: DirectedGraph
    target: int
    k: int
    alpha: float
    p: float


def random_instances(count: int, max_n: int, k_max: int, alpha: float, seed: int, min_n: int = 3):
    """Seeded stream of (graph, target, budget) instances."""
    rng = np.random.default_rng(seed)
    produced = 0
    while produced < count:
        n = int(rng.integers(min_n, max_n + 1))
        p = EDGE_PROBABILITIES[produced % len(EDGE_PROBABILITIES)]
        g = random_digraph(rng, n, p)
        x = int(rng.integers(n))
        cands = candidate_set(g, x).shape[0]
        if cands == 0:
            continue
        k = int(rng.integers(1, min(k_max, cands) + 1))
        yield RandomInstance(produced, g, x, k, alpha, p)
        produced += 1


def guarantee_rows(
    instances: int = 100,
    max_n: int = 12,
    k_max: int = 3,
    alpha: float = 0.85,
    seed: int = 0,
    tol: float = 1e-12,
) -> tuple[list[dict], dict, list]:
    """r-Greedy against the exhaustive optimum on random graphs.

    Returns per-instance rows and a summary with the smallest observed
    ratios and the guaranteed floors they are compared to.  The ``pi_x``
    ratio is against the exhaustive ``pi_x`` optimum; the ``pi/z`` ratio
    is against the best ``r_x`` over all budget-size candidate sets.
    """
    params = SurferParams(alpha=alpha, tol=tol)
    rows = []
    witnesses = []
    floor_pi = cf.theorem2_factor(alpha)
    floor_rz = 1.0 - 1.0 / math.e
    for inst in random_instances(instances, max_n, k_max, alpha, seed):
        g, x, k = inst.graph, inst.target, inst.k
        greedy = r_greedy_select(g, x, k, params)
        best = exhaustive_select(g, x, k, params)
        r_greedy = reachability(with_backlinks(g, greedy.sources, x), x, alpha, tol)
        r_best = max(
            reachability(with_backlinks(g, S, x), x, alpha, tol)
            for S in itertools.combinations(candidate_set(g, x).tolist(), k)
        )
        ratio_pi = greedy.final_pi_x / best.final_pi_x
        ratio_rz = r_greedy / r_best
        ok = ratio_pi >= floor_pi - 1e-10 and ratio_rz >= floor_rz - 1e-10
        rows.append(dict(
            instance=inst.index, n=g.n, m=g.num_edges, p=inst.p, target=x, k=k,
            pi_x_rgreedy=greedy.final_pi_x, pi_x_optimal=best.final_pi_x,
            ratio_pi=ratio_pi, ratio_pi_over_z=ratio_rz, ok=str(ok).lower(),
        ))
        if not ok:
            witnesses.append((inst, greedy, best))
    summary = dict(
        instances=len(rows),
        alpha=alpha,
        min_ratio_pi=min(r["ratio_pi"] for r in rows),
        floor_pi=floor_pi,
        min_ratio_pi_over_z=min(r["ratio_pi_over_z"] for r in rows),
        floor_pi_over_z=floor_rz,
        violations=len(witnesses),
    )
    return rows, summary, witnesses


@dataclass(frozen=True)
class Witness:
    graph: DirectedGraph
    target: int
    small: tuple[int, ...]
    large: tuple[int, ...]
    y: int
    pi_small: float
    pi_small_y: float
    pi_large: float
    pi_large_y: float

    @property
    def gain_small(self) -> float:
        return self.pi_small_y - self.pi_small

    @property
    def gain_large(self) -> float:
        return self.pi_large_y - self.pi_large


def find_nonsubmodular_witness(
    max_n: int = 6,
    attempts: int = 200,
    alpha: float = 0.85,
    seed: int = 0,
    margin: float = 1e-9,
    tol: float = 1e-12,
) -> Witness | None:
    """Search random small graphs for ``A ⊂ B``, ``y`` with a larger
    ``pi_x`` gain from ``y`` on top of ``B`` than on top of ``A``."""
    params = SurferParams(alpha=alpha, tol=tol)
    rng = np.random.default_rng(seed)
    if max_n < 3:
        return None
    for attempt in range(attempts):
        n = int(rng.integers(3, max_n + 1))
        g = random_digraph(rng, n, EDGE_PROBABILITIES[attempt % len(EDGE_PROBABILITIES)])
        x = 0
        cands = candidate_set(g, x).tolist()
        cache: dict[tuple[int, ...], float] = {}

        def pi_x(S):
            S = tuple(sorted(S))
            if S not in cache:
                cache[S] = float(pagerank(with_backlinks(g, S, x), params)[x])
            return cache[S]

        for size in range(1, min(3, len(cands))):
            for B in itertools.combinations(cands, size):
                for y in cands:
                    if y in B:
                        continue
                    late = pi_x(B + (y,)) - pi_x(B)
                    for a_size in range(size):
                        for A in itertools.combinations(B, a_size):
                            early = pi_x(A + (y,)) - pi_x(A)
                            if late - early > margin:
                                return Witness(
                                    g, x, A, B, y,
                                    pi_x(A), pi_x(A + (y,)), pi_x(B), pi_x(B + (y,)),
                                )
    return None


def recheck_witness(w: Witness, alpha: float = 0.85, tol: float = 1e-12) -> bool:
    params = SurferParams(alpha=alpha, tol=tol)

    def pi_x(S):
        return float(pagerank(with_backlinks(w.graph, S, w.target), params)[w.target])

    late = pi_x(w.large + (w.y,)) - pi_x(w.large)
    early = pi_x(w.small + (w.y,)) - pi_x(w.small)
    return set(w.small) < set(w.large) and w.y not in w.large and late > early


def witness_rows(w: Witness) -> list[dict]:
    return [dict(
        target=w.target,
        small_set=" ".join(map(str, w.small)),
        large_set=" ".join(map(str, w.large)),
        y=w.y,
        pi_small=w.pi_small,
        pi_small_y=w.pi_small_y,
        pi_large=w.pi_large,
        pi_large_y=w.pi_large_y,
        gain_small=w.gain_small,
        gain_large=w.gain_large,
    )]


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(rows[0].keys()))
    for row in rows:
        writer.writerow([_fmt(v) for v in row.values()])
    return buf.getvalue()


def _parse_cell(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def read_csv(text: str) -> list[dict]:
    body = "".join(line for line in io.StringIO(text) if not line.startswith("#"))
    reader = csv.DictReader(io.StringIO(body))
    return [{k: _parse_cell(v) for k, v in row.items()} for row in reader]


def write_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=False, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(type(obj).__name__)


def edge_list_text(g: DirectedGraph) -> str:
    return save_edge_list(g).decode("utf-8")
