"""Role-level PageRank systems for the two adversarial families and the
closed-form ratio and bound expressions that go with them.

Each family's PageRank is determined by five role values (tails, target,
the two special groups, clique).  :func:`solve_family_system` solves that
5x5 linear system numerically; the printed rational expressions are kept
as separate functions so the two routes can check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

FAMILIES = ("cycle_vs_sink", "sink_vs_sink")
SCENARIOS = ("initial", "algorithm_chosen", "optimal")

_GROUPS = {
    "cycle_vs_sink": ("sink", "cycle"),
    "sink_vs_sink": ("shaded", "light"),
}


@dataclass(frozen=True)
class RolePageRanks:
    """Per-role PageRank values.

    With ``n`` finite the values are probabilities and the weighted sum
    over roles is 1.  With ``n = inf`` (clique size taken to infinity) the
    values are expressed in units of the zapping floor ``(1 - alpha)/n``
    and only ratios between them are meaningful.
    """

    family: str
    scenario: str
    values: dict[str, float]
    multiplicity: dict[str, float]
    n: float

    def __getitem__(self, role: str) -> float:
        return self.values[role]

    def total_mass(self) -> float:
        return sum(self.values[r] * self.multiplicity[r] for r in self.values)


@dataclass(frozen=True)
class RatioReport:
    params: dict
    ratio_closed_form: float
    limit_value: float
    bound_value: float
    ratio_from_system: float | None = None
    ratio_from_explicit_graph: float | None = None
    extra: dict = field(default_factory=dict)


def family_size(family: str, k: int, t_c: float, t_other: float, t_i: float) -> float:
    return k * (t_c + t_other + 2) + t_i + 1


def solve_family_system(
    family: str,
    scenario: str,
    alpha: float,
    k: int,
    t_c: float,
    t_other: float,
    t_i: float | None,
) -> RolePageRanks:
    """Solve the role system of one family under one link scenario.

    ``t_other`` is the sink tail length for ``cycle_vs_sink`` and the
    shaded tail length for ``sink_vs_sink``; ``t_c`` is the cycle / light
    tail length.  ``t_i=None`` drops the sink-to-everyone feedback term,
    i.e. the limit of an arbitrarily large clique.

    ``scenario`` is ``"initial"`` (no new links), ``"algorithm_chosen"``
    (links from the cycle / light nodes) or ``"optimal"`` (links from the
    sink / shaded nodes).
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}")
    a = alpha
    if t_i is None:
        n, base, fb = math.inf, 1.0, 0.0
    else:
        n = family_size(family, k, t_c, t_other, t_i)
        base, fb = (1.0 - a) / n, a * k / n

    # Unknowns: tail, target, group S (sink/shaded), group C (cycle/light), clique.
    T, X, S, C, I = range(5)
    A = np.zeros((5, 5))
    b = np.zeros(5)
    A[T, T] = 1.0
    b[T] = base
    # Group S: tails + a 1/k share of the target's mass.
    A[S, S] = 1.0
    A[S, T] = -(1.0 + a * t_other)
    A[S, X] = -a / k
    A[I, I] = 1.0 - a
    A[I, T] = -1.0
    A[X, X] = 1.0
    A[X, T] = -1.0

    if family == "cycle_vs_sink":
        cycle_outdeg = 2.0 if scenario == "algorithm_chosen" else 1.0
        A[C, C] = 1.0 - a / cycle_outdeg
        A[C, T] = -(1.0 + a * t_c)
        if scenario != "optimal":
            A[T, S] = -fb  # sinks spread their mass uniformly
        if scenario == "algorithm_chosen":
            A[X, C] = -a * k / 2.0
        elif scenario == "optimal":
            A[X, S] = -a * k
    else:
        A[C, C] = 1.0
        A[C, T] = -(1.0 + a * t_c)
        if scenario == "initial":
            A[T, S] = A[T, C] = -fb
        elif scenario == "algorithm_chosen":
            A[T, S] = -fb
            A[X, C] = -a * k
        else:
            A[T, C] = -fb
            A[X, S] = -a * k

    sol = np.linalg.solve(A, b)
    resid = np.abs(A @ sol - b).max()
    if not resid <= 1e-12 * max(1.0, float(np.abs(sol).max())):
        raise ArithmeticError(f"role system residual {resid:.3e} too large")
    s_name, c_name = _GROUPS[family]
    values = {"tail": sol[T], "target": sol[X], s_name: sol[S], c_name: sol[C], "clique": sol[I]}
    mult = {
        "tail": k * (t_c + t_other),
        "target": 1,
        s_name: k,
        c_name: k,
        "clique": math.inf if t_i is None else t_i,
    }
    return RolePageRanks(family, scenario, {r: float(v) for r, v in values.items()}, mult, n)


def system_ratio(family: str, alpha: float, k: int, t_c: float, t_other: float, t_i: float | None) -> float:
    """Optimal over algorithm-chosen target PageRank from the role systems."""
    opt = solve_family_system(family, "optimal", alpha, k, t_c, t_other, t_i)
    alg = solve_family_system(family, "algorithm_chosen", alpha, k, t_c, t_other, t_i)
    return opt["target"] / alg["target"]


def naive_ratio(alpha: float, k: int, t_s: float, t_c: float) -> float:
    """Closed-form naive-strategy ratio on the cycle-versus-sink family.

    Exact in the large-clique regime (``t_i=None`` in
    :func:`solve_family_system`); at finite ``t_i`` the sink feedback term
    makes the true ratio smaller.
    """
    a = alpha
    num = (a**3 - 2 * a**2) * k * t_s + (a**2 - 2 * a) * k + a - 2
    den = (a**4 - a**2) * k * t_c + (a**3 - a) * k - a**3 + 2 * a**2 + a - 2
    if den == 0:
        raise ZeroDivisionError("naive_ratio denominator vanishes")
    return num / den


def naive_limit(alpha: float, delta: float) -> float:
    """Large-``u, k`` limit of :func:`naive_ratio` with balanced tails."""
    a = alpha
    return (2 - a) / ((a**3 - a**2 - a + 1) * delta + 2 * a**3 - 2 * a**2 - 2 * a + 2)


def theorem1_bound(alpha: float) -> float:
    """``(2 - alpha) / (2 (1 - alpha) (1 - alpha^2))``: about 13.81 at 0.85."""
    a = alpha
    return (2 - a) / (2 * (1 - a) * (1 - a**2))


def no_clique_bound(alpha: float) -> float:
    """Limit of the naive ratio when the family has no clique.

    The expression is negative for ``alpha`` in (0, 1); its magnitude is
    the ratio (about 4.69 at ``alpha = 0.85``).
    """
    a = alpha
    return (2 * a**4 + a**2 + a - 6) / (4 * a**3 - 6 * a**2 - 4 * a + 6)


def rgreedy_limit(alpha: float) -> float:
    return 1.0 / (1.0 - alpha**2)


def theorem2_factor(alpha: float) -> float:
    """Worst-case fraction of the optimum r-Greedy is guaranteed to reach."""
    return (1.0 - alpha**2) * (1.0 - 1.0 / math.e)


def e_factor() -> float:
    return math.e / (math.e - 1.0)


def rgreedy_ratio(alpha: float, k: int, c: float) -> float:
    """Closed-form r-Greedy ratio on sink-versus-sink with ``t_b = c``,
    ``t_c = c + 1``, ``t_i = c**2``.  Exact at finite size."""
    a = alpha
    num = -(
        (a**2 * c * k + a * k + 1)
        * ((1 - a**4) * (c + 1) * k + (1 - a**2) * c * k + (-(a**3) - a + 2) * k + c**2 - a**2 + 1)
    )
    den = (
        (-(a**3) - a**2 + a + 1) * (c + 1) * k
        + (a + 1) * c * k
        + (-(a**2) + a + 2) * k
        + (a + 1) * c**2
        + a
        + 1
    ) * ((a**3 - a**2) * (c + 1) * k + (a**2 - a) * k + a - 1)
    if den == 0:
        raise ZeroDivisionError("rgreedy_ratio denominator vanishes")
    return num / den
