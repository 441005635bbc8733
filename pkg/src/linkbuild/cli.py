"""Command-line entry point: ``linkbuild <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 bound violation.
"""

from __future__ import annotations

import argparse
import sys

from . import experiments as ex
from .families import ConstructionError, cycle_vs_sink, save_roles, sink_vs_sink
from .graph import GraphError, read_graph, save_edge_list
from .selectors import STRATEGIES, SelectionError, select
from .surfer import ConvergenceError, SurferParams

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_VIOLATION = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p, fmt_default="csv"):
    p.add_argument("--alpha", type=float, default=0.85)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default=fmt_default)
    p.add_argument("--out", default=None, help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="linkbuild", description="PageRank link-building experiments")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("select", help="choose k backlink sources for a target")
    p.add_argument("graph", help="edge-list file")
    p.add_argument("--x", type=int, required=True, help="target node")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--strategy", choices=sorted(STRATEGIES), default="rgreedy")
    _common(p, fmt_default=None)

    p = sub.add_parser("theorem1", aliases=["naive-sweep"], help="naive strategy on cycle-versus-sink graphs")
    p.add_argument("--u", type=int, nargs="+", default=[20, 50, 100])
    p.add_argument("--k", type=int, nargs="+", default=[5])
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--clique-degree", type=int, default=8)
    _common(p)

    p = sub.add_parser("theorem3", aliases=["rgreedy-sweep"], help="r-Greedy on sink-versus-sink graphs")
    p.add_argument("--c", type=int, nargs="+", default=[10, 50, 100])
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--clique-degree", type=int, default=8)
    _common(p)

    p = sub.add_parser("guarantee", help="r-Greedy versus exhaustive on random graphs")
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--max-n", type=int, default=12)
    p.add_argument("--k", type=int, default=3, help="largest budget drawn")
    p.add_argument("--seed", type=int, default=0)
    _common(p)

    p = sub.add_parser("witness", help="search for a non-submodular pi_x witness")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--instances", type=int, default=200, help="random graphs to try")
    p.add_argument("--seed", type=int, default=0)
    _common(p)

    p = sub.add_parser("generate", help="write an adversarial instance and its role sidecar")
    p.add_argument("family", choices=("cycle-vs-sink", "sink-vs-sink"))
    p.add_argument("--u", type=int, default=20)
    p.add_argument("--c", type=int, default=10)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--alpha", type=float, default=0.85)
    p.add_argument("--clique-degree", type=int, default=None)
    p.add_argument("--out", required=True, help="graph path; roles go to OUT.roles")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(rows, fmt, extra=None) -> str:
    if fmt == "json":
        payload = {"rows": rows}
        if extra:
            payload.update(extra)
        return ex.write_json(payload)
    return ex.write_csv(rows)


def cmd_select(args) -> int:
    g = read_graph(args.graph)
    params = SurferParams(alpha=args.alpha, tol=args.tol)
    res = select(args.strategy, g, args.x, args.k, params)
    trace = [dict(step=i + 1, node=s.node, value=s.value) for i, s in enumerate(res.trace)]
    if args.fmt == "json":
        text = ex.write_json(dict(
            strategy=res.strategy, target=res.target, sources=list(res.sources),
            pi_x_before=res.initial_pi_x, pi_x_after=res.final_pi_x, trace=trace,
        ))
    elif args.fmt == "csv":
        text = ex.write_csv(trace)
    else:
        lines = [
            f"strategy: {res.strategy}",
            f"target: {res.target}",
            f"sources: {' '.join(map(str, res.sources))}",
            f"pi_x before: {res.initial_pi_x:.12g}",
            f"pi_x after: {res.final_pi_x:.12g}",
            "trace:",
        ]
        lines += [f"  {t['step']}: node {t['node']} value {t['value']:.12g}" for t in trace]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def to_config(args) -> ex.ExperimentConfig:
    """Collect the sweep options of a parsed command line."""
    cfg = ex.ExperimentConfig(command=args.command, alpha=args.alpha)
    for name in ("u", "c", "delta", "instances", "max_n", "seed", "tol", "clique_degree", "fmt", "out"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if hasattr(args, "k"):
        cfg.k = list(args.k) if isinstance(args.k, list) else [args.k]
    return cfg


def cmd_theorem1(args) -> int:
    cfg = to_config(args)
    rows = ex.theorem1_rows(cfg.u, cfg.k, cfg.delta, cfg.alpha, cfg.clique_degree, cfg.tol)
    _emit(_table(rows, cfg.fmt), cfg.out)
    return EXIT_OK


def cmd_theorem3(args) -> int:
    cfg = to_config(args)
    rows = ex.theorem3_rows(cfg.c, cfg.k[0], cfg.alpha, cfg.clique_degree, cfg.tol)
    _emit(_table(rows, cfg.fmt), cfg.out)
    return EXIT_OK


def cmd_guarantee(args) -> int:
    cfg = to_config(args)
    rows, summary, witnesses = ex.guarantee_rows(
        cfg.instances, cfg.max_n, cfg.k[0], cfg.alpha, cfg.seed, cfg.tol
    )
    if cfg.fmt == "json":
        text = ex.write_json({"summary": summary, "rows": rows})
    else:
        text = ex.write_csv([summary])
    _emit(text, cfg.out)
    if witnesses:
        inst, greedy, best = witnesses[0]
        sys.stderr.write(
            f"bound violated on instance {inst.index} (target {inst.target}, k={inst.k}): "
            f"greedy {greedy.sources} vs optimal {best.sources}\n"
        )
        sys.stderr.write(ex.edge_list_text(inst.graph))
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_witness(args) -> int:
    cfg = to_config(args)
    w = ex.find_nonsubmodular_witness(
        max_n=cfg.max_n, attempts=cfg.instances, alpha=cfg.alpha, seed=cfg.seed, tol=cfg.tol
    )
    if w is None:
        if args.fmt == "json":
            text = ex.write_json({"found": False})
        else:
            text = "found\nfalse\n"
        _emit(text, args.out)
        return EXIT_OK
    payload_rows = ex.witness_rows(w)
    if args.fmt == "json":
        text = ex.write_json({
            "found": True,
            "verified": ex.recheck_witness(w, args.alpha, args.tol),
            "graph": ex.edge_list_text(w.graph),
            **payload_rows[0],
        })
    else:
        text = ex.write_csv(payload_rows) + "".join(
            f"# {line}\n" for line in ex.edge_list_text(w.graph).splitlines()
        )
    _emit(text, args.out)
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.family == "cycle-vs-sink":
        inst = cycle_vs_sink(args.u, args.k, args.delta, args.alpha, args.clique_degree)
    else:
        inst = sink_vs_sink(args.c, args.k, args.alpha, args.clique_degree)
    with open(args.out, "wb") as fh:
        fh.write(save_edge_list(inst.graph))
    with open(args.out + ".roles", "wb") as fh:
        fh.write(save_roles(inst))
    return EXIT_OK


COMMANDS = {
    "select": cmd_select,
    "theorem1": cmd_theorem1,
    "naive-sweep": cmd_theorem1,
    "theorem3": cmd_theorem3,
    "rgreedy-sweep": cmd_theorem3,
    "guarantee": cmd_guarantee,
    "witness": cmd_witness,
    "generate": cmd_generate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (OSError, GraphError, SelectionError, ConstructionError, ConvergenceError,
            IndexError, ValueError) as exc:
        sys.stderr.write(f"linkbuild {args.command}: {exc}\n")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
