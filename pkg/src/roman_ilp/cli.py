"""Command-line entry point: ``roman-ilp {gen,validate,oracle,solve,export,bench}``.

Exit codes: 0 success, 1 invalid labeling or failed check, 2 usage or input
error, 3 time budget exhausted without any feasible solution.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .bench import ConfigError, format_table, parse_config, resolve_models, run_suite
from .graph import GraphError, ParseError, erdos_renyi, erdos_renyi_connected, parse_edge_list, serialize_edge_list
from .labeling import ShapeError, format_labels, parse_labels, validate, validate_krdf
from .model import ModelId, build, decode_solution, export_lp, integerize
from .oracle import CapacityError, exact_gamma
from .solver import SolveStatus, solve

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_TIMEOUT = 3


class _UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_graph(path: str):
    try:
        return parse_edge_list(_read(path))
    except (ParseError, GraphError) as exc:
        raise _UsageError(f"{path}: {exc}") from None


def _resolve_model(model: str, fidelity: str) -> ModelId:
    try:
        mid = ModelId.parse(model)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    return resolve_models([mid], fidelity)[0]


def cmd_gen(args: argparse.Namespace) -> int:
    if args.connected:
        g, desc = erdos_renyi_connected(args.n, args.p, args.seed)
        seed = desc.seed
    else:
        g, seed = erdos_renyi(args.n, args.p, args.seed), args.seed
    sys.stdout.write(f"# G(n={args.n}, p={args.p:g}) seed={seed} edges={g.edge_count}\n")
    sys.stdout.write(serialize_edge_list(g))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    try:
        f = parse_labels(_read(args.labels), args.k)
        verdict = validate_krdf(g, f, args.k) if args.rule == "an" else validate(g, f)
    except (ValueError, ShapeError) as exc:
        raise _UsageError(str(exc)) from None
    if verdict.valid:
        print(f"valid {args.k}RDF, weight {sum(f)}")
        return EXIT_OK
    print(f"invalid {args.k}RDF: {len(verdict.violations)} violation(s)")
    for v in verdict.violations:
        print(f"  v{v.vertex} [{v.clause}] {v.reason}")
    return EXIT_INVALID


def cmd_oracle(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    allowed = None if not args.no_ones else [x for x in range(args.k + 2) if x != 1]
    try:
        res = exact_gamma(g, args.k, allowed, cap=args.cap)
    except CapacityError as exc:
        raise _UsageError(str(exc)) from None
    print(res.optimum)
    print(format_labels(res.witness))
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    mid = _resolve_model(args.model, args.fidelity)
    m = integerize(build(g, mid, graph_label=Path(args.graph).name))
    sol = solve(m, args.budget, node_limit=args.node_limit)
    if sol.assignment is None:
        if sol.status is SolveStatus.TIMED_OUT:
            print(f"- (no feasible solution within budget; {sol.nodes_explored} nodes)")
            return EXIT_TIMEOUT
        print("infeasible")
        return EXIT_INVALID
    decoded = decode_solution(m, sol.assignment)
    suffix = "" if sol.status is SolveStatus.OPTIMAL else " (budget exhausted; best incumbent)"
    print(f"{sol.objective}{suffix}")
    print(format_labels(decoded.labels))
    print(f"# model={mid.value} nodes={sol.nodes_explored} time={sol.wall_time:.2f}s")
    if decoded.is_multi_set:
        print(f"# note: several label variables set at vertices {list(decoded.multi_set)}")
    verdict = validate(g, decoded.labels)
    if not verdict.valid:
        bad = [v.vertex for v in verdict.violations]
        print(f"# gap: optimum of {mid.value} decodes to a labeling that is not a "
              f"valid {mid.k}RDF (fails at vertices {bad})")
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    mid = _resolve_model(args.model, args.fidelity)
    text = export_lp(integerize(build(g, mid, graph_label=Path(args.graph).name, literal_3c=args.literal_3c)))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    try:
        cfg = parse_config(_read(args.config))
    except ConfigError as exc:
        raise _UsageError(f"{args.config}: {exc}") from None
    if args.jobs is not None:
        cfg = replace(cfg, jobs=args.jobs)
    report = run_suite(cfg)
    sys.stdout.write(format_table(report, args.format, times=not args.no_times))
    return EXIT_OK


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="roman-ilp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a seeded G(n, p) edge list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--connected", action="store_true", help="redraw (seed+1, ...) until connected")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("validate", help="check a labeling against the definition")
    p.add_argument("--graph", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--k", type=int, choices=(3, 4), required=True)
    p.add_argument("--rule", choices=("explicit", "an"), default="explicit")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("oracle", help="exact optimum by exhaustive search (small graphs)")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, choices=(3, 4), required=True)
    p.add_argument("--cap", type=int, default=12)
    p.add_argument("--no-ones", action="store_true", help="forbid label 1")
    p.set_defaults(func=cmd_oracle)

    for name, func, help_text in (
        ("solve", cmd_solve, "solve an ILP formulation by branch and bound"),
        ("export", cmd_export, "write an ILP formulation in LP format"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--graph", required=True)
        p.add_argument("--model", required=True)
        p.add_argument("--fidelity", choices=("faithful", "corrected"), default="faithful")
        if name == "solve":
            p.add_argument("--budget", type=_positive_float, default=1800.0)
            p.add_argument("--node-limit", type=int, default=None)
        else:
            p.add_argument("--literal-3c", action="store_true")
            p.add_argument("--output", "-o")
        p.set_defaults(func=func)

    p = sub.add_parser("bench", help="run a benchmark grid from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    p.add_argument("--no-times", action="store_true")
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (_UsageError, GraphError) as exc:
        print(f"roman-ilp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
