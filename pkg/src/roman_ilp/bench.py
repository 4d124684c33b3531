"""Benchmark harness: seeded G(n, p) grids, per-model solves, result tables.

Each instance is solved with every requested formulation; the decoded optimum
is checked against the combinatorial definition and, for small graphs,
against the brute-force oracle. Mismatches are recorded as notes on the row
rather than raised, since the published formulations are known to diverge
from the definitions on some graphs.
"""

from __future__ import annotations

import csv
import io
import itertools
import os
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import GenerationError, Graph, InstanceDescriptor, erdos_renyi_connected
from .labeling import validate
from .model import ModelId, build, decode_solution, integerize
from .oracle import DEFAULT_CAP, exact_gamma
from .solver import SolveStatus, solve, verify

FIDELITIES = ("faithful", "corrected", "both")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BenchConfig:
    rows: tuple[tuple[int, float, int], ...]
    models: tuple[ModelId, ...]
    fidelity: str = "faithful"
    budget_seconds: float = 1800.0
    node_limit: int | None = None
    oracle_cross_check: bool = False
    oracle_max_n: int = 9
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.budget_seconds <= 0:
            raise ConfigError(f"budget must be positive, got {self.budget_seconds}")
        if self.fidelity not in FIDELITIES:
            raise ConfigError(f"fidelity must be one of {FIDELITIES}, got {self.fidelity!r}")
        if self.oracle_max_n > DEFAULT_CAP:
            raise ConfigError(f"oracle_max_n {self.oracle_max_n} exceeds oracle cap {DEFAULT_CAP}")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if not self.models:
            raise ConfigError("at least one model id is required")

    def resolved_models(self) -> tuple[ModelId, ...]:
        return resolve_models(self.models, self.fidelity)


def resolve_models(models: Iterable[ModelId], fidelity: str) -> tuple[ModelId, ...]:
    """Expand requested ids under a fidelity mode.

    ``corrected`` swaps each published formulation for the exact model with
    the same k; ``both`` keeps the published ones and appends the exact ones.
    """
    models = list(models)
    corrected = [ModelId.M3RDP_AN if m.k == 3 else ModelId.M4RDP_AN for m in models]
    if fidelity == "faithful":
        chosen = models
    elif fidelity == "corrected":
        chosen = corrected
    else:
        chosen = models + corrected
    return tuple(dict.fromkeys(chosen))


@dataclass(frozen=True)
class BenchRow:
    n: int
    p: float
    seed: int
    descriptor: InstanceDescriptor | None
    model: ModelId
    status: str
    result: int | None
    wall: float | None
    notes: tuple[str, ...] = ()

    @property
    def fidelity(self) -> str:
        return "corrected" if self.model.is_exact else "faithful"

    @property
    def result_cell(self) -> str:
        if self.status == SolveStatus.OPTIMAL.value:
            return str(self.result)
        if self.status == SolveStatus.INFEASIBLE.value:
            return "infeasible"
        return "-"

    @property
    def time_cell(self) -> str:
        if self.status != SolveStatus.OPTIMAL.value or self.wall is None:
            return "-"
        return f"{self.wall:.2f}"


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    models: tuple[ModelId, ...] = ()
    environment: dict[str, str] = field(default_factory=dict)

    def notes(self) -> list[tuple[BenchRow, str]]:
        return [(row, note) for row in self.rows for note in row.notes]

    def disagreements(self) -> list[tuple[BenchRow, str]]:
        return [(r, n) for r, n in self.notes() if n.startswith("models disagree")]


def environment_metadata() -> dict[str, str]:
    return {
        "os": f"{platform.system()} {platform.release()}",
        "python": platform.python_version(),
        "cores": str(os.cpu_count() or 1),
    }


def seeded_corpus(
    count: int = 200,
    sizes: Sequence[int] = tuple(range(4, 10)),
    probabilities: Sequence[float] = (0.3, 0.6),
    base_seed: int = 20230313,
) -> list[tuple[Graph, InstanceDescriptor]]:
    """Deterministic list of connected G(n, p) graphs cycling through the grid."""
    grid = list(itertools.product(probabilities, sizes))
    out = []
    for i in range(count):
        p, n = grid[i % len(grid)]
        out.append(erdos_renyi_connected(n, p, base_seed + 7919 * i))
    return out


def run_instance(
    g: Graph,
    descriptor: InstanceDescriptor,
    models: Sequence[ModelId],
    budget: float = 1800.0,
    node_limit: int | None = None,
    oracle_cross_check: bool = False,
    oracle_max_n: int = 9,
) -> list[BenchRow]:
    """Solve one graph with each model and annotate discrepancies."""
    label = descriptor.label
    solved = []
    for model_id in models:
        m = integerize(build(g, model_id, graph_label=label))
        sol = solve(m, budget, node_limit=node_limit)
        notes = []
        if sol.status is SolveStatus.OPTIMAL:
            check = verify(m, sol.assignment)
            if not check.ok or m.objective_value(sol.assignment) != sol.objective:
                notes.append(f"result {sol.objective} fails verification: {', '.join(check.violated[:3])}")
            decoded = decode_solution(m, sol.assignment)
            if decoded.is_multi_set:
                notes.append(f"multi-set label variables at {_vertex_list(decoded.multi_set)}")
            verdict = validate(g, decoded.labels)
            if not verdict.valid:
                bad = [x.vertex for x in verdict.violations]
                notes.append(
                    f"decoded labeling is not a valid {model_id.k}RDF (fails at {_vertex_list(bad)})"
                )
        solved.append((model_id, sol, notes))

    optimal = {mid: sol.objective for mid, sol, _ in solved if sol.status is SolveStatus.OPTIMAL}
    oracle_values: dict[int, int] = {}
    if oracle_cross_check and g.vertex_count <= oracle_max_n:
        for k in sorted({mid.k for mid in optimal}):
            oracle_values[k] = exact_gamma(g, k).optimum

    rows = []
    for model_id, sol, notes in solved:
        if model_id in optimal:
            peers = {mid: val for mid, val in optimal.items() if mid.k == model_id.k}
            if len(set(peers.values())) > 1:
                listing = ", ".join(f"{mid.display}={val}" for mid, val in peers.items())
                notes.append(f"models disagree: {listing}")
            if model_id.k in oracle_values and oracle_values[model_id.k] != sol.objective:
                notes.append(
                    f"oracle gamma_{model_id.k}R={oracle_values[model_id.k]} differs from {sol.objective}"
                )
        rows.append(
            BenchRow(
                descriptor.n, descriptor.p, descriptor.seed, descriptor, model_id,
                sol.status.value, sol.objective, sol.wall_time, tuple(notes),
            )
        )
    return rows


def _vertex_list(vertices: Iterable[int]) -> str:
    return ",".join(f"v{v}" for v in vertices)


def _run_grid_row(args: tuple) -> list[BenchRow]:
    (n, p, seed), models, cfg = args
    try:
        g, desc = erdos_renyi_connected(n, p, seed)
    except GenerationError as exc:
        return [BenchRow(n, p, seed, None, mid, "Skipped", None, None, (f"generation failed: {exc}",))
                for mid in models]
    return run_instance(
        g, desc, models, cfg.budget_seconds, cfg.node_limit,
        cfg.oracle_cross_check, cfg.oracle_max_n,
    )


def run_suite(cfg: BenchConfig) -> BenchReport:
    models = cfg.resolved_models()
    tasks = [(row, models, cfg) for row in cfg.rows]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(_run_grid_row, tasks))
    else:
        chunks = [_run_grid_row(t) for t in tasks]
    return BenchReport(list(itertools.chain.from_iterable(chunks)), models, environment_metadata())


def _table(report: BenchReport, times: bool) -> tuple[list[str], list[list[str]]]:
    models = report.models or tuple(dict.fromkeys(r.model for r in report.rows))
    header = ["|V|", "|E|", "p"]
    for mid in models:
        header.append(f"{mid.display} result")
        if times:
            header.append(f"{mid.display} time")
    body = []
    # one line per instance, in first-appearance order
    groups: dict[tuple, dict[ModelId, BenchRow]] = {}
    for row in report.rows:
        groups.setdefault((row.n, row.p, row.seed), {})[row.model] = row
    for (n, p, _), by_model in groups.items():
        first = next(iter(by_model.values()))
        edges = str(first.descriptor.realized_edge_count) if first.descriptor else "-"
        line = [str(n), edges, f"{p:g}"]
        for mid in models:
            row = by_model.get(mid)
            line.append(row.result_cell if row else "-")
            if times:
                line.append(row.time_cell if row else "-")
        body.append(line)
    return header, body


def format_table(report: BenchReport, style: str = "markdown", times: bool = True) -> str:
    """Render the report in the published table shape.

    With ``times=False`` the output depends only on the config and seeds.
    """
    header, body = _table(report, times)
    if style == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(header)
        writer.writerows(body)
        return buf.getvalue()
    if style != "markdown":
        raise ValueError(f"unknown table style {style!r}")
    lines = []
    if times and report.environment:
        env = " ".join(f"{k}={v}" for k, v in sorted(report.environment.items()))
        lines.append(f"<!-- {env} -->")
    esc = [h.replace("|", "\\|") for h in header]
    lines.append("| " + " | ".join(esc) + " |")
    lines.append("|" + "|".join("---" for _ in header) + "|")
    lines.extend("| " + " | ".join(cells) + " |" for cells in body)
    notes = report.notes()
    if notes:
        lines.append("")
        lines.append("Notes:")
        for row, note in notes:
            inst = row.descriptor.label if row.descriptor else f"er-{row.n}-{row.p:g}-seed{row.seed}"
            lines.append(f"- {inst} {row.model.display}: {note}")
    return "\n".join(lines) + "\n"


def _parse_list(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def _parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {value!r}")


def parse_config(text: str) -> BenchConfig:
    """Parse the flat ``key = value`` config format (see README)."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.lower()] = value
    known = {"n", "p", "seed", "seeds", "models", "fidelity", "budget", "node_limit",
             "oracle_cross_check", "oracle_max_n", "jobs"}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        ns = [int(x) for x in _parse_list(values.get("n", ""))]
        ps = [float(x) for x in _parse_list(values.get("p", ""))]
        seeds = [int(x) for x in _parse_list(values.get("seeds", values.get("seed", "0")))]
        models = tuple(ModelId.parse(x) for x in _parse_list(values.get("models", "")))
        node_limit = values.get("node_limit")
        cfg = BenchConfig(
            rows=tuple(itertools.product(ns, ps, seeds)),
            models=models,
            fidelity=values.get("fidelity", "faithful"),
            budget_seconds=float(values.get("budget", 1800)),
            node_limit=int(node_limit) if node_limit else None,
            oracle_cross_check=_parse_bool(values.get("oracle_cross_check", "false")),
            oracle_max_n=int(values.get("oracle_max_n", 9)),
            jobs=int(values.get("jobs", 1)),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None
    if not cfg.rows:
        raise ConfigError("config needs at least one value for each of n and p")
    return cfg
