"""Acceptance suite: one PASS/FAIL line per criterion, then the assertion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines
inline; they are printed with capture disabled either way.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import pytest

from roman_ilp.bench import BenchConfig, format_table, run_instance, run_suite
from roman_ilp.cli import main
from roman_ilp.graph import InstanceDescriptor, complete_graph, cycle_graph, path_graph, star_graph
from roman_ilp.labeling import LabelFunction, validate_3rdf, validate_4rdf, validate_krdf
from roman_ilp.model import ModelId, build, encode_labeling, integerize
from roman_ilp.oracle import exact_gamma
from roman_ilp.solver import SolveStatus, solve, verify

from conftest import connected_graphs, corpus

M = ModelId
GRID_NODE_LIMIT = 300_000
GRID_ROWS = tuple((n, p, 1) for n in (10, 25) for p in (0.2, 0.5, 0.8))
GRID_MODELS = (M.M3RDP1, M.M3RDP2, M.M3RDP3, M.M4RDP1, M.M4RDP2, M.M4RDP3)


@pytest.fixture
def verdict(capsys):
    def emit(number: int, title: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail}")
        assert ok, detail

    return emit


@lru_cache(maxsize=None)
def _oracle(index: int, k: int, no_ones: bool) -> int:
    g, _ = corpus()[index]
    allowed = [x for x in range(k + 2) if x != 1] if no_ones else None
    return exact_gamma(g, k, allowed).optimum


@lru_cache(maxsize=None)
def _solved(index: int, mid: ModelId):
    g, _ = corpus()[index]
    return solve(integerize(build(g, mid)))


def _grid_config() -> BenchConfig:
    return BenchConfig(GRID_ROWS, GRID_MODELS, node_limit=GRID_NODE_LIMIT)


@lru_cache(maxsize=None)
def _grid_report():
    return run_suite(_grid_config())


def test_criterion_1_exact_models_match_oracle(verdict):
    graphs = corpus()
    mismatches = []
    for i, (g, desc) in enumerate(graphs):
        for k, mid in ((3, M.M3RDP_AN), (4, M.M4RDP_AN)):
            sol = _solved(i, mid)
            if sol.status is not SolveStatus.OPTIMAL or sol.objective != _oracle(i, k, False):
                mismatches.append((desc.label, mid.display, sol.objective, _oracle(i, k, False)))
    checked = 2 * len(graphs)
    ok = len(graphs) >= 200 and not mismatches
    verdict(1, "exact models vs oracle", ok,
            f"{checked - len(mismatches)}/{checked} solves equal the oracle on {len(graphs)} graphs"
            + (f"; first mismatch {mismatches[0]}" if mismatches else ""))


def test_criterion_2_validators_agree(verdict):
    disagreements = 0
    checked = 0
    for g in connected_graphs(4):
        for k, explicit in ((3, validate_3rdf), (4, validate_4rdf)):
            for labels in itertools.product(range(k + 2), repeat=g.vertex_count):
                f = LabelFunction(labels, k)
                checked += 1
                if explicit(g, f).valid != validate_krdf(g, f, k).valid:
                    disagreements += 1
    verdict(2, "explicit vs general validator", disagreements == 0,
            f"{disagreements} disagreements over {checked} labelings")


def test_criterion_3_label_one_is_never_needed(verdict):
    graphs = corpus()
    bad = [
        (graphs[i][1].label, k)
        for i in range(len(graphs))
        for k in (3, 4)
        if _oracle(i, k, False) != _oracle(i, k, True)
    ]
    verdict(3, "label-1 elimination", not bad,
            f"{2 * len(graphs) - len(bad)}/{2 * len(graphs)} optima unchanged without label 1"
            + (f"; first failure {bad[0]}" if bad else ""))


def test_criterion_4_dropping_at_most_one_keeps_optimum(verdict):
    graphs = corpus()
    bad = []
    for i, (_, desc) in enumerate(graphs):
        for full, relaxed in ((M.M3RDP2, M.M3RDP3), (M.M4RDP2, M.M4RDP3)):
            a, b = _solved(i, full), _solved(i, relaxed)
            if a.status is not SolveStatus.OPTIMAL or b.status is not SolveStatus.OPTIMAL or a.objective != b.objective:
                bad.append((desc.label, full.display, a.objective, relaxed.display, b.objective))
    verdict(4, "relaxed models keep the optimum", not bad,
            f"{2 * len(graphs) - len(bad)}/{2 * len(graphs)} pairs equal"
            + (f"; first failure {bad[0]}" if bad else ""))


def test_criterion_5_encoding_gaps_reproduced(verdict):
    star = star_graph(3)
    sol = solve(integerize(build(star, M.M4RDP2)))
    gamma = exact_gamma(star, 4).optimum
    rows = run_instance(star, InstanceDescriptor(4, 1.0, 0, 3), [M.M4RDP2], oracle_cross_check=True)
    flagged = any("oracle gamma_4R=5 differs from 4" in note for note in rows[0].notes)

    c4 = cycle_graph(4)
    f = LabelFunction((2, 2, 2, 0), 3)
    m = build(c4, M.M3RDP2)
    accepted = verify(m, encode_labeling(m, f)).ok
    rejected = not validate_3rdf(c4, f).valid

    ok = sol.objective == 4 and gamma == 5 and flagged and accepted and rejected
    verdict(5, "encoding-gap regressions", ok,
            f"star: faithful M4RDP-2={sol.objective}, oracle={gamma}, flagged={flagged}; "
            f"C4 (2,2,2,0): model accepts={accepted}, validator rejects={rejected}")


GOLDEN = [
    ("K2", complete_graph(2), 3, 4),
    ("P3", path_graph(3), 3, 4),
    ("C4", cycle_graph(4), 3, 6),
    ("C5", cycle_graph(5), 3, 7),
    ("K2", complete_graph(2), 4, 5),
    ("K1,3", star_graph(3), 4, 5),
]


def test_criterion_6_small_graph_optima(verdict, tmp_path, capsys):
    failures = []
    for name, g, k, expected in GOLDEN:
        oracle = exact_gamma(g, k).optimum
        model = solve(integerize(build(g, M.M3RDP_AN if k == 3 else M.M4RDP_AN))).objective
        path = tmp_path / f"{name}-{k}.txt"
        path.write_text(f"{g.vertex_count}\n" + "".join(f"{u} {v}\n" for u, v in g.edges))
        main(["oracle", "--graph", str(path), "--k", str(k)])
        cli_oracle = int(capsys.readouterr().out.splitlines()[0])
        main(["solve", "--graph", str(path), "--model", f"M{k}RDP_AN"])
        cli_solve = int(capsys.readouterr().out.splitlines()[0])
        if {oracle, model, cli_oracle, cli_solve} != {expected}:
            failures.append((name, k, expected, oracle, model, cli_oracle, cli_solve))
    verdict(6, "golden small-graph optima", not failures,
            f"{len(GOLDEN) - len(failures)}/{len(GOLDEN)} graphs agree across oracle, exact models and CLI"
            + (f"; first failure {failures[0]}" if failures else ""))


def test_criterion_7_reduced_table_grid(verdict):
    report = _grid_report()
    table = format_table(report, times=True)
    lines = table.splitlines()
    header = next(line for line in lines if line.startswith("| \\|V\\|"))
    body = [line for line in lines if line.startswith("| ") and line != header]
    shape_ok = header.count(" result ") == len(GRID_MODELS) and len(body) == len(GRID_ROWS)
    dash_ok = any(r.status == "TimedOut" for r in report.rows) and "| - | - |" in table
    disagreements = report.disagreements()
    optimal = sum(r.status == "Optimal" for r in report.rows)
    ok = shape_ok and dash_ok and not disagreements and optimal > 0
    verdict(7, "reduced table grid consistency", ok,
            f"{len(disagreements)} cross-model disagreements; {optimal}/{len(report.rows)} cells optimal; "
            f"table shape ok={shape_ok}; '-' cells rendered={dash_ok}")


def test_criterion_8_reports_are_byte_identical(verdict):
    first = _grid_report()
    second = run_suite(_grid_config())
    same = {
        style: format_table(first, style, times=False) == format_table(second, style, times=False)
        for style in ("markdown", "csv")
    }
    size = len(format_table(second, "markdown", times=False))
    verdict(8, "deterministic reports", all(same.values()),
            f"markdown identical={same['markdown']} ({size} bytes); csv identical={same['csv']}")
