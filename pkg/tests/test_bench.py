import csv
import io

import pytest

from roman_ilp.bench import (
    BenchConfig,
    BenchReport,
    BenchRow,
    ConfigError,
    format_table,
    parse_config,
    resolve_models,
    run_instance,
    run_suite,
    seeded_corpus,
)
from roman_ilp.graph import InstanceDescriptor, erdos_renyi_connected, star_graph
from roman_ilp.model import ModelId

M = ModelId


def _row(model, status="Optimal", result=7, wall=1.234, notes=()):
    desc = InstanceDescriptor(10, 0.5, 3, 21)
    return BenchRow(10, 0.5, 3, desc, model, status, result, wall, notes)


class TestFormatTable:
    def test_empty_report_is_header_only(self):
        text = format_table(BenchReport(), times=False)
        assert text == "| \\|V\\| | \\|E\\| | p |\n|---|---|---|\n"
        assert format_table(BenchReport(), "csv") == "|V|,|E|,p\r\n"

    def test_timed_out_row_dashes(self):
        report = BenchReport([_row(M.M3RDP1, "TimedOut", 9, 20.0)], (M.M3RDP1,))
        text = format_table(report, "csv")
        assert text.splitlines()[1] == "10,21,0.5,-,-"
        md = format_table(report, times=False)
        assert md.splitlines()[-1] == "| 10 | 21 | 0.5 | - |"

    def test_optimal_cells(self):
        report = BenchReport([_row(M.M3RDP1), _row(M.M3RDP2, wall=0.005)], (M.M3RDP1, M.M3RDP2))
        rows = list(csv.reader(io.StringIO(format_table(report, "csv"))))
        assert rows[0] == ["|V|", "|E|", "p", "M3RDP-1 result", "M3RDP-1 time", "M3RDP-2 result", "M3RDP-2 time"]
        assert rows[1] == ["10", "21", "0.5", "7", "1.23", "7", "0.01"]

    def test_notes_listed_after_table(self):
        report = BenchReport([_row(M.M4RDP2, notes=("models disagree: x",))], (M.M4RDP2,))
        text = format_table(report, times=False)
        assert text.endswith("Notes:\n- er-10-0.5-seed3 M4RDP-2: models disagree: x\n")
        assert report.disagreements()

    def test_no_times_is_deterministic(self):
        cfg = BenchConfig(((8, 0.5, 1), (9, 0.3, 2)), (M.M3RDP2, M.M3RDP3))
        a = format_table(run_suite(cfg), times=False)
        b = format_table(run_suite(cfg), times=False)
        assert a == b
        assert "<!--" not in a

    def test_environment_comment_with_times(self):
        cfg = BenchConfig(((6, 0.5, 1),), (M.M3RDP_AN,))
        assert format_table(run_suite(cfg)).startswith("<!-- cores=")

    def test_unknown_style(self):
        with pytest.raises(ValueError):
            format_table(BenchReport(), "html")


class TestRunSuite:
    def test_tiny_budget_renders_dash(self):
        cfg = BenchConfig(((40, 0.2, 1),), (M.M4RDP_AN,), budget_seconds=0.001)
        report = run_suite(cfg)
        assert report.rows[0].status == "TimedOut"
        assert format_table(report, "csv", times=False).splitlines()[1].endswith(",-")

    def test_oracle_cross_check_exact_model_clean(self):
        rows = tuple((8, 0.4, s) for s in range(3))
        cfg = BenchConfig(rows, (M.M3RDP_AN,), oracle_cross_check=True)
        report = run_suite(cfg)
        assert len(report.rows) == 3
        assert report.notes() == []

    def test_star_gap_flagged(self):
        g = star_graph(3)
        desc = InstanceDescriptor(4, 1.0, 0, 3)
        rows = run_instance(g, desc, [M.M4RDP2, M.M4RDP_AN], oracle_cross_check=True)
        faithful, exact = rows
        assert faithful.result == 4 and exact.result == 5
        assert any("not a valid 4RDF" in n for n in faithful.notes)
        assert any("oracle gamma_4R=5 differs from 4" in n for n in faithful.notes)
        assert any("models disagree" in n for n in faithful.notes)
        assert not any("oracle" in n for n in exact.notes)

    def test_m4_variants_agree_at_ten_vertices(self):
        cfg = BenchConfig(((10, 0.5, 11),), (M.M4RDP1, M.M4RDP2, M.M4RDP3))
        report = run_suite(cfg)
        assert len({r.result for r in report.rows}) == 1
        assert all(r.status == "Optimal" for r in report.rows)
        assert report.disagreements() == []

    def test_parallel_matches_serial(self):
        rows = ((7, 0.5, 1), (8, 0.3, 2), (6, 0.6, 3))
        serial = run_suite(BenchConfig(rows, (M.M3RDP2,)))
        parallel = run_suite(BenchConfig(rows, (M.M3RDP2,), jobs=2))
        assert format_table(serial, times=False) == format_table(parallel, times=False)

    def test_generation_failure_is_per_row(self):
        cfg = BenchConfig(((5, 0.0, 1), (5, 0.9, 1)), (M.M3RDP_AN,))
        report = run_suite(cfg)
        assert report.rows[0].status == "Skipped"
        assert "generation failed" in report.rows[0].notes[0]
        assert report.rows[1].status == "Optimal"


def test_resolve_models():
    assert resolve_models([M.M3RDP1, M.M3RDP2], "faithful") == (M.M3RDP1, M.M3RDP2)
    assert resolve_models([M.M3RDP1, M.M3RDP2], "corrected") == (M.M3RDP_AN,)
    assert resolve_models([M.M4RDP1], "both") == (M.M4RDP1, M.M4RDP_AN)


def test_seeded_corpus_shape():
    corpus = seeded_corpus(24)
    assert len(corpus) == 24
    assert {d.n for _, d in corpus} == set(range(4, 10))
    assert {d.p for _, d in corpus} == {0.3, 0.6}
    assert all(g.is_connected() for g, _ in corpus)
    assert seeded_corpus(24) == corpus


class TestConfig:
    def test_parse_full(self):
        cfg = parse_config(
            "# grid\n"
            "n = 10, 25\n"
            "p = 0.2, 0.5\n"
            "seeds = 1, 2\n"
            "models = M3RDP-1, M3RDP2\n"
            "fidelity = both\n"
            "budget = 60   # seconds\n"
            "node_limit = 5000\n"
            "oracle_cross_check = yes\n"
            "jobs = 2\n"
        )
        assert cfg.rows[0] == (10, 0.2, 1) and len(cfg.rows) == 8
        assert cfg.resolved_models() == (M.M3RDP1, M.M3RDP2, M.M3RDP_AN)
        assert cfg.budget_seconds == 60 and cfg.node_limit == 5000
        assert cfg.oracle_cross_check and cfg.jobs == 2

    def test_defaults(self):
        cfg = parse_config("n = 5\np = 0.5\nmodels = M3RDP_AN\n")
        assert cfg.rows == ((5, 0.5, 0),)
        assert cfg.budget_seconds == 1800 and cfg.fidelity == "faithful"

    @pytest.mark.parametrize(
        "text",
        [
            "n = 5\np = 0.5\nmodels = M3RDP1\ncolour = red\n",
            "n = 5\np = 0.5\nmodels = M3RDP1\nbudget = 0\n",
            "n = 5\np = 0.5\nmodels = M3RDP1\nfidelity = loose\n",
            "n = 5\np = 0.5\nmodels = \n",
            "n = 5\nmodels = M3RDP1\n",
            "n = five\np = 0.5\nmodels = M3RDP1\n",
            "n 5\n",
            "n = 5\np = 0.5\nmodels = M3RDP1\noracle_max_n = 13\n",
            "n = 5\np = 0.5\nmodels = M9\n",
        ],
    )
    def test_rejects(self, text):
        with pytest.raises(ConfigError):
            parse_config(text)
