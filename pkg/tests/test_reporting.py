"""Report outputs: aggregate arithmetic, HTML rendering, CSV trio."""

import csv
from pathlib import Path

import pytest

from txconflict.engine import AnalysisResult, Conflict, ConflictMatrix, detect_all
from txconflict.nodes import Contract
from txconflict.parser import parse
from txconflict.reporting import (
    CONFLICTS_HEADER,
    CONTRACTS_HEADER,
    SUMMARY_HEADER,
    aggregate,
    distinct_conflicts,
    render_html,
    write_csv,
)

from fixtureutil import FIXTURES

GOLDEN = Path(__file__).parent / "golden"


def synthetic_result(qualifier, conflicts, percentage=0.0, ms=0.0):
    return AnalysisResult(
        contract=Contract(name=qualifier),
        qualifier=qualifier,
        path=f"{qualifier.lower()}.sol",
        conflicts=conflicts,
        matrix=ConflictMatrix(functions=[]),
        conflict_percentage=percentage,
        counts_by_kind={},
        analysis_time=ms,
    )


def make_conflict(first, second, kind="RWC", variables=("A.v",), severity="Medium"):
    return Conflict(first, second, kind, tuple(variables), severity, "synthetic")


def fixed_results():
    """Fixture corpus with stable paths and zeroed timings for byte compares."""
    units = [
        parse((FIXTURES / name).read_text(), name)
        for name in ("example.sol", "erc20.sol", "vault.sol")
    ]
    results = detect_all(units)
    for r in results:
        r.analysis_time = 0.0
    return results


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


# -- aggregate -----------------------------------------------------------------

def test_distinct_conflicts_counts_shared_findings_once():
    shared = make_conflict("A.f/0", "B.g/0")
    results = [
        synthetic_result("A", [shared]),
        synthetic_result("B", [shared]),
    ]
    assert len(distinct_conflicts(results)) == 1
    assert aggregate(results).total_conflicts == 1


def test_aggregate_mean_and_max():
    results = [
        synthetic_result("A", [make_conflict("A.a/0", "A.b/0")], percentage=0.2, ms=1.0),
        synthetic_result("B", [
            make_conflict("B.a/0", "B.b/0"),
            make_conflict("B.a/0", "B.c/0", kind="WWC", severity="High"),
            make_conflict("B.b/0", "B.c/0", kind="FCC"),
        ], percentage=0.6, ms=3.0),
    ]
    stats = aggregate(results)
    assert stats.total_contracts == 2
    assert stats.total_conflicts == 4
    assert stats.mean_conflicts == 2.0
    assert stats.max_conflicts == 3
    assert stats.contracts_with_conflicts == 1.0
    assert stats.min_conflict_percentage == 0.2
    assert stats.max_conflict_percentage == 0.6
    assert stats.mean_conflict_percentage == pytest.approx(0.4)
    assert stats.mean_analysis_ms == 2.0
    assert stats.total_analysis_ms == 4.0
    assert stats.analysis_times == [("A", 1.0), ("B", 3.0)]


def test_aggregate_kind_percentages():
    conflicts = [make_conflict("A.a/0", f"A.f{i}/0") for i in range(4)]
    conflicts.append(make_conflict("A.a/0", "A.w/0", kind="WWC", severity="High"))
    stats = aggregate([synthetic_result("A", conflicts)])
    assert stats.percent_by_kind["RWC"] == pytest.approx(80.0)
    assert stats.percent_by_kind["WWC"] == pytest.approx(20.0)
    assert stats.percent_by_kind["FCC"] == pytest.approx(0.0)


def test_aggregate_empty_corpus():
    stats = aggregate([])
    assert stats.total_contracts == 0
    assert stats.total_conflicts == 0
    assert stats.percent_by_kind == {}
    assert stats.mean_conflicts == 0.0


def test_aggregate_without_conflicts_has_no_kind_percentages():
    stats = aggregate([synthetic_result("A", [])])
    assert stats.percent_by_kind == {}
    assert stats.contracts_with_conflicts == 0.0


def test_kind_percentages_sum_to_100_on_fixture_corpus():
    stats = aggregate(fixed_results())
    assert stats.total_conflicts > 0
    assert sum(stats.percent_by_kind.values()) == pytest.approx(100.0, abs=1e-9)


# -- HTML ------------------------------------------------------------------------

SECTIONS = (
    "<h2>Contract</h2>",
    "<h2>State variables</h2>",
    "<h2>Functions</h2>",
    "<h2>Conflicts</h2>",
    "<h2>Conflict matrix</h2>",
    "<h2>Statistics</h2>",
)


def test_html_contains_all_sections():
    for r in fixed_results():
        text = render_html(r)
        for section in SECTIONS:
            assert section in text, (r.qualifier, section)
        assert text.startswith("<!DOCTYPE html>")


def test_html_conflict_rows_and_severity_classes():
    token = next(r for r in fixed_results() if r.qualifier == "Token")
    text = render_html(token)
    assert text.count('<span class="sev-') == len(token.conflicts)
    assert '<span class="sev-High">High</span>' in text
    assert "Token.transferFrom/3" in text


def test_html_matrix_marks_are_symmetric():
    token = next(r for r in fixed_results() if r.qualifier == "Token")
    text = render_html(token)
    assert text.count('<td class="mark">X</td>') == 2 * len(token.matrix.cells)
    # matrix labels drop the qualifier prefix
    assert "<th>transfer/2</th>" in text


def test_html_degenerate_matrix_message():
    unit = parse("contract One { uint256 x; function f() public { x = 1; } }", "one.sol")
    r = detect_all([unit])[0]
    assert "no transactional function pairs" in render_html(r)


def test_html_no_conflicts_message():
    example = next(r for r in fixed_results() if r.qualifier == "Example")
    assert "No conflicts detected." in render_html(example)


def test_html_is_deterministic():
    first = [render_html(r) for r in fixed_results()]
    second = [render_html(r) for r in fixed_results()]
    assert first == second


def test_html_matches_golden():
    example = next(r for r in fixed_results() if r.qualifier == "Example")
    assert render_html(example) == (GOLDEN / "report_Example.html").read_text(encoding="utf-8")


# -- CSV -------------------------------------------------------------------------

def test_empty_results_write_header_only_files(tmp_path):
    paths = write_csv([], tmp_path)
    assert [p.name for p in paths] == ["conflicts.csv", "contracts.csv", "summary.csv"]
    assert read_rows(tmp_path / "conflicts.csv") == [CONFLICTS_HEADER]
    assert read_rows(tmp_path / "contracts.csv") == [CONTRACTS_HEADER]
    summary = read_rows(tmp_path / "summary.csv")
    assert summary[0] == SUMMARY_HEADER
    assert len(summary) == 18  # header plus 17 fixed metrics
    by_metric = dict(summary[1:])
    assert by_metric["total_contracts"] == "0"
    assert by_metric["rwc_percent"] == ""  # undefined without conflicts


def test_csv_lines_end_with_crlf(tmp_path):
    write_csv([], tmp_path)
    raw = (tmp_path / "conflicts.csv").read_bytes()
    assert raw.endswith(b"\r\n")
    assert b"\n" not in raw.replace(b"\r\n", b"")


def test_conflicts_csv_rows_round_trip(tmp_path):
    results = fixed_results()
    write_csv(results, tmp_path)
    rows = read_rows(tmp_path / "conflicts.csv")
    assert rows[0] == CONFLICTS_HEADER
    expected = sorted(
        (c.first.split(".", 1)[0], c.first, c.second, c.kind, c.severity, ";".join(c.variables))
        for c in distinct_conflicts(results)
    )
    assert [tuple(row) for row in rows[1:]] == expected


def test_contracts_csv_one_row_per_contract(tmp_path):
    results = fixed_results()
    write_csv(results, tmp_path)
    rows = read_rows(tmp_path / "contracts.csv")
    assert rows[0] == CONTRACTS_HEADER
    assert [row[0] for row in rows[1:]] == ["Example", "Token", "Vault"]
    example = rows[1]
    assert example[1] == "2" and example[2] == "2" and example[3] == "0"
    assert example[4] == "0.000000"
    token = rows[2]
    assert token[3] == "4"
    assert token[4] == "1.000000"  # all three transactional pairs conflict


def test_summary_csv_values_match_aggregate(tmp_path):
    results = fixed_results()
    write_csv(results, tmp_path)
    stats = aggregate(results)
    by_metric = dict(read_rows(tmp_path / "summary.csv")[1:])
    assert by_metric["total_contracts"] == str(stats.total_contracts)
    assert by_metric["total_conflicts"] == str(stats.total_conflicts)
    assert by_metric["rwc_count"] == str(stats.counts_by_kind["RWC"])
    assert float(by_metric["rwc_percent"]) == pytest.approx(stats.percent_by_kind["RWC"], abs=5e-5)
    assert by_metric["mean_conflicts_per_contract"] == f"{stats.mean_conflicts:.6f}"
    assert by_metric["max_conflicts_per_contract"] == str(stats.max_conflicts)


def test_csv_outputs_match_golden(tmp_path):
    write_csv(fixed_results(), tmp_path)
    for name in ("conflicts.csv", "contracts.csv", "summary.csv"):
        assert (tmp_path / name).read_bytes() == (GOLDEN / name).read_bytes(), name


def test_failed_write_cleans_up_partials(tmp_path):
    (tmp_path / "summary.csv").mkdir()  # writing the third file will fail
    with pytest.raises(OSError):
        write_csv([], tmp_path)
    assert not (tmp_path / "conflicts.csv").exists()
    assert not (tmp_path / "contracts.csv").exists()
