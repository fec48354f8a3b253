"""Report rendering: per-contract HTML, corpus CSV trio, aggregate stats.

All output is deterministic for a fixed input: rows sort lexicographically,
floats use fixed formats (ratios .6f, percentages .4f, milliseconds .3f),
and the HTML is dependency-free static markup so reports open from disk.
"""

from __future__ import annotations

import csv
import html
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .engine import KINDS, AnalysisResult, Conflict, should_skip

_RATIO = "{:.6f}"
_PERCENT = "{:.4f}"
_MS = "{:.3f}"


@dataclass
class AggregateStats:
    """Corpus-level roll-up feeding summary.csv and the chart inputs."""

    total_contracts: int = 0
    total_conflicts: int = 0
    counts_by_kind: dict[str, int] = field(default_factory=lambda: {k: 0 for k in KINDS})
    percent_by_kind: dict[str, float] = field(default_factory=dict)
    contracts_with_conflicts: float = 0.0
    mean_conflicts: float = 0.0
    max_conflicts: int = 0
    min_conflict_percentage: float = 0.0
    mean_conflict_percentage: float = 0.0
    max_conflict_percentage: float = 0.0
    mean_analysis_ms: float = 0.0
    max_analysis_ms: float = 0.0
    total_analysis_ms: float = 0.0
    analysis_times: list[tuple[str, float]] = field(default_factory=list)


def distinct_conflicts(results: Iterable[AnalysisResult]) -> list[Conflict]:
    """Cross-contract conflicts attach to both contracts' results; corpus
    statistics must count each one once."""
    seen: set[tuple] = set()
    out: list[Conflict] = []
    for result in sorted(results, key=lambda r: r.qualifier):
        for c in result.conflicts:
            key = (c.first, c.second, c.kind, c.variables)
            if key in seen:
                continue
            seen.add(key)
            out.append(c)
    out.sort(key=lambda c: (c.first, c.second, c.kind))
    return out


def aggregate(results: Iterable[AnalysisResult]) -> AggregateStats:
    results = sorted(results, key=lambda r: r.qualifier)
    stats = AggregateStats(total_contracts=len(results))
    if not results:
        return stats
    conflicts = distinct_conflicts(results)
    stats.total_conflicts = len(conflicts)
    for c in conflicts:
        stats.counts_by_kind[c.kind] += 1
    if conflicts:
        stats.percent_by_kind = {
            kind: 100.0 * stats.counts_by_kind[kind] / len(conflicts) for kind in KINDS
        }
    per_contract = [len(r.conflicts) for r in results]
    stats.contracts_with_conflicts = sum(1 for n in per_contract if n) / len(results)
    stats.mean_conflicts = sum(per_contract) / len(results)
    stats.max_conflicts = max(per_contract)
    percentages = [r.conflict_percentage for r in results]
    stats.min_conflict_percentage = min(percentages)
    stats.mean_conflict_percentage = sum(percentages) / len(percentages)
    stats.max_conflict_percentage = max(percentages)
    times = [r.analysis_time for r in results]
    stats.mean_analysis_ms = sum(times) / len(times)
    stats.max_analysis_ms = max(times)
    stats.total_analysis_ms = sum(times)
    stats.analysis_times = [(r.qualifier, r.analysis_time) for r in results]
    return stats


# -- HTML ---------------------------------------------------------------------

_STYLE = """
body { font-family: Georgia, serif; margin: 2em auto; max-width: 70em; color: #222; }
h1 { border-bottom: 2px solid #444; padding-bottom: 0.2em; }
table { border-collapse: collapse; margin: 0.8em 0; }
th, td { border: 1px solid #999; padding: 0.3em 0.7em; text-align: left; }
th { background: #eee; }
td.mark { text-align: center; background: #ffd6d6; font-weight: bold; }
td.clear { text-align: center; color: #bbb; }
.sev-High { color: #b00020; font-weight: bold; }
.sev-Medium { color: #b36b00; }
.sev-Low { color: #666; }
""".strip()


def _e(text: object) -> str:
    return html.escape(str(text), quote=True)


def _row(cells: Iterable[str], header: bool = False) -> str:
    tag = "th" if header else "td"
    inner = "".join(f"<{tag}>{c}</{tag}>" for c in cells)
    return f"<tr>{inner}</tr>"


def _short(key: str) -> str:
    # inside one contract's report the qualifier prefix is just noise
    return key.split(".", 1)[1] if "." in key else key


def render_html(r: AnalysisResult) -> str:
    """Self-contained report for one contract; byte-stable for fixed input."""
    c = r.contract
    tx = [f for f in c.functions if not should_skip(f)]
    n = len(r.matrix.functions)
    total_pairs = n * (n - 1) // 2

    out: list[str] = []
    out.append("<!DOCTYPE html>")
    out.append('<html lang="en">')
    out.append(f'<head><meta charset="utf-8"><title>Conflict report: {_e(r.qualifier)}</title>')
    out.append(f"<style>{_STYLE}</style></head>")
    out.append("<body>")
    out.append(f"<h1>Conflict report: {_e(r.qualifier)}</h1>")

    out.append("<h2>Contract</h2>")
    out.append("<table>")
    info = [
        ("Name", r.qualifier),
        ("Source", r.path),
        ("State variables", len(c.state_variables)),
        ("Functions", len(c.functions)),
        ("Transactional functions", len(tx)),
        ("Conflicts", len(r.conflicts)),
        ("Conflict percentage", f"{100.0 * r.conflict_percentage:.2f}%"),
        ("Analysis time", _MS.format(r.analysis_time) + " ms"),
    ]
    for label, value in info:
        out.append(_row([f"<b>{_e(label)}</b>", _e(value)]))
    out.append("</table>")

    out.append("<h2>State variables</h2>")
    if c.state_variables:
        out.append("<table>")
        out.append(_row(["Name", "Type", "Visibility", "Constant"], header=True))
        for v in c.state_variables:
            out.append(
                _row([_e(v.name), _e(v.type_name), _e(v.visibility), "yes" if v.is_constant else "no"])
            )
        out.append("</table>")
    else:
        out.append("<p>No state variables declared.</p>")

    out.append("<h2>Functions</h2>")
    if c.functions:
        out.append("<table>")
        out.append(_row(["Function", "Visibility", "Mutability", "Modifiers", "Transactional"], header=True))
        for f in c.functions:
            out.append(
                _row([
                    _e(f.key),
                    _e(f.visibility),
                    _e(f.mutability),
                    _e(", ".join(f.modifiers)) or "&mdash;",
                    "no" if should_skip(f) else "yes",
                ])
            )
        out.append("</table>")
    else:
        out.append("<p>No functions declared.</p>")

    out.append("<h2>Conflicts</h2>")
    if r.conflicts:
        out.append("<table>")
        out.append(_row(["Function A", "Function B", "Kind", "Severity", "Variables", "Description"], header=True))
        for cf in r.conflicts:
            out.append(
                _row([
                    _e(cf.first),
                    _e(cf.second),
                    _e(cf.kind),
                    f'<span class="sev-{_e(cf.severity)}">{_e(cf.severity)}</span>',
                    _e("; ".join(cf.variables)),
                    _e(cf.description),
                ])
            )
        out.append("</table>")
    else:
        out.append("<p>No conflicts detected.</p>")

    out.append("<h2>Conflict matrix</h2>")
    if n < 2:
        out.append("<p>no transactional function pairs</p>")
    else:
        out.append("<table>")
        out.append(_row([""] + [_e(_short(k)) for k in r.matrix.functions], header=True))
        for a in r.matrix.functions:
            cells = [f"<th>{_e(_short(a))}</th>"]
            for b in r.matrix.functions:
                if a == b:
                    cells.append('<td class="clear">&middot;</td>')
                elif r.matrix.cell(a, b):
                    cells.append('<td class="mark">X</td>')
                else:
                    cells.append('<td class="clear"></td>')
            out.append("<tr>" + "".join(cells) + "</tr>")
        out.append("</table>")

    out.append("<h2>Statistics</h2>")
    out.append("<table>")
    stats_rows = [
        ("Transactional pairs", total_pairs),
        ("Conflicting pairs", len(r.matrix.cells)),
        ("Read-write conflicts (RWC)", r.counts_by_kind.get("RWC", 0)),
        ("Write-write conflicts (WWC)", r.counts_by_kind.get("WWC", 0)),
        ("Function-call conflicts (FCC)", r.counts_by_kind.get("FCC", 0)),
        ("Conflict percentage", f"{100.0 * r.conflict_percentage:.2f}%"),
    ]
    for label, value in stats_rows:
        out.append(_row([f"<b>{_e(label)}</b>", _e(value)]))
    out.append("</table>")

    out.append("</body>")
    out.append("</html>")
    return "\n".join(out) + "\n"


# -- CSV ----------------------------------------------------------------------

CONFLICTS_HEADER = ["contract", "function_a", "function_b", "kind", "severity", "variables"]
CONTRACTS_HEADER = ["name", "functions", "state_vars", "conflicts", "conflict_percentage", "analysis_ms"]
SUMMARY_HEADER = ["metric", "value"]


def _summary_rows(stats: AggregateStats) -> list[tuple[str, str]]:
    def pct(kind: str) -> str:
        if not stats.percent_by_kind:
            return ""
        return _PERCENT.format(stats.percent_by_kind[kind])

    return [
        ("total_contracts", str(stats.total_contracts)),
        ("total_conflicts", str(stats.total_conflicts)),
        ("rwc_count", str(stats.counts_by_kind.get("RWC", 0))),
        ("wwc_count", str(stats.counts_by_kind.get("WWC", 0))),
        ("fcc_count", str(stats.counts_by_kind.get("FCC", 0))),
        ("rwc_percent", pct("RWC")),
        ("wwc_percent", pct("WWC")),
        ("fcc_percent", pct("FCC")),
        ("contracts_with_conflicts_fraction", _RATIO.format(stats.contracts_with_conflicts)),
        ("mean_conflicts_per_contract", _RATIO.format(stats.mean_conflicts)),
        ("max_conflicts_per_contract", str(stats.max_conflicts)),
        ("min_conflict_percentage", _RATIO.format(stats.min_conflict_percentage)),
        ("mean_conflict_percentage", _RATIO.format(stats.mean_conflict_percentage)),
        ("max_conflict_percentage", _RATIO.format(stats.max_conflict_percentage)),
        ("mean_analysis_ms", _MS.format(stats.mean_analysis_ms)),
        ("max_analysis_ms", _MS.format(stats.max_analysis_ms)),
        ("total_analysis_ms", _MS.format(stats.total_analysis_ms)),
    ]


def write_csv(results: Iterable[AnalysisResult], out_dir: str | Path) -> list[Path]:
    """Write conflicts.csv, contracts.csv, summary.csv (RFC 4180, UTF-8).

    Raises OSError on write failure after removing any partial files.
    """
    results = sorted(results, key=lambda r: r.qualifier)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        conflicts_path = out / "conflicts.csv"
        written.append(conflicts_path)
        with open(conflicts_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(CONFLICTS_HEADER)
            rows = [
                (c.first.split(".", 1)[0], c.first, c.second, c.kind, c.severity,
                 ";".join(c.variables))
                for c in distinct_conflicts(results)
            ]
            rows.sort()
            writer.writerows(rows)

        contracts_path = out / "contracts.csv"
        written.append(contracts_path)
        with open(contracts_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(CONTRACTS_HEADER)
            for r in results:
                writer.writerow([
                    r.qualifier,
                    len(r.contract.functions),
                    len(r.contract.state_variables),
                    len(r.conflicts),
                    _RATIO.format(r.conflict_percentage),
                    _MS.format(r.analysis_time),
                ])

        summary_path = out / "summary.csv"
        written.append(summary_path)
        with open(summary_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(SUMMARY_HEADER)
            writer.writerows(_summary_rows(aggregate(results)))
    except OSError:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written
