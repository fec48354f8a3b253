"""Batch driver: discover .sol files, analyze, write reports, set exit codes.

Exit codes: 0 success, 1 usage or operational error, 2 when
--fail-on-conflicts is set and conflicts were found, 3 when every
discovered file had to be skipped.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .access import build_access_maps
from .engine import detect_all
from .errors import AnalyzerError
from .parser import parse
from .reporting import aggregate, render_html, write_csv

_FORMATS = ("html", "csv")


@dataclass
class RunConfig:
    inputs: list[str]
    out_dir: str = "out"
    formats: tuple[str, ...] = _FORMATS
    conservative_external: bool = False
    fail_on_conflicts: bool = False
    jobs: int = 1
    fixed_timing: bool = False  # zero all timing fields for reproducible bytes


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage, but 2 means "conflicts found" here
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="analyze",
        description="Detect transaction conflicts between Solidity contract functions.",
    )
    parser.add_argument("inputs", nargs="+", metavar="INPUT",
                        help=".sol files or directories (searched recursively)")
    parser.add_argument("--out", metavar="DIR",
                        default=os.environ.get("TXCONFLICT_OUT", "out"),
                        help="output directory (default: $TXCONFLICT_OUT or ./out)")
    parser.add_argument("--format", metavar="LIST", default="html,csv",
                        help="comma-separated subset of html,csv (default: both)")
    parser.add_argument("--conservative-external", action="store_true",
                        help="treat unresolved external calls as potential conflicts")
    parser.add_argument("--fail-on-conflicts", action="store_true",
                        help="exit 2 if any conflict is found")
    parser.add_argument("--jobs", type=int, default=1, metavar="N",
                        help="parser worker threads (default: 1)")
    parser.add_argument("--fixed-timing", action="store_true",
                        help="report zeroed timings for byte-reproducible output")
    return parser


def parse_args(argv: list[str] | None = None) -> RunConfig:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    formats = tuple(part.strip() for part in ns.format.split(",") if part.strip())
    if not formats or any(f not in _FORMATS for f in formats):
        parser.error(f"--format must be a non-empty subset of {','.join(_FORMATS)}")
    if ns.jobs < 1:
        parser.error("--jobs must be >= 1")
    return RunConfig(
        inputs=ns.inputs,
        out_dir=ns.out,
        formats=formats,
        conservative_external=ns.conservative_external,
        fail_on_conflicts=ns.fail_on_conflicts,
        jobs=ns.jobs,
        fixed_timing=ns.fixed_timing,
    )


def _discover(inputs: list[str]) -> list[Path]:
    """Explicit files plus a recursive, sorted, symlink-free directory walk."""
    files: set[Path] = set()
    for raw in inputs:
        path = Path(raw)
        if path.is_dir():
            for root, dirs, names in os.walk(path, followlinks=False):
                dirs.sort()
                for name in sorted(names):
                    candidate = Path(root) / name
                    if name.endswith(".sol") and not candidate.is_symlink():
                        files.add(candidate)
        elif path.is_file():
            files.add(path)
        else:
            raise _UsageError(f"input not found: {raw}")
    return sorted(files)


@dataclass
class _ParseOutcome:
    path: Path
    unit: object = None
    reason: str = ""
    elapsed_ms: float = 0.0


def _parse_file(path: Path) -> _ParseOutcome:
    started = time.monotonic()
    try:
        source = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        return _ParseOutcome(path, reason=f"unreadable: {exc}")
    try:
        unit = parse(source, str(path))
    except AnalyzerError as exc:
        return _ParseOutcome(path, reason=str(exc))
    elapsed = (time.monotonic() - started) * 1000.0
    return _ParseOutcome(path, unit=unit, elapsed_ms=elapsed)


def _write_skipped(out_dir: Path, skipped: list[tuple[str, str]]) -> Path:
    path = out_dir / "skipped.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", "reason"])
        writer.writerows(sorted(skipped))
    return path


def run(config: RunConfig) -> int:
    started = time.monotonic()
    synopsis = _build_parser().format_usage()
    try:
        files = _discover(config.inputs)
    except _UsageError as exc:
        sys.stderr.write(synopsis)
        sys.stderr.write(f"analyze: error: {exc}\n")
        return 1
    if not files:
        sys.stderr.write(synopsis)
        sys.stderr.write("analyze: error: no .sol files found\n")
        return 1

    with ThreadPoolExecutor(max_workers=config.jobs) as pool:
        outcomes = list(pool.map(_parse_file, files))

    units = []
    parse_ms: dict[str, float] = {}
    skipped: list[tuple[str, str]] = []
    for outcome in outcomes:
        if outcome.unit is None:
            skipped.append((str(outcome.path), outcome.reason))
        else:
            units.append(outcome.unit)
            parse_ms[str(outcome.path)] = outcome.elapsed_ms

    maps = build_access_maps(units)
    results = detect_all(units, maps, conservative_external=config.conservative_external)

    # analysis_time = this file's parse time, split among its contracts,
    # plus the detection share already assigned by the engine
    contracts_per_path: dict[str, int] = {}
    for r in results:
        contracts_per_path[r.path] = contracts_per_path.get(r.path, 0) + 1
    for r in results:
        share = parse_ms.get(r.path, 0.0) / contracts_per_path.get(r.path, 1)
        r.analysis_time += share
    if config.fixed_timing:
        for r in results:
            r.analysis_time = 0.0

    out_dir = Path(config.out_dir)
    written: list[Path] = []
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        written.append(_write_skipped(out_dir, skipped))
        if "csv" in config.formats:
            written.extend(write_csv(results, out_dir))
        if "html" in config.formats:
            for r in results:
                path = out_dir / f"report_{r.qualifier}.html"
                written.append(path)
                path.write_text(render_html(r), encoding="utf-8")
    except OSError as exc:
        for path in written:
            path.unlink(missing_ok=True)
        sys.stderr.write(f"analyze: error: cannot write output: {exc}\n")
        return 1

    stats = aggregate(results)
    elapsed_ms = (time.monotonic() - started) * 1000.0
    counts = stats.counts_by_kind
    print(
        f"analyzed {len(results)} contracts from {len(units)} files: "
        f"{stats.total_conflicts} conflicts "
        f"(RWC {counts.get('RWC', 0)}, WWC {counts.get('WWC', 0)}, FCC {counts.get('FCC', 0)}); "
        f"skipped {len(skipped)} files; {elapsed_ms:.0f} ms"
    )

    if files and not units:
        return 3
    if config.fail_on_conflicts and stats.total_conflicts > 0:
        return 2
    return 0


def console_main() -> None:
    sys.exit(run(parse_args()))
