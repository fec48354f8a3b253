"""Typed loading of the analyzer's CSV artifacts.

The three files are the only interface to the analyzer; nothing here
imports it. Schema problems raise SchemaError naming the offending file
and column so batch pipelines fail with a usable message.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path


class SchemaError(Exception):
    """A report CSV is missing, or lacks a required or well-typed column."""


@dataclass(frozen=True)
class ContractRow:
    name: str
    functions: int
    state_vars: int
    conflicts: int
    conflict_percentage: float
    analysis_ms: float


@dataclass(frozen=True)
class Corpus:
    """Everything the charts draw from: raw conflict rows, typed contract
    rows, and the summary metrics keyed by name."""

    conflicts: list[dict]
    contracts: list[ContractRow]
    summary: dict[str, str]


def load_table(csv_dir: str | Path, name: str, required: tuple[str, ...]) -> list[dict]:
    path = Path(csv_dir) / name
    if not path.is_file():
        raise SchemaError(f"{name}: not found in {csv_dir}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise SchemaError(f"{name}: missing column '{column}'")
        return list(reader)


def _number(row: dict, name: str, column: str, cast):
    try:
        return cast(row[column])
    except ValueError:
        raise SchemaError(
            f"{name}: column '{column}' is not numeric ({row[column]!r})"
        ) from None


def load_corpus(csv_dir: str | Path) -> Corpus:
    conflicts = load_table(
        csv_dir, "conflicts.csv",
        ("contract", "function_a", "function_b", "kind", "severity", "variables"),
    )
    raw_contracts = load_table(
        csv_dir, "contracts.csv",
        ("name", "functions", "state_vars", "conflicts", "conflict_percentage", "analysis_ms"),
    )
    summary_rows = load_table(csv_dir, "summary.csv", ("metric", "value"))

    contracts = [
        ContractRow(
            name=row["name"],
            functions=_number(row, "contracts.csv", "functions", int),
            state_vars=_number(row, "contracts.csv", "state_vars", int),
            conflicts=_number(row, "contracts.csv", "conflicts", int),
            conflict_percentage=_number(row, "contracts.csv", "conflict_percentage", float),
            analysis_ms=_number(row, "contracts.csv", "analysis_ms", float),
        )
        for row in raw_contracts
    ]
    summary = {row["metric"]: row["value"] for row in summary_rows}
    return Corpus(conflicts=conflicts, contracts=contracts, summary=summary)
