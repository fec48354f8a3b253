"""render-charts: turn one analyzer report directory into the six figures."""

from __future__ import annotations

import argparse
import sys

from .charts import render_all
from .io import SchemaError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render-charts",
        description="Render charts from txconflict CSV reports.",
    )
    parser.add_argument("csv_dir", help="directory holding conflicts/contracts/summary CSVs")
    parser.add_argument("out_dir", help="directory for the generated PNG files")
    return parser


def main(argv: list[str] | None = None) -> int:
    ns = _build_parser().parse_args(argv)
    try:
        written = render_all(ns.csv_dir, ns.out_dir)
    except (SchemaError, OSError) as exc:
        sys.stderr.write(f"render-charts: error: {exc}\n")
        return 1
    print(f"wrote {len(written)} charts to {ns.out_dir}")
    return 0


def console_main() -> None:
    sys.exit(main())
