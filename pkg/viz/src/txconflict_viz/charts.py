"""The six report figures, as pure data preparation plus thin matplotlib.

Every chart's numbers come from a small standalone function so tests can
verify them without decoding pixels. Rendering is deterministic: fixed
figure size, fixed dpi, no timestamps.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import ContractRow, Corpus, load_corpus

KINDS = ("RWC", "WWC", "FCC")
_KIND_COLORS = {"RWC": "#e6a23c", "WWC": "#c0392b", "FCC": "#6c7ae0"}

_FIGSIZE = (6.4, 4.8)
_DPI = 110


@dataclass(frozen=True)
class ChartSpec:
    """One figure: its shape, the CSV columns it consumes, its filename."""

    kind: str  # pie | histogram | heatmap | scatter | cdf | stacked_bar
    source: str
    columns: tuple[str, ...]
    filename: str


CHARTS = (
    ChartSpec("pie", "conflicts.csv", ("kind",), "conflict_distribution_pie.png"),
    ChartSpec("histogram", "contracts.csv", ("conflicts",), "conflict_count_histogram.png"),
    ChartSpec("heatmap", "contracts.csv", ("functions", "state_vars", "conflicts"),
              "conflict_heatmap.png"),
    ChartSpec("scatter", "contracts.csv", ("conflicts", "analysis_ms"),
              "analysis_time_vs_conflicts.png"),
    ChartSpec("cdf", "contracts.csv", ("conflict_percentage",), "conflict_percentage_cdf.png"),
    ChartSpec("stacked_bar", "conflicts.csv", ("contract", "kind"),
              "conflict_types_stacked_bar.png"),
)


# -- data preparation ----------------------------------------------------------

def kind_fractions(conflict_rows: list[dict]) -> list[tuple[str, float]]:
    """(kind, fraction) for every kind present; fractions sum to 1."""
    counts = {kind: 0 for kind in KINDS}
    for row in conflict_rows:
        counts[row["kind"]] = counts.get(row["kind"], 0) + 1
    total = sum(counts.values())
    if total == 0:
        return []
    return [(kind, counts[kind] / total) for kind in KINDS if counts[kind]]


def histogram_edges(max_count: int) -> list[int]:
    """Unit-width bins through 10 conflicts, width 5 beyond."""
    if max_count < 10:
        return list(range(max_count + 2))
    edges = list(range(11))
    while edges[-1] <= max_count:
        edges.append(edges[-1] + 5)
    return edges


def histogram_data(counts: list[int]) -> tuple[list[int], list[int]]:
    """(bin edges, per-bin heights) over conflicts-per-contract."""
    edges = histogram_edges(max(counts))
    heights = [0] * (len(edges) - 1)
    for c in counts:
        for i in range(len(edges) - 1):
            if edges[i] <= c < edges[i + 1]:
                heights[i] += 1
                break
    return edges, heights


def cdf_points(values: list[float]) -> tuple[list[float], list[float]]:
    """Empirical CDF: sorted values with cumulative fractions ending at 1."""
    xs = sorted(values)
    n = len(xs)
    ys = [(i + 1) / n for i in range(n)]
    return xs, ys


def _bins_of_5(max_value: int) -> list[int]:
    return list(range(0, (max_value // 5 + 1) * 5 + 1, 5))


def heatmap_grid(
    contracts: list[ContractRow],
) -> tuple[list[int], list[int], list[list[float | None]]]:
    """Mean conflicts per (function-count bin, state-var bin), bins of 5.

    grid[i][j] covers functions in [fn_edges[i], fn_edges[i+1]) and
    state_vars in [var_edges[j], var_edges[j+1]); None marks empty cells.
    """
    fn_edges = _bins_of_5(max(r.functions for r in contracts))
    var_edges = _bins_of_5(max(r.state_vars for r in contracts))
    sums = [[0.0] * (len(var_edges) - 1) for _ in range(len(fn_edges) - 1)]
    hits = [[0] * (len(var_edges) - 1) for _ in range(len(fn_edges) - 1)]
    for r in contracts:
        i = r.functions // 5
        j = r.state_vars // 5
        sums[i][j] += r.conflicts
        hits[i][j] += 1
    grid: list[list[float | None]] = [
        [sums[i][j] / hits[i][j] if hits[i][j] else None for j in range(len(var_edges) - 1)]
        for i in range(len(fn_edges) - 1)
    ]
    return fn_edges, var_edges, grid


def scatter_points(contracts: list[ContractRow]) -> list[tuple[int, float]]:
    return [(r.conflicts, r.analysis_ms) for r in contracts]


def stacked_counts(
    conflict_rows: list[dict], top_n: int = 10
) -> tuple[list[str], dict[str, list[int]]]:
    """Top contracts by conflict count with a per-kind breakdown."""
    per_contract: dict[str, dict[str, int]] = {}
    for row in conflict_rows:
        by_kind = per_contract.setdefault(row["contract"], {k: 0 for k in KINDS})
        by_kind[row["kind"]] = by_kind.get(row["kind"], 0) + 1
    ranked = sorted(
        per_contract.items(), key=lambda item: (-sum(item[1].values()), item[0])
    )[:top_n]
    names = [name for name, _ in ranked]
    series = {kind: [by_kind[kind] for _, by_kind in ranked] for kind in KINDS}
    return names, series


# -- rendering -------------------------------------------------------------------

def _annotate_empty(ax, message: str) -> None:
    ax.text(0.5, 0.5, message, ha="center", va="center",
            fontsize=14, color="#555", transform=ax.transAxes)
    ax.set_axis_off()


def _draw_pie(ax, corpus: Corpus) -> None:
    fractions = kind_fractions(corpus.conflicts)
    if not fractions:
        _annotate_empty(ax, "no conflicts")
        return
    labels = [f"{kind} ({frac * 100:.1f}%)" for kind, frac in fractions]
    ax.pie(
        [frac for _, frac in fractions],
        labels=labels,
        colors=[_KIND_COLORS[kind] for kind, _ in fractions],
        startangle=90,
        counterclock=False,
    )
    total = corpus.summary.get("total_conflicts", str(len(corpus.conflicts)))
    ax.set_title(f"Conflict kinds across {total} conflicts")


def _draw_histogram(ax, corpus: Corpus) -> None:
    edges, heights = histogram_data([r.conflicts for r in corpus.contracts])
    widths = [edges[i + 1] - edges[i] for i in range(len(heights))]
    ax.bar(edges[:-1], heights, width=widths, align="edge",
           color="#4a7fb5", edgecolor="white")
    ax.set_xlabel("conflicts per contract")
    ax.set_ylabel("contracts")
    ax.set_title("Distribution of conflict counts")


def _draw_heatmap(ax, corpus: Corpus) -> None:
    fn_edges, var_edges, grid = heatmap_grid(corpus.contracts)
    data = np.array(
        [[np.nan if cell is None else cell for cell in row] for row in grid],
        dtype=float,
    )
    cmap = plt.get_cmap("YlOrRd").copy()
    cmap.set_bad("#e8e8e8")
    image = ax.imshow(
        data.T,
        origin="lower",
        aspect="auto",
        cmap=cmap,
        extent=(fn_edges[0], fn_edges[-1], var_edges[0], var_edges[-1]),
    )
    ax.figure.colorbar(image, ax=ax, label="mean conflicts")
    ax.set_xticks(fn_edges)
    ax.set_yticks(var_edges)
    ax.set_xlabel("functions (bins of 5)")
    ax.set_ylabel("state variables (bins of 5)")
    ax.set_title("Mean conflicts by contract size")


def _draw_scatter(ax, corpus: Corpus) -> None:
    points = scatter_points(corpus.contracts)
    ax.scatter([p[0] for p in points], [p[1] for p in points],
               color="#2d6a4f", alpha=0.7)
    ax.set_xlabel("conflicts")
    ax.set_ylabel("analysis time (ms)")
    ax.set_title("Analysis time against conflict count")


def _draw_cdf(ax, corpus: Corpus) -> None:
    xs, ys = cdf_points([r.conflict_percentage for r in corpus.contracts])
    ax.step([xs[0]] + xs, [0.0] + ys, where="post", color="#7b2d8b")
    ax.set_xlabel("conflict percentage")
    ax.set_ylabel("fraction of contracts")
    ax.set_ylim(0.0, 1.05)
    ax.set_title("CDF of per-contract conflict percentage")


def _draw_stacked_bar(ax, corpus: Corpus) -> None:
    names, series = stacked_counts(corpus.conflicts)
    if not names:
        _annotate_empty(ax, "no conflicts")
        return
    bottoms = [0] * len(names)
    for kind in KINDS:
        ax.bar(names, series[kind], bottom=bottoms,
               label=kind, color=_KIND_COLORS[kind])
        bottoms = [b + v for b, v in zip(bottoms, series[kind])]
    ax.set_ylabel("conflicts")
    ax.set_title(f"Top {len(names)} contracts by conflicts")
    ax.legend()
    ax.tick_params(axis="x", rotation=45)


_DRAWERS = {
    "pie": _draw_pie,
    "histogram": _draw_histogram,
    "heatmap": _draw_heatmap,
    "scatter": _draw_scatter,
    "cdf": _draw_cdf,
    "stacked_bar": _draw_stacked_bar,
}


def render_all(csv_dir: str | Path, out_dir: str | Path) -> list[Path]:
    """Render all six charts from one report directory; returns the paths."""
    corpus = load_corpus(csv_dir)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for spec in CHARTS:
        fig, ax = plt.subplots(figsize=_FIGSIZE)
        try:
            if not corpus.contracts:
                _annotate_empty(ax, "empty corpus")
            else:
                _DRAWERS[spec.kind](ax, corpus)
            fig.tight_layout()
            path = out / spec.filename
            fig.savefig(path, dpi=_DPI)
            written.append(path)
        finally:
            plt.close(fig)
    return written
