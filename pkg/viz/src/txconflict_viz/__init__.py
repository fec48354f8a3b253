"""Chart rendering over txconflict's CSV report files."""

from .charts import (
    CHARTS,
    ChartSpec,
    cdf_points,
    heatmap_grid,
    histogram_data,
    histogram_edges,
    kind_fractions,
    render_all,
    scatter_points,
    stacked_counts,
)
from .io import ContractRow, Corpus, SchemaError, load_corpus, load_table

__version__ = "0.1.0"

__all__ = [
    "CHARTS",
    "ChartSpec",
    "ContractRow",
    "Corpus",
    "SchemaError",
    "cdf_points",
    "heatmap_grid",
    "histogram_data",
    "histogram_edges",
    "kind_fractions",
    "load_corpus",
    "load_table",
    "render_all",
    "scatter_points",
    "stacked_counts",
]
