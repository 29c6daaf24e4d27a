"""Panel screening of urban heat island factors.

Per-region OLS trends of a target series, a threshold split into increasing
and non-increasing regions, per-region Pearson correlations, natural-breaks
binning, and a two-sample Hotelling T² test per factor.
"""
__version__ = "0.1.0"

from .errors import HeatPanelError  # noqa: E402
from .panel import StudyPanel, TimeSeries, emit_panel_csv, extract_series, parse_panel_csv, validate  # noqa: E402
from .trend import TrendEstimate, Grouping, ols_trend, median_threshold, classify_trends  # noqa: E402
from .assoc import CorrelationTable, pearson, correlation_table  # noqa: E402
from .stat_test import (  # noqa: E402
    GroupedSamples,
    HotellingResult,
    PermutationEstimate,
    Verdict,
    hotelling_t2,
    hotelling_test,
    permutation_pvalue,
    pooled_covariance,
    t2_to_f,
)
from .breaks import BreaksClassification, jenks_breaks, assign_classes  # noqa: E402

__all__ = [
    "HeatPanelError",
    "StudyPanel", "TimeSeries", "parse_panel_csv", "emit_panel_csv", "extract_series", "validate",
    "TrendEstimate", "Grouping", "ols_trend", "median_threshold", "classify_trends",
    "CorrelationTable", "pearson", "correlation_table",
    "GroupedSamples", "HotellingResult", "PermutationEstimate", "Verdict",
    "pooled_covariance", "hotelling_t2", "t2_to_f", "hotelling_test", "permutation_pvalue",
    "BreaksClassification", "jenks_breaks", "assign_classes",
]
