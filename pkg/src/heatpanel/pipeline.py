"""End-to-end analysis: trends, grouping, correlations, breaks, T² tests."""
import datetime as _dt
import logging
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Optional, Union

import numpy as np

from . import __version__
from .assoc import correlation_table
from .breaks import jenks_breaks
from .errors import (
    BadAlpha,
    BadConfig,
    DegenerateGrouping,
    HeatPanelError,
    InputError,
    PipelineError,
    UnknownVariable,
)
from .panel import read_panel, validate
from .stat_test import (
    GroupedSamples,
    decide,
    hotelling_test,
    permutation_pvalue,
)
from .trend import classify_trends, estimate_trends, median_threshold

log = logging.getLogger(__name__)

STAGES = ("trends", "classify", "correlate", "breaks", "causal")
_NEEDS = {
    "trends": (),
    "classify": ("trends",),
    "correlate": (),
    "breaks": ("correlate",),
    "causal": ("trends", "classify"),
}
FORMATS = ("json", "csv", "md")
CAVEAT = (
    "Verdicts are mean-difference significance under the increasing / "
    "non-increasing grouping assumption, not confounder-adjusted causation."
)


class InvalidPanel(InputError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    panel_path: Optional[str] = None
    target: str = "night_lst"
    factors: tuple = ()
    threshold: Union[str, float] = "median"  # "median" or a fixed slope
    alpha: float = 0.01
    breaks_k: int = 5
    ridge_lambda: float = 0.0
    standardize: bool = False
    permutations: int = 9999  # 0 disables the permutation cross-check
    seed: int = 42
    output_dir: Optional[str] = None
    formats: tuple = FORMATS

    def check(self):
        if not self.factors:
            raise BadConfig("at least one factor is required")
        if self.target in self.factors:
            raise BadConfig(f"target {self.target!r} is also listed as a factor")
        if len(set(self.factors)) != len(self.factors):
            raise BadConfig("factors contain duplicates")
        if not (isinstance(self.alpha, (int, float)) and 0.0 < self.alpha < 1.0):
            raise BadAlpha(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if self.threshold != "median":
            if isinstance(self.threshold, str) or math.isnan(self.threshold):
                raise BadConfig(f"threshold must be 'median' or a number, got {self.threshold!r}")
        if int(self.breaks_k) != self.breaks_k or self.breaks_k < 1:
            raise BadConfig(f"breaks_k must be a positive integer, got {self.breaks_k!r}")
        if not self.ridge_lambda >= 0.0:
            raise BadConfig(f"ridge must be >= 0, got {self.ridge_lambda!r}")
        if int(self.permutations) != self.permutations or self.permutations < 0:
            raise BadConfig(f"permutations must be a non-negative integer, got {self.permutations!r}")
        bad = set(self.formats) - set(FORMATS)
        if bad:
            raise BadConfig(f"unknown output format(s): {', '.join(sorted(bad))}")
        return self

    def to_dict(self):
        d = asdict(self)
        d["factors"] = list(self.factors)
        d["formats"] = list(self.formats)
        return d


@dataclass
class AnalysisReport:
    config: PipelineConfig
    regions: tuple
    years: tuple
    trends: Optional[list] = None
    threshold: Optional[float] = None
    grouping: Optional[object] = None
    correlations: Optional[object] = None
    breaks: dict = field(default_factory=dict)
    tests: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)


def build_samples(panel, variable, grouping, standardize=False):
    """One observation per region: its ``variable`` series as a p-vector.

    Group 1 holds the increasing regions, group 2 the rest, both in panel
    order. With ``standardize`` each year (dimension) is z-scored over all
    regions first.
    """
    k = panel.variable_index(variable)
    X = np.array(panel.values[:, :, k], dtype=float)
    if standardize:
        mean = X.mean(axis=0)
        sd = X.std(axis=0, ddof=1)
        X = (X - mean) / np.where(sd > 0, sd, 1.0)
    up = [i for i, r in enumerate(panel.regions) if r in grouping.increasing]
    down = [i for i, r in enumerate(panel.regions) if r in grouping.non_increasing]
    return GroupedSamples(
        X[up], X[down],
        labels1=tuple(panel.regions[i] for i in up),
        labels2=tuple(panel.regions[i] for i in down),
    )


def verdict_table(rows, alpha=0.01):
    """Apply the decision rule to ``(factor, t2, p_value)`` rows."""
    return [(f, t2, p, decide(p, alpha)) for f, t2, p in rows]


def _expand(stages):
    wanted = set()

    def add(s):
        if s not in _NEEDS:
            raise BadConfig(f"unknown stage {s!r}")
        wanted.add(s)
        for dep in _NEEDS[s]:
            add(dep)

    for s in stages:
        add(s)
    return wanted


class _Stage:
    def __init__(self, name):
        self.name = name

    def __enter__(self):
        log.info("stage %s", self.name)

    def __exit__(self, exc_type, exc, tb):
        if exc is not None and isinstance(exc, HeatPanelError) and not isinstance(exc, PipelineError):
            raise PipelineError(self.name, exc) from exc
        return False


def run_pipeline(config, panel=None, stages=STAGES):
    """Run the requested stages (plus whatever they depend on).

    Any module error is re-raised as :class:`PipelineError` carrying the
    stage name; configuration problems surface before any computation.
    """
    with _Stage("config"):
        config.check()
    wanted = _expand(stages)

    with _Stage("parse"):
        if panel is None:
            if config.panel_path is None:
                raise BadConfig("no panel given")
            panel = read_panel(config.panel_path)
    with _Stage("validate"):
        report = validate(panel)
        for issue in report.warnings:
            log.warning("%s: %s", issue.location, issue.message)
        if not report.ok:
            msgs = "; ".join(f"{i.location}: {i.message}" for i in report.errors[:10])
            raise InvalidPanel(f"panel failed validation: {msgs}")
        for v in (config.target, *config.factors):
            if v not in panel.variables:
                raise UnknownVariable(f"variable {v!r} not in panel")

    out = AnalysisReport(config=config, regions=panel.regions, years=panel.years)
    out.provenance = {
        "tool": "heatpanel",
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat(),
        "config": config.to_dict(),
    }

    if "trends" in wanted:
        with _Stage("trends"):
            out.trends = estimate_trends(panel, config.target)
    if "classify" in wanted:
        with _Stage("classify"):
            if config.threshold == "median":
                out.threshold = median_threshold(out.trends)
            else:
                out.threshold = float(config.threshold)
            out.grouping = classify_trends(out.trends, out.threshold)
            n_up, n_down = out.grouping.sizes
            log.info("threshold %r: %d increasing, %d non-increasing", out.threshold, n_up, n_down)
    if "correlate" in wanted:
        with _Stage("correlate"):
            out.correlations = correlation_table(panel, config.target, config.factors)
    if "breaks" in wanted:
        with _Stage("breaks"):
            for f in config.factors:
                out.breaks[f] = jenks_breaks(out.correlations.column(f), config.breaks_k)
    if "causal" in wanted:
        with _Stage("causal"):
            n_up, n_down = out.grouping.sizes
            if n_up < 2 or n_down < 2:
                raise DegenerateGrouping(
                    f"threshold {out.threshold!r} leaves {n_up} increasing and "
                    f"{n_down} non-increasing regions; each group needs at least 2"
                )
            if config.ridge_lambda > 0:
                log.warning("ridge stabiliser active: lambda=%r", config.ridge_lambda)
            for f in config.factors:
                samples = build_samples(panel, f, out.grouping, config.standardize)
                result = hotelling_test(samples, config.alpha, ridge=config.ridge_lambda)
                if config.permutations > 0:
                    perm = permutation_pvalue(samples, config.permutations, config.seed,
                                              ridge=config.ridge_lambda)
                    result = replace(result, permutation=perm)
                log.info("%s: T2=%.6g p=%.4g %s", f, result.t2, result.p_value, result.verdict)
                out.tests[f] = result
    return out
