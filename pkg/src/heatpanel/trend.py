"""Per-region least-squares trends and the increasing / non-increasing split."""
import math
import statistics
from dataclasses import dataclass

from .errors import DegenerateTime, EmptyInput, TooShort


@dataclass(frozen=True)
class TrendEstimate:
    region: str
    slope: float  # value units per year
    intercept: float  # fitted value at the mean year
    n_points: int


@dataclass(frozen=True)
class Grouping:
    increasing: frozenset
    non_increasing: frozenset
    threshold: float

    def label(self, region):
        if region in self.increasing:
            return "increasing"
        if region in self.non_increasing:
            return "non_increasing"
        raise KeyError(region)

    @property
    def sizes(self):
        return len(self.increasing), len(self.non_increasing)


def ols_trend(series):
    """Fit ``y = intercept + slope * (t - mean(t))`` by ordinary least squares.

    Time is centred before fitting, so ``intercept`` is the mean of the
    series. Sums use ``math.fsum`` and are therefore independent of
    evaluation order.

    >>> from heatpanel.panel import TimeSeries
    >>> ols_trend(TimeSeries("a", "y", (0, 1, 2, 3), (1.0, 3.0, 2.0, 5.0))).slope
    1.1
    """
    t = [float(x) for x in series.times]
    y = [float(x) for x in series.values]
    n = len(y)
    if n < 2:
        raise TooShort(f"series for region {series.region!r} has {n} point(s); need at least 2")
    if len(t) != n:
        raise ValueError("times and values differ in length")
    t_mean = math.fsum(t) / n
    y_mean = math.fsum(y) / n
    dt = [ti - t_mean for ti in t]
    sxx = math.fsum(d * d for d in dt)
    if sxx == 0.0:
        raise DegenerateTime(f"all time points identical for region {series.region!r}")
    sxy = math.fsum(d * (yi - y_mean) for d, yi in zip(dt, y))
    return TrendEstimate(series.region, sxy / sxx, y_mean, n)


def estimate_trends(panel, variable):
    from .panel import extract_series

    return [ols_trend(extract_series(panel, r, variable)) for r in panel.regions]


def _slope(t):
    return t.slope if isinstance(t, TrendEstimate) else float(t)


def median_threshold(trends):
    """Median slope; the mean of the two middle slopes for even counts."""
    slopes = [_slope(t) for t in trends]
    if not slopes:
        raise EmptyInput("cannot take the median of zero trends")
    return float(statistics.median(slopes))


def classify_trends(trends, threshold):
    """Split regions on ``slope > threshold``.

    A slope exactly equal to the threshold counts as non-increasing.
    """
    threshold = float(threshold)
    up, down = set(), set()
    for t in trends:
        (up if t.slope > threshold else down).add(t.region)
    regions = {t.region for t in trends}
    assert up.isdisjoint(down) and up | down == regions
    return Grouping(frozenset(up), frozenset(down), threshold)


def rank_regions(trends):
    """Region ids in ascending order of slope (input order breaks ties)."""
    return [t.region for t in sorted(trends, key=lambda t: t.slope)]
