"""Pearson correlation of each factor series against a target series."""
import math
from dataclasses import dataclass

from .errors import LengthMismatch, TimeMisalignment, ZeroVariance
from .panel import extract_series

CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class CorrelationTable:
    target: str
    factors: tuple
    regions: tuple
    rows: tuple  # rows[i][j]: region i, factor j

    def get(self, region, factor):
        return self.rows[self.regions.index(region)][self.factors.index(factor)]

    def column(self, factor):
        j = self.factors.index(factor)
        return [row[j] for row in self.rows]


def _centered(values):
    mean = math.fsum(values) / len(values)
    return [v - mean for v in values]


def pearson(x, y):
    """Pearson r between two aligned series, from centred sums.

    Overshoot of ``|r|`` past 1 by at most ``CLAMP_TOL`` is clamped away;
    constant inputs raise :class:`ZeroVariance`.
    """
    xv = [float(v) for v in x.values]
    yv = [float(v) for v in y.values]
    if len(xv) != len(yv):
        raise LengthMismatch(f"series lengths differ: {len(xv)} vs {len(yv)}")
    if len(xv) < 2:
        raise LengthMismatch(f"need at least 2 points, got {len(xv)}")
    if tuple(x.times) != tuple(y.times):
        raise TimeMisalignment(
            f"time vectors differ for ({x.region}, {x.variable}) and ({y.region}, {y.variable})"
        )
    dx, dy = _centered(xv), _centered(yv)
    sxx = math.fsum(a * a for a in dx)
    syy = math.fsum(b * b for b in dy)
    for name, s, series in (("x", sxx, x), ("y", syy, y)):
        if s == 0.0:
            raise ZeroVariance(
                f"{name} series ({series.region}, {series.variable}) is constant"
            )
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    r = sxy / math.sqrt(sxx * syy)
    if r > 1.0:
        assert r - 1.0 <= CLAMP_TOL, r
        r = 1.0
    elif r < -1.0:
        assert -1.0 - r <= CLAMP_TOL, r
        r = -1.0
    return r


def correlation_table(panel, target, factors):
    """Correlate every factor with ``target`` within each region.

    Errors from :func:`pearson` are re-raised with the (region, factor)
    cell prepended to the message.
    """
    factors = tuple(factors)
    panel.variable_index(target)
    for f in factors:
        panel.variable_index(f)
    rows = []
    for region in panel.regions:
        ts = extract_series(panel, region, target)
        row = []
        for f in factors:
            try:
                row.append(pearson(extract_series(panel, region, f), ts))
            except (ZeroVariance, LengthMismatch, TimeMisalignment) as exc:
                raise type(exc)(f"region {region}, factor {f}: {exc}") from exc
        rows.append(tuple(row))
    return CorrelationTable(target, factors, panel.regions, tuple(rows))
