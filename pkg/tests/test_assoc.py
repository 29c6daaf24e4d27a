import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heatpanel.assoc import correlation_table, pearson
from heatpanel.errors import LengthMismatch, TimeMisalignment, ZeroVariance
from heatpanel.panel import StudyPanel, TimeSeries
from heatpanel.synth import linear_noise_panel


def ts(values, times=None, region="r", variable="v"):
    times = tuple(range(len(values))) if times is None else tuple(times)
    return TimeSeries(region, variable, times, tuple(float(v) for v in values))


def oracle(x, y):
    x, y = np.asarray(x, float), np.asarray(y, float)
    cov = np.mean((x - x.mean()) * (y - y.mean()))
    return cov / (x.std() * y.std())


series = st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=25)


def test_perfect_dependence():
    x = [1.0, 4.0, 2.0, 7.0]
    assert pearson(ts(x), ts([2 * v + 3 for v in x])) == pytest.approx(1.0, abs=1e-15)
    assert pearson(ts(x), ts([-v for v in x])) == pytest.approx(-1.0, abs=1e-15)


def test_hand_example():
    assert pearson(ts([1, 2, 3, 4]), ts([2, 1, 4, 3])) == pytest.approx(0.6, abs=1e-15)


def test_errors():
    with pytest.raises(ZeroVariance, match="x series"):
        pearson(ts([2, 2, 2], region="k"), ts([1, 2, 3]))
    with pytest.raises(ZeroVariance, match="y series"):
        pearson(ts([1, 2, 3]), ts([0, 0, 0]))
    with pytest.raises(LengthMismatch):
        pearson(ts([1, 2, 3]), ts([1, 2]))
    with pytest.raises(TimeMisalignment):
        pearson(ts([1, 2, 3]), ts([1, 2, 4], times=[1, 2, 3]))


@settings(max_examples=300)
@given(st.integers(0, 2**32 - 1), st.integers(3, 25))
def test_properties(seed, n):
    rng = np.random.default_rng(seed)
    x, y = rng.normal(size=n), rng.normal(size=n) + rng.normal() * rng.normal(size=n)
    r = pearson(ts(x), ts(y))
    assert -1.0 <= r <= 1.0
    assert r == pytest.approx(oracle(x, y), abs=1e-12)
    assert pearson(ts(y), ts(x)) == r
    assert pearson(ts(-x), ts(y)) == pytest.approx(-r, abs=1e-12)
    a, b = np.exp(rng.uniform(-3, 3)), rng.normal() * 10
    assert pearson(ts(a * x + b), ts(y)) == pytest.approx(r, abs=1e-12)


def _panel_with(target_fn):
    base = linear_noise_panel(n_regions=5, years=range(2000, 2010), variables=("t", "f"), seed=9)
    vals = np.array(base.values)
    vals[:, :, 1] = target_fn(vals[:, :, 0])
    return StudyPanel(base.regions, base.years, ("t", "f"), vals)


def test_table_identity_and_negation():
    same = correlation_table(_panel_with(lambda t: t), "t", ["f"])
    assert all(row == (pytest.approx(1.0, abs=1e-15),) for row in same.rows)
    neg = correlation_table(_panel_with(lambda t: -t), "t", ["f"])
    assert all(row[0] == pytest.approx(-1.0, abs=1e-15) for row in neg.rows)


def test_table_matches_oracle():
    panel = linear_noise_panel(seed=12)
    factors = [v for v in panel.variables if v != "night_lst"]
    table = correlation_table(panel, "night_lst", factors)
    assert table.regions == panel.regions and table.factors == tuple(factors)
    k_t = panel.variables.index("night_lst")
    for i, r in enumerate(panel.regions):
        for j, f in enumerate(factors):
            k = panel.variables.index(f)
            expected = oracle(panel.values[i, :, k], panel.values[i, :, k_t])
            assert table.rows[i][j] == pytest.approx(expected, abs=1e-12)
            assert table.get(r, f) == table.rows[i][j]


def test_table_error_annotated():
    panel = _panel_with(lambda t: np.ones_like(t))
    with pytest.raises(ZeroVariance, match="region 1, factor f"):
        correlation_table(panel, "t", ["f"])
