import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heatpanel.errors import (
    DuplicateCell,
    IncompletePanel,
    MalformedCsv,
    NonFiniteValue,
    UnknownRegion,
    UnknownVariable,
)
from heatpanel.panel import (
    StudyPanel,
    emit_panel_csv,
    extract_series,
    parse_panel_csv,
    read_panel,
    validate,
)
from heatpanel.synth import linear_noise_panel


def test_minimal_rectangle(minimal_panel):
    assert minimal_panel.regions == ("a", "b")
    assert minimal_panel.years == (2003, 2004)
    assert minimal_panel.variables == ("lst",)
    assert minimal_panel.values.size == 4
    assert minimal_panel.value("b", 2003, "lst") == 3.5


def test_missing_row_named(minimal_csv):
    text = minimal_csv.replace("b,2004,lst,3.0\n", "")
    with pytest.raises(IncompletePanel, match=r"\(b, 2004, lst\)"):
        parse_panel_csv(text)


def test_missing_list_truncated():
    rows = ["region_id,year,variable,value"]
    rows += [f"r{i},2000,v,1" for i in range(15)]
    rows += ["r0,2001,v,2"]
    with pytest.raises(IncompletePanel, match="14 missing.*and 4 more"):
        parse_panel_csv("\n".join(rows))


def test_duplicate_even_if_equal(minimal_csv):
    with pytest.raises(DuplicateCell):
        parse_panel_csv(minimal_csv + "a,2003,lst,1.0\n")


@pytest.mark.parametrize("text", [
    "",
    "region,year,variable,value\na,1,v,1\n",
    "region_id,year,variable,value\na,x,v,1\n",
    "region_id,year,variable,value\na,2000,v,abc\n",
    "region_id,year,variable,value\na,2000,v\n",
])
def test_malformed(text):
    with pytest.raises(MalformedCsv):
        parse_panel_csv(text)


@pytest.mark.parametrize("bad", ["nan", "inf", "-inf"])
def test_non_finite(bad):
    with pytest.raises(NonFiniteValue):
        parse_panel_csv(f"region_id,year,variable,value\na,2000,v,{bad}\n")


def test_crlf_and_bom(minimal_csv, minimal_panel):
    text = "\ufeff" + minimal_csv.replace("\n", "\r\n")
    assert parse_panel_csv(text) == minimal_panel
    assert parse_panel_csv(text.encode("utf-8")) == minimal_panel


def test_years_sorted_and_first_appearance_order():
    text = (
        "region_id,year,variable,value\n"
        "z,2005,b,1\nz,2004,b,2\nz,2005,a,3\nz,2004,a,4\n"
        "y,2005,b,5\ny,2004,b,6\ny,2005,a,7\ny,2004,a,8\n"
    )
    p = parse_panel_csv(text)
    assert p.regions == ("z", "y")
    assert p.variables == ("b", "a")
    assert p.years == (2004, 2005)
    assert extract_series(p, "y", "a").values == (8.0, 7.0)


def test_values_read_only(minimal_panel):
    with pytest.raises(ValueError):
        minimal_panel.values[0, 0, 0] = 9.0


def test_tehran_shaped_fixture_round_trip(tmp_path):
    generated = linear_noise_panel()
    path = tmp_path / "panel.csv"
    path.write_text(emit_panel_csv(generated), encoding="utf-8")
    assert len(path.read_text().splitlines()) == 1 + 22 * 19 * 7
    panel = read_panel(path)
    assert len(panel.regions) == 22 and len(panel.years) == 19 and len(panel.variables) == 7
    assert panel == generated
    for r in ("1", "13", "22"):
        for v in ("precip", "night_lst"):
            s = extract_series(panel, r, v)
            i, k = generated.regions.index(r), generated.variables.index(v)
            assert s.values == tuple(generated.values[i, :, k])
            assert s.times == tuple(range(2003, 2022))


def test_extract_errors(minimal_panel):
    assert len(extract_series(minimal_panel, "a", "lst")) == 2
    with pytest.raises(UnknownRegion):
        extract_series(minimal_panel, "c", "lst")
    with pytest.raises(UnknownVariable):
        extract_series(minimal_panel, "a", "ndvi")


@settings(max_examples=50, deadline=None)
@given(st.randoms(use_true_random=False))
def test_parse_permutation_invariant(rnd):
    panel = linear_noise_panel(n_regions=4, years=range(2000, 2005), variables=("a", "b", "c"), seed=1)
    text = emit_panel_csv(panel)
    header, *rows = text.splitlines()
    rnd.shuffle(rows)
    shuffled = parse_panel_csv("\n".join([header, *rows]))
    assert shuffled.years == panel.years
    assert set(shuffled.regions) == set(panel.regions)
    for r in panel.regions:
        for v in panel.variables:
            assert extract_series(shuffled, r, v).values == extract_series(panel, r, v).values


@settings(max_examples=100)
@given(st.lists(st.floats(allow_nan=False, allow_infinity=False), min_size=6, max_size=6))
def test_emit_round_trip_exact(vals):
    panel = StudyPanel(["10", "2"], [2001, 2002, 2003], ["x"], np.array(vals).reshape(2, 3, 1))
    again = parse_panel_csv(emit_panel_csv(panel))
    assert again == panel
    assert emit_panel_csv(again) == emit_panel_csv(panel)


def test_emit_lf_only(minimal_panel):
    out = emit_panel_csv(minimal_panel)
    assert "\r" not in out
    assert out.splitlines()[0] == "region_id,year,variable,value"


def test_series_accessor_matches_cells():
    panel = linear_noise_panel(n_regions=3, years=range(2010, 2016), variables=("a", "b"), seed=4)
    for r in panel.regions:
        for v in panel.variables:
            s = extract_series(panel, r, v)
            for i, y in enumerate(panel.years):
                assert s.values[i] == panel.value(r, y, v)


class TestValidate:
    def test_valid(self):
        report = validate(linear_noise_panel(seed=3))
        assert report.ok and report.issues == ()

    def test_constant_series_warns(self):
        panel = linear_noise_panel(n_regions=3, years=range(2000, 2004), variables=("a", "b"), seed=2)
        vals = np.array(panel.values)
        vals[1, :, 0] = 4.25
        report = validate(StudyPanel(panel.regions, panel.years, panel.variables, vals))
        assert report.ok
        assert len(report.warnings) == 1
        assert report.warnings[0].location == "(2, a)"

    def test_nan_is_error(self):
        vals = np.ones((2, 2, 1))
        vals[0, 1, 0] = math.nan
        vals[1] = [[1.0], [2.0]]
        vals[0, 0, 0] = 0.0
        report = validate(StudyPanel(["a", "b"], [1, 2], ["v"], vals))
        assert not report.ok
        assert any("NonFiniteValue" in i.message for i in report.errors)

    def test_structural_errors(self):
        report = validate(StudyPanel(["a", "a"], [2, 1], ["v"], [[[1.0], [2.0]], [[3.0], [1.0]]]))
        messages = " ".join(i.message for i in report.errors)
        assert "duplicate region" in messages and "not strictly increasing" in messages
        assert not report.ok
