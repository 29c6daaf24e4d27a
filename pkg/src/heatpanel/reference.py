"""Reported results for Tehran's 22 municipal districts, 2003-2021.

Per-district input series were never released, so these numbers cannot be
recomputed. They serve as fixtures: the correlation table feeds the breaks
classifier and report code, and the (T², p-value) pairs exercise the
verdict rule.
"""
import csv
import io
from importlib import resources

from .assoc import CorrelationTable

TARGET = "night_lst"
FACTORS = ("precipitation", "ndsi", "ndwi", "ndbi", "evi", "ndvi")

MEDIAN_TREND = 0.064
# the only per-district slopes given explicitly
TRENDS = {"19": 0.119, "4": 0.008, "2": 0.04, "3": 0.04}
ASCENDING_ORDER = ("5", "7", "22", "13", "10", "2", "3", "20", "6", "8",
                   "11", "15", "9", "16", "14", "17", "1", "21", "18", "12")
INCREASING = frozenset({"1", "12", "14", "17", "18", "19", "21"})
NON_INCREASING = frozenset({"2", "3", "4", "5", "6", "7", "8", "9", "10", "11",
                            "13", "15", "16", "20", "22"})
ALPHA = 0.01


def _read(name):
    return resources.files("heatpanel").joinpath("data", name).read_text(encoding="utf-8")


def correlation_table():
    reader = csv.reader(io.StringIO(_read("tehran_correlations.csv")))
    header = next(reader)
    regions, rows = [], []
    for rec in reader:
        regions.append(rec[0])
        rows.append(tuple(float(v) for v in rec[1:]))
    return CorrelationTable(TARGET, tuple(header[1:]), tuple(regions), tuple(rows))


def hotelling_table():
    """List of ``(factor, t2, p_value)`` rows."""
    reader = csv.DictReader(io.StringIO(_read("tehran_hotelling.csv")))
    return [(r["factor"], float(r["t2"]), float(r["p_value"])) for r in reader]


def bundled_fixture_path(name="separable.csv"):
    return resources.files("heatpanel").joinpath("data", name)
