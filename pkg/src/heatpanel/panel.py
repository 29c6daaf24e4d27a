"""Tidy region x year x variable panels: parsing, validation, series access."""
import csv
import io
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    DuplicateCell,
    IncompletePanel,
    MalformedCsv,
    NonFiniteValue,
    UnknownRegion,
    UnknownVariable,
    UnreadableInput,
)

HEADER = ("region_id", "year", "variable", "value")
MAX_LISTED_MISSING = 10


@dataclass(frozen=True, eq=False)
class StudyPanel:
    """Rectangular panel of annual values.

    ``values[i, j, k]`` holds the value of ``variables[k]`` for
    ``regions[i]`` in ``years[j]``. The array is read-only.

    Construction only checks that the axes and the array agree in shape;
    the remaining invariants (unique labels, increasing years, finite values)
    are enforced by :func:`parse_panel_csv` and reported by :func:`validate`.
    """

    regions: tuple
    years: tuple
    variables: tuple
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        regions = tuple(str(r) for r in self.regions)
        years = tuple(int(y) for y in self.years)
        variables = tuple(str(v) for v in self.variables)
        arr = np.array(self.values, dtype=float)
        expected = (len(regions), len(years), len(variables))
        if arr.shape != expected:
            raise ValueError(f"values has shape {arr.shape}, axes imply {expected}")
        arr.flags.writeable = False
        object.__setattr__(self, "regions", regions)
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "values", arr)

    def __eq__(self, other):
        if not isinstance(other, StudyPanel):
            return NotImplemented
        return (
            self.regions == other.regions
            and self.years == other.years
            and self.variables == other.variables
            and np.array_equal(self.values, other.values, equal_nan=True)
        )

    __hash__ = None

    @property
    def shape(self):
        return self.values.shape

    def region_index(self, region):
        try:
            return self.regions.index(str(region))
        except ValueError:
            raise UnknownRegion(f"unknown region {region!r}") from None

    def variable_index(self, variable):
        try:
            return self.variables.index(str(variable))
        except ValueError:
            raise UnknownVariable(f"unknown variable {variable!r}") from None

    def value(self, region, year, variable):
        j = self.years.index(int(year))
        return float(self.values[self.region_index(region), j, self.variable_index(variable)])


@dataclass(frozen=True)
class TimeSeries:
    region: str
    variable: str
    times: tuple
    values: tuple

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError(
                f"times and values differ in length ({len(self.times)} vs {len(self.values)})"
            )

    def __len__(self):
        return len(self.values)


class Issue(NamedTuple):
    severity: str  # "error" | "warning"
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple = ()

    @property
    def ok(self):
        return not any(i.severity == "error" for i in self.issues)

    @property
    def errors(self):
        return [i for i in self.issues if i.severity == "error"]

    @property
    def warnings(self):
        return [i for i in self.issues if i.severity == "warning"]


def _parse_rows(text):
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if text.startswith("\ufeff"):
        text = text[1:]
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedCsv("empty input: expected header " + ",".join(HEADER)) from None
    if tuple(h.strip() for h in header) != HEADER:
        raise MalformedCsv(f"bad header {header!r}; expected {','.join(HEADER)}")
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 4:
            raise MalformedCsv(f"line {lineno}: expected 4 fields, got {len(row)}")
        region, year, variable, value = (c.strip() for c in row)
        if not region or not variable:
            raise MalformedCsv(f"line {lineno}: empty region_id or variable")
        try:
            year = int(year)
        except ValueError:
            raise MalformedCsv(f"line {lineno}: year {year!r} is not an integer") from None
        try:
            value = float(value)
        except ValueError:
            raise MalformedCsv(f"line {lineno}: value {value!r} is not numeric") from None
        if not math.isfinite(value):
            raise NonFiniteValue(
                f"line {lineno}: non-finite value {value!r} at ({region}, {year}, {variable})"
            )
        yield lineno, region, year, variable, value


def parse_panel_csv(text):
    """Parse a long-format CSV (``region_id,year,variable,value``) into a panel.

    Regions and variables keep their order of first appearance; years are
    sorted. Every (region, year, variable) triple must occur exactly once.
    """
    cells = {}
    regions, variables, years = {}, {}, set()
    for lineno, region, year, variable, value in _parse_rows(text):
        key = (region, year, variable)
        if key in cells:
            raise DuplicateCell(
                f"line {lineno}: duplicate cell (region={region}, year={year}, variable={variable})"
            )
        cells[key] = value
        regions.setdefault(region, None)
        variables.setdefault(variable, None)
        years.add(year)
    if not cells:
        raise IncompletePanel("panel has no data rows")

    regions, variables, years = list(regions), list(variables), sorted(years)
    values = np.empty((len(regions), len(years), len(variables)))
    missing = []
    for i, r in enumerate(regions):
        for j, y in enumerate(years):
            for k, v in enumerate(variables):
                try:
                    values[i, j, k] = cells[(r, y, v)]
                except KeyError:
                    missing.append((r, y, v))
    if missing:
        listed = ", ".join(f"({r}, {y}, {v})" for r, y, v in missing[:MAX_LISTED_MISSING])
        more = len(missing) - MAX_LISTED_MISSING
        suffix = f" and {more} more" if more > 0 else ""
        raise IncompletePanel(f"{len(missing)} missing cell(s): {listed}{suffix}")
    return StudyPanel(regions, years, variables, values)


def read_panel(path):
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise UnreadableInput(f"cannot read panel {path}: {getattr(exc, 'strerror', None) or exc}") from exc
    return parse_panel_csv(text)


def emit_panel_csv(panel):
    """Serialise a panel back to long format.

    Rows follow panel order (region, then year, then variable) so that
    re-parsing reproduces the same region and variable ordering. Floats use
    the shortest repr that round-trips.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(HEADER)
    for i, r in enumerate(panel.regions):
        for j, y in enumerate(panel.years):
            for k, v in enumerate(panel.variables):
                writer.writerow((r, y, v, repr(float(panel.values[i, j, k]))))
    return out.getvalue()


def extract_series(panel, region, variable):
    i = panel.region_index(region)
    k = panel.variable_index(variable)
    return TimeSeries(
        region=panel.regions[i],
        variable=panel.variables[k],
        times=panel.years,
        values=tuple(float(x) for x in panel.values[i, :, k]),
    )


def validate(panel):
    """Check panel invariants; problems are returned, never raised."""
    issues = []
    for label, axis in (("region", panel.regions), ("variable", panel.variables)):
        seen = set()
        for item in axis:
            if item in seen:
                issues.append(Issue("error", f"{label}={item}", f"duplicate {label} id"))
            seen.add(item)
    for a, b in zip(panel.years, panel.years[1:]):
        if not a < b:
            issues.append(Issue("error", f"year={b}", f"years not strictly increasing ({a} then {b})"))

    bad = np.argwhere(~np.isfinite(panel.values))
    for i, j, k in bad:
        issues.append(Issue(
            "error",
            f"({panel.regions[i]}, {panel.years[j]}, {panel.variables[k]})",
            f"NonFiniteValue: {panel.values[i, j, k]!r}",
        ))

    if len(panel.years) < 2:
        issues.append(Issue("error", "years", "fewer than 2 years; trends and correlations undefined"))
    else:
        for i, r in enumerate(panel.regions):
            for k, v in enumerate(panel.variables):
                col = panel.values[i, :, k]
                if np.all(np.isfinite(col)) and np.all(col == col[0]):
                    issues.append(Issue(
                        "warning",
                        f"({r}, {v})",
                        "zero-variance series; Pearson correlation is undefined",
                    ))
    return ValidationReport(tuple(issues))
