import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heatpanel.breaks import assign_classes, class_sdcm, jenks_breaks
from heatpanel.errors import BadK, NonFinite, TooFewDistinct, UnsortedBoundaries
from heatpanel.reference import correlation_table


def _ssd(c):
    m = math.fsum(c) / len(c)
    return math.fsum((x - m) ** 2 for x in c)


def exhaustive(values, k, rtol=0.0):
    """Every tie-respecting placement of k - 1 cuts in the sorted values.

    Returns (minimal sdcm, leftmost cuts among placements within rtol of it).
    """
    s = sorted(values)
    n = len(s)
    scored = []
    for cuts in itertools.combinations(range(1, n), k - 1):
        if any(s[c - 1] == s[c] for c in cuts):
            continue
        edges = [0, *cuts, n]
        scored.append((math.fsum(_ssd(s[a:b]) for a, b in zip(edges, edges[1:])), cuts))
    best = min(v for v, _ in scored)
    leftmost = min(c for v, c in scored if v <= best * (1 + rtol))
    return best, leftmost


def cuts_of(values, labels):
    s = sorted(zip(values, labels))
    return tuple(i for i in range(1, len(s)) if s[i][1] != s[i - 1][1])


def test_each_value_own_class():
    vals = [3.0, -1.0, 7.5, 2.0]
    c = jenks_breaks(vals, 4)
    assert c.sdcm == 0.0
    assert sorted(c.labels) == [0, 1, 2, 3]
    assert c.labels == (2, 0, 3, 1)


def test_two_clusters():
    c = jenks_breaks([1, 2, 3, 10, 11, 12], 2)
    assert c.labels == (0, 0, 0, 1, 1, 1)
    assert c.sdcm == 4.0
    assert c.boundaries == (6.5,)


def test_single_class():
    c = jenks_breaks([4.0, 1.0, 4.0], 1)
    assert c.boundaries == () and c.labels == (0, 0, 0)
    assert c.sdcm == pytest.approx(6.0)


def test_errors():
    with pytest.raises(BadK):
        jenks_breaks([1, 2, 3], 0)
    with pytest.raises(BadK):
        jenks_breaks([1, 2, 3], 1.5)
    with pytest.raises(TooFewDistinct):
        jenks_breaks([1, 1, 2, 2], 3)
    with pytest.raises(NonFinite):
        jenks_breaks([1, float("nan"), 2], 2)


def test_ties_never_split():
    vals = [0.0, 1.0, 1.0, 1.0, 1.0, 2.0, 2.0]
    c = jenks_breaks(vals, 3)
    assert len({lab for v, lab in zip(vals, c.labels) if v == 1.0}) == 1
    assert len({lab for v, lab in zip(vals, c.labels) if v == 2.0}) == 1


def test_reference_ndbi_five_classes():
    column = correlation_table().column("ndbi")
    assert len(column) == 22
    c = jenks_breaks(column, 5)
    best, leftmost = exhaustive(column, 5)
    assert c.sdcm == best
    assert cuts_of(column, c.labels) == leftmost
    # allowing tied values to be split cannot do better
    s = sorted(column)
    unrestricted = min(
        math.fsum(_ssd(s[a:b]) for a, b in zip((0, *cuts), (*cuts, 22)))
        for cuts in itertools.combinations(range(1, 22), 4)
    )
    assert unrestricted >= best - 1e-15
    assert len(c.boundaries) == 4
    assert all(a < b for a, b in zip(c.boundaries, c.boundaries[1:]))


@pytest.mark.parametrize("factor", ["precipitation", "ndsi", "ndwi", "evi", "ndvi"])
def test_reference_other_columns(factor):
    column = correlation_table().column(factor)
    c = jenks_breaks(column, 5)
    assert c.sdcm == exhaustive(column, 5)[0]
    assert assign_classes(column, c.boundaries) == c.labels


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=11), st.integers(1, 4))
def test_integer_data_leftmost(values, k):
    if len(set(values)) < k:
        return
    c = jenks_breaks(values, k)
    best, leftmost = exhaustive(values, k, rtol=1e-12)
    assert c.sdcm <= best * (1 + 1e-12)
    assert cuts_of(values, c.labels) == leftmost


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 12))
def test_invariants(seed, n):
    rng = np.random.default_rng(seed)
    vals = rng.normal(size=n).round(2).tolist()
    distinct = len(set(vals))
    prev = math.inf
    for k in range(1, min(distinct, 5) + 1):
        c = jenks_breaks(vals, k)
        assert c.sdcm <= prev + 1e-12
        prev = c.sdcm
        assert abs(c.sdcm - class_sdcm(vals, c.labels)) <= 1e-9
        assert assign_classes(vals, c.boundaries) == c.labels
        # contiguous classes: sorted labels are nondecreasing
        ordered = [lab for _, lab in sorted(zip(vals, c.labels))]
        assert ordered == sorted(ordered)
        assert all(lab1 == lab2 for (v1, lab1), (v2, lab2) in itertools.combinations(zip(vals, c.labels), 2)
                   if v1 == v2)
        perm = rng.permutation(n)
        shuffled = jenks_breaks([vals[i] for i in perm], k)
        assert shuffled.labels == tuple(c.labels[i] for i in perm)
        a, b = float(rng.uniform(0.1, 10)), float(rng.normal() * 3)
        assert jenks_breaks([a * v + b for v in vals], k).labels == c.labels


class TestAssign:
    def test_empty_boundaries(self):
        assert assign_classes([-3, 0, 9], []) == (0, 0, 0)

    def test_boundary_goes_low(self):
        assert assign_classes([-1, 0, 1], [0]) == (0, 0, 1)

    def test_unsorted(self):
        with pytest.raises(UnsortedBoundaries):
            assign_classes([1], [2, 1])
        with pytest.raises(UnsortedBoundaries):
            assign_classes([1], [1, 1])


def test_adjacent_floats_boundary():
    lo = 1.0
    hi = np.nextafter(1.0, 2.0)
    c = jenks_breaks([lo, hi], 2)
    assert c.labels == (0, 1)
    assert assign_classes([lo, hi], c.boundaries) == (0, 1)
