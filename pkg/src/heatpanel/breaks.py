"""Natural-breaks (Fisher-Jenks) classification of 1-D values.

The partition is the exact optimum of the within-class sum of squared
deviations, found by dynamic programming over the sorted values. Equal
values are never separated, and among partitions with the same cost the
one with the leftmost break positions wins.
"""
import bisect
import math
from dataclasses import dataclass

from .errors import BadK, NonFinite, TooFewDistinct, UnsortedBoundaries

# candidate costs within this relative distance of the best count as ties
_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class BreaksClassification:
    k: int
    boundaries: tuple  # k - 1 cut points, strictly increasing
    labels: tuple  # class index per input value, input order
    sdcm: float


def _ssd(values):
    mean = math.fsum(values) / len(values)
    return math.fsum((v - mean) ** 2 for v in values)


def _segment_costs(xs):
    """cost[i][j] = sum of squared deviations of xs[i:j] (j > i)."""
    n = len(xs)
    cost = [[0.0] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        mean = 0.0
        m2 = 0.0
        row = cost[i]
        for j in range(i, n):
            count = j - i + 1
            delta = xs[j] - mean
            mean += delta / count
            m2 += delta * (xs[j] - mean)
            row[j + 1] = m2
    return cost


def _check(values, k):
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise BadK(f"k must be a positive integer, got {k!r}")
    xs = [float(v) for v in values]
    if not all(math.isfinite(v) for v in xs):
        raise NonFinite("values must be finite")
    distinct = len(set(xs))
    if distinct < k:
        raise TooFewDistinct(f"{distinct} distinct value(s) cannot form {k} classes")
    return xs, int(k)


def optimal_cuts(sorted_values, k):
    """Start indices of classes 2..k in an optimal partition of sorted data.

    Cuts are only placed between unequal neighbours. ``best[m][i]`` is the
    cheapest split of ``xs[i:]`` into ``m`` classes; the cuts are then read
    off left to right, taking the smallest index whose cost ties the optimum.
    """
    xs = sorted_values
    n = len(xs)
    cost = _segment_costs(xs)
    allowed = [i for i in range(1, n) if xs[i - 1] < xs[i]]
    starts = [0] + allowed

    inf = math.inf
    best = [None, {i: cost[i][n] for i in starts}]
    for m in range(2, k + 1):
        prev = best[m - 1]
        row = {}
        for i in starts:
            v = inf
            for j in allowed:
                if j <= i:
                    continue
                c = cost[i][j] + prev[j]
                if c < v:
                    v = c
            row[i] = v
        best.append(row)

    cuts = []
    i = 0
    for m in range(k, 1, -1):
        target = best[m][i]
        tol = _TIE_RTOL * abs(target)
        for j in allowed:
            if j <= i:
                continue
            if cost[i][j] + best[m - 1][j] <= target + tol:
                cuts.append(j)
                i = j
                break
    return cuts


def _midpoint(lo, hi):
    mid = 0.5 * (lo + hi)
    # adjacent floats: keep the cut strictly below the upper class
    return mid if lo <= mid < hi else lo


def jenks_breaks(values, k=5):
    """Optimal ``k``-class natural breaks.

    ``boundaries`` are midpoints between the largest value of one class and
    the smallest of the next; a value equal to a boundary belongs to the
    lower class (see :func:`assign_classes`).

    >>> c = jenks_breaks([1, 2, 3, 10, 11, 12], 2)
    >>> c.boundaries, c.labels, c.sdcm
    ((6.5,), (0, 0, 0, 1, 1, 1), 4.0)
    """
    xs, k = _check(values, k)
    order = sorted(range(len(xs)), key=xs.__getitem__)
    sv = [xs[i] for i in order]
    cuts = optimal_cuts(sv, k)
    edges = [0] + cuts + [len(sv)]
    classes = [sv[a:b] for a, b in zip(edges, edges[1:])]
    boundaries = tuple(_midpoint(sv[c - 1], sv[c]) for c in cuts)
    labels = tuple(bisect.bisect_left(boundaries, v) for v in xs)
    sdcm = math.fsum(_ssd(c) for c in classes)
    return BreaksClassification(k, boundaries, labels, sdcm)


def assign_classes(values, boundaries):
    """Class index per value: the number of boundaries strictly below it."""
    boundaries = [float(b) for b in boundaries]
    if any(not a < b for a, b in zip(boundaries, boundaries[1:])):
        raise UnsortedBoundaries("boundaries must be strictly increasing")
    return tuple(bisect.bisect_left(boundaries, float(v)) for v in values)


def class_sdcm(values, labels):
    """Recompute the within-class squared deviation sum for given labels."""
    groups = {}
    for v, lab in zip(values, labels):
        groups.setdefault(lab, []).append(float(v))
    return math.fsum(_ssd(g) for g in groups.values())
