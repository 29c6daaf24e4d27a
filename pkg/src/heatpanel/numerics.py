"""Numerical kernels: SPD solves, log-gamma, incomplete beta and the F law.

Everything here is plain 64-bit floating point. The special functions are
written out rather than borrowed from scipy so results do not depend on the
scipy build that happens to be installed.
"""
import math
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NoConvergence, NotPositiveDefinite

PIVOT_FLOOR = 1e-12
SYMMETRY_TOL = 1e-12

_FPMIN = 1e-300
_CF_EPS = 1e-15
_CF_MAXIT = 300

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
# B_2k / (2k (2k - 1)) for k = 1..8
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_MIN = 10.0


class FParams(NamedTuple):
    df1: float
    df2: float


# ---------------------------------------------------------------------------
# Linear algebra
# ---------------------------------------------------------------------------

def _check_square_symmetric(S):
    S = np.array(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {S.shape}")
    scale = np.max(np.abs(S)) if S.size else 0.0
    if S.size and np.max(np.abs(S - S.T)) > SYMMETRY_TOL * max(scale, 1.0):
        raise DomainError("matrix is not symmetric")
    return S


def cholesky(S):
    """Lower-triangular ``L`` with ``L @ L.T == S``.

    Raises NotPositiveDefinite when a pivot (the diagonal entry before the
    square root) drops to ``PIVOT_FLOOR * max(diag(S))`` or below. The
    exception carries the failing column in ``.index``.
    """
    S = _check_square_symmetric(S)
    p = S.shape[0]
    L = np.zeros_like(S)
    diag_max = float(np.max(np.diag(S))) if p else 0.0
    floor = PIVOT_FLOOR * diag_max
    for j in range(p):
        pivot = S[j, j] - math.fsum(L[j, :j] ** 2)
        if not pivot > floor or diag_max <= 0.0:
            raise NotPositiveDefinite(
                f"matrix is not positive definite: pivot {j} = {pivot:.3e} "
                f"(floor {floor:.3e})",
                index=j,
            )
        L[j, j] = math.sqrt(pivot)
        if j + 1 < p:
            L[j + 1:, j] = (S[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L


def cho_solve(L, v):
    """Solve ``L L^T w = v`` by forward then back substitution."""
    v = np.asarray(v, dtype=float)
    p = L.shape[0]
    z = np.empty(p)
    for i in range(p):
        z[i] = (v[i] - L[i, :i] @ z[:i]) / L[i, i]
    w = np.empty(p)
    for i in range(p - 1, -1, -1):
        w[i] = (z[i] - L[i + 1:, i] @ w[i + 1:]) / L[i, i]
    return w


def solve_spd(S, v):
    """Solve ``S w = v`` for symmetric positive definite ``S``.

    Uses a Cholesky factorization; ``S`` is never inverted.

    >>> solve_spd([[2.0, 1.0], [1.0, 2.0]], [3.0, 3.0])
    array([1., 1.])
    """
    v = np.asarray(v, dtype=float)
    L = cholesky(S)
    if v.shape != (L.shape[0],):
        raise DomainError(f"right-hand side has shape {v.shape}, expected ({L.shape[0]},)")
    return cho_solve(L, v)


def solve_spd_batch(S, v):
    """Vectorised ``solve_spd`` over a leading batch axis.

    ``S`` has shape (B, p, p), ``v`` shape (B, p). Returns ``(w, ok)`` where
    ``ok[b]`` is False for matrices failing the pivot test; their rows of
    ``w`` are NaN. Same pivot rule as :func:`cholesky`.
    """
    S = np.asarray(S, dtype=float)
    v = np.asarray(v, dtype=float)
    B, p, _ = S.shape
    L = np.zeros_like(S)
    ok = np.ones(B, dtype=bool)
    floor = PIVOT_FLOOR * np.max(np.diagonal(S, axis1=1, axis2=2), axis=1)
    ok &= floor > 0.0
    for j in range(p):
        pivot = S[:, j, j] - np.einsum("bk,bk->b", L[:, j, :j], L[:, j, :j])
        ok &= pivot > floor
        root = np.sqrt(np.where(ok, pivot, 1.0))
        L[:, j, j] = root
        if j + 1 < p:
            rest = S[:, j + 1:, j] - np.einsum("bik,bk->bi", L[:, j + 1:, :j], L[:, j, :j])
            L[:, j + 1:, j] = rest / root[:, None]
    z = np.empty((B, p))
    for i in range(p):
        z[:, i] = (v[:, i] - np.einsum("bk,bk->b", L[:, i, :i], z[:, :i])) / L[:, i, i]
    w = np.empty((B, p))
    for i in range(p - 1, -1, -1):
        w[:, i] = (z[:, i] - np.einsum("bk,bk->b", L[:, i + 1:, i], w[:, i + 1:])) / L[:, i, i]
    w[~ok] = np.nan
    return w, ok


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------

def ln_gamma(x):
    """Natural log of the gamma function for real ``x > 0``.

    Arguments below 10 are shifted up with the recurrence, then the Stirling
    series (eight Bernoulli terms) is summed.
    """
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"ln_gamma needs a finite x > 0, got {x!r}")
    shift = 0.0
    while x < _STIRLING_MIN:
        shift += math.log(x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    for c in reversed(_STIRLING):
        series = series * inv2 + c
    series *= inv
    return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + series - shift


def ln_beta(a, b):
    return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)


def _beta_cf(x, a, b):
    """Continued fraction for I_x(a, b) (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < _CF_EPS:
            return h
    raise NoConvergence(
        f"incomplete beta continued fraction did not converge in {_CF_MAXIT} "
        f"iterations (x={x!r}, a={a!r}, b={b!r})"
    )


def _direct_tail(x, xc, a, b):
    # x^a (1-x)^b / (a B(a,b)) * cf, with xc = 1 - x supplied by the caller
    log_front = a * math.log(x) + b * math.log(xc) - ln_beta(a, b)
    return math.exp(log_front) * _beta_cf(x, a, b) / a


def _ibeta(x, xc, a, b):
    if x <= 0.0:
        return 0.0
    if xc <= 0.0:
        return 1.0
    if x > (a + 1.0) / (a + b + 2.0):
        return 1.0 - _direct_tail(xc, x, b, a)
    return _direct_tail(x, xc, a, b)


def reg_incomplete_beta(x, a, b):
    """Regularized incomplete beta function I_x(a, b).

    The continued fraction is evaluated on whichever side of
    ``(a + 1) / (a + b + 2)`` converges fast, using
    ``I_x(a, b) = 1 - I_{1-x}(b, a)`` to flip.
    """
    x, a, b = float(x), float(a), float(b)
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    if not (a > 0.0 and b > 0.0) or math.isinf(a) or math.isinf(b):
        raise DomainError(f"shape parameters must be finite and > 0, got a={a!r}, b={b!r}")
    return _ibeta(x, 1.0 - x, a, b)


def _check_f_args(x, df1, df2):
    x, df1, df2 = float(x), float(df1), float(df2)
    if not x >= 0.0:
        raise DomainError(f"F argument must be >= 0, got {x!r}")
    if not (df1 > 0.0 and df2 > 0.0) or math.isinf(df1) or math.isinf(df2):
        raise DomainError(f"degrees of freedom must be finite and > 0, got ({df1!r}, {df2!r})")
    return x, df1, df2


def f_cdf(x, df1, df2):
    """P(F <= x) for F ~ F(df1, df2)."""
    x, df1, df2 = _check_f_args(x, df1, df2)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    denom = df1 * x + df2
    return _ibeta(df1 * x / denom, df2 / denom, 0.5 * df1, 0.5 * df2)


def f_sf(x, df1, df2):
    """Upper tail P(F > x) for F ~ F(df1, df2).

    Evaluated as I_{df2/(df2+df1 x)}(df2/2, df1/2), so a small tail comes
    straight out of the continued fraction instead of from ``1 - cdf``.
    """
    x, df1, df2 = _check_f_args(x, df1, df2)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    denom = df1 * x + df2
    return _ibeta(df2 / denom, df1 * x / denom, 0.5 * df2, 0.5 * df1)
