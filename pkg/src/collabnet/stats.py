"""Numerical primitives: hypergeometric tail, Fisher exact test, Pearson r.

Everything here is pure and graph-free.  Probabilities are computed in log
space from a cached log-factorial table so that population sizes around 10^5
with p-values down to 10^-16 stay representable; small tables take an exact
integer path instead.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import DegenerateInput, InvalidParams, InvalidTable

# Exact integer arithmetic is cheap up to this table total; beyond it the
# log-space path takes over.
_EXACT_TABLE_LIMIT = 200
# Slack when comparing log point-masses for two-sided tie inclusion.
_LOG_TIE_EPS = 1e-7

_LOGFACT = np.zeros(2)  # log 0! and log 1!


def _logfact_table(n: int) -> np.ndarray:
    """Return a table t with t[i] = log(i!) valid for all i <= n.

    Growth always recomputes the full cumulative sum from zero: cumsum is a
    sequential scan, so every prefix value is identical no matter how the
    table grew, keeping results reproducible across call histories.
    """
    global _LOGFACT
    if n >= _LOGFACT.size:
        size = max(n + 1, 2 * _LOGFACT.size)
        vals = np.zeros(size)
        np.cumsum(np.log(np.arange(1, size, dtype=np.float64)), out=vals[1:])
        _LOGFACT = vals
    return _LOGFACT


def log_comb(n: int, k) -> np.ndarray | float:
    """log of the binomial coefficient; k may be a numpy array."""
    t = _logfact_table(int(n))
    return t[n] - t[k] - t[n - k]


def _check_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise InvalidParams(f"{name} must be an integer, got {value!r}")
    return int(value)


def hypergeom_tail(population: int, successes: int, sample: int, observed: int) -> float:
    """P(X >= observed) for X ~ Hypergeometric(population, successes, sample).

    Draws of size ``sample`` from a population containing ``successes``
    marked items.  The whole support is evaluated once and the tail is read
    off a reverse cumulative sum, which keeps the result monotone in
    ``observed`` by construction.
    """
    N = _check_int(population, "population")
    K = _check_int(successes, "successes")
    n = _check_int(sample, "sample")
    k = _check_int(observed, "observed")
    if not (0 <= K <= N and 0 <= n <= N):
        raise InvalidParams(f"need 0 <= successes <= population and 0 <= sample <= population, got N={N} K={K} n={n}")
    if not (0 <= k <= n and k <= K):
        raise InvalidParams(f"need 0 <= observed <= min(sample, successes), got n={n} K={K} k={k}")

    low = max(0, n - (N - K))
    high = min(n, K)
    if k <= low:
        return 1.0
    support = np.arange(low, high + 1)
    logp = log_comb(K, support) + log_comb(N - K, n - support) - log_comb(N, n)
    weights = np.exp(logp - logp.max())
    tail = np.cumsum(weights[::-1])[::-1]
    return float(tail[k - low] / tail[0])


def _fisher_exact_small(a: int, b: int, c: int, d: int) -> float:
    """Exact rational two-sided p for small tables (integer weights)."""
    row1, col1, col2 = a + b, a + c, b + d
    lo = max(0, col1 - (c + d))
    hi = min(row1, col1)
    observed = math.comb(col1, a) * math.comb(col2, row1 - a)
    total = 0
    included = 0
    for i in range(lo, hi + 1):
        w = math.comb(col1, i) * math.comb(col2, row1 - i)
        total += w
        if w <= observed:
            included += w
    return float(Fraction(included, total))


def fisher_exact_counts(a: int, b: int, c: int, d: int) -> float:
    """Two-sided Fisher exact p-value for the 2x2 table [[a, b], [c, d]].

    Sums the probabilities of every table with the same margins whose point
    probability does not exceed the observed table's.
    """
    a = _check_int(a, "a")
    b = _check_int(b, "b")
    c = _check_int(c, "c")
    d = _check_int(d, "d")
    if min(a, b, c, d) < 0:
        raise InvalidTable(f"negative cell in ({a}, {b}, {c}, {d})")
    if min(a + b, c + d, a + c, b + d) == 0:
        raise InvalidTable("every row and column margin must be positive")

    N = a + b + c + d
    if N <= _EXACT_TABLE_LIMIT:
        return _fisher_exact_small(a, b, c, d)

    row1, col1, col2 = a + b, a + c, b + d
    lo = max(0, col1 - (c + d))
    hi = min(row1, col1)
    support = np.arange(lo, hi + 1)
    logw = log_comb(col1, support) + log_comb(col2, row1 - support)
    log_obs = float(logw[a - lo])
    keep = logw <= log_obs + _LOG_TIE_EPS
    m = logw.max()
    log_p = m + math.log(np.exp(logw[keep] - m).sum()) - (m + math.log(np.exp(logw - m).sum()))
    return min(1.0, math.exp(log_p))


def chi_square_p(a: int, b: int, c: int, d: int) -> float:
    """One-degree-of-freedom chi-square p-value for a 2x2 table.

    Fallback for tables too large for the exact test to be worth running.
    """
    n = a + b + c + d
    row1, row2, col1, col2 = a + b, c + d, a + c, b + d
    if min(row1, row2, col1, col2) == 0:
        raise InvalidTable("every row and column margin must be positive")
    stat = n * (a * d - b * c) ** 2 / (row1 * row2 * col1 * col2)
    return math.erfc(math.sqrt(stat / 2.0))


def pearson(xs, ys) -> float:
    """Sample Pearson correlation coefficient, clamped to [-1, 1]."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.size != y.size:
        raise InvalidParams("series must be one-dimensional and equally long")
    if x.size < 2:
        raise DegenerateInput("need at least two points")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(np.sqrt((dx * dx).sum()))
    sy = float(np.sqrt((dy * dy).sum()))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateInput("constant series has no defined correlation")
    r = float((dx * dy).sum()) / (sx * sy)
    return max(-1.0, min(1.0, r))
