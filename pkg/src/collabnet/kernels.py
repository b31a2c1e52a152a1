"""Power-iteration kernels for weighted PageRank over CSR adjacency.

Two interchangeable implementations of the same contract:

* :func:`pagerank_numba` -- ``numba.njit``-compiled loops (the default when
  numba imports cleanly);
* :func:`pagerank_numpy` -- vectorized pure-numpy fallback.

Selection is by the ``SYNERGY_KERNEL`` environment variable (``numba`` or
``numpy``), read at call time so tests and benchmarks can switch freely.
Both kernels share the exact same semantics: row-stochastic transitions from
per-row weight sums, uniform teleport with probability ``1 - damping``,
dangling rows spreading their whole mass uniformly, and an L1 stopping rule.

Inputs: ``indptr`` (int64, length n+1), ``indices`` (int64), ``weights``
(float64) describing the directed expansion of the undirected co-author
graph (every edge stored in both directions).  Returns
``(scores, iterations, converged)`` with scores summing to 1.
"""

from __future__ import annotations

import os

import numpy as np

KERNEL_ENV = "SYNERGY_KERNEL"

try:  # pragma: no cover - exercised implicitly by kernel selection
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False


def pagerank_numpy(indptr, indices, weights, damping, tol, max_iter):
    """Vectorized reference implementation."""
    n = indptr.size - 1
    if n == 0:
        return np.empty(0), 0, True
    row_of_edge = np.repeat(np.arange(n), np.diff(indptr))
    strength = np.zeros(n)
    np.add.at(strength, row_of_edge, weights)
    dangling = strength == 0.0
    # Pre-divide each edge by its source row's total outgoing weight.
    out_norm = np.where(dangling, 1.0, strength)
    w_norm = weights / out_norm[row_of_edge]

    x = np.full(n, 1.0 / n)
    base = (1.0 - damping) / n
    for iteration in range(1, max_iter + 1):
        flow = np.bincount(indices, weights=x[row_of_edge] * w_norm, minlength=n)
        loose = x[dangling].sum() / n
        new = base + damping * (flow + loose)
        delta = np.abs(new - x).sum()
        x = new
        if delta < tol:
            return x, iteration, True
    return x, max_iter, False


def _pagerank_loops(indptr, indices, weights, damping, tol, max_iter):
    """Loop-oriented implementation, compiled by numba when available."""
    n = indptr.shape[0] - 1
    if n == 0:
        return np.empty(0), 0, True
    strength = np.zeros(n)
    for u in range(n):
        for e in range(indptr[u], indptr[u + 1]):
            strength[u] += weights[e]

    x = np.full(n, 1.0 / n)
    base = (1.0 - damping) / n
    for iteration in range(1, max_iter + 1):
        new = np.zeros(n)
        loose = 0.0
        for u in range(n):
            if strength[u] == 0.0:
                loose += x[u]
                continue
            scale = x[u] / strength[u]
            for e in range(indptr[u], indptr[u + 1]):
                new[indices[e]] += scale * weights[e]
        uniform = base + damping * loose / n
        delta = 0.0
        for v in range(n):
            new[v] = uniform + damping * new[v]
            delta += abs(new[v] - x[v])
        x = new
        if delta < tol:
            return x, iteration, True
    return x, max_iter, False


if HAVE_NUMBA:
    pagerank_numba = numba.njit(cache=True)(_pagerank_loops)
else:  # pragma: no cover
    pagerank_numba = None


def available_kernels() -> dict:
    kernels = {"numpy": pagerank_numpy}
    if HAVE_NUMBA:
        kernels["numba"] = pagerank_numba
    return kernels


def active_kernel_name() -> str:
    """Kernel chosen by SYNERGY_KERNEL, defaulting to numba when importable."""
    requested = os.environ.get(KERNEL_ENV, "").strip().lower()
    if requested:
        if requested not in ("numpy", "numba"):
            raise ValueError(f"{KERNEL_ENV} must be 'numpy' or 'numba', got {requested!r}")
        if requested == "numba" and not HAVE_NUMBA:
            raise ValueError(f"{KERNEL_ENV}=numba but numba is not importable")
        return requested
    return "numba" if HAVE_NUMBA else "numpy"


def pagerank_csr(indptr, indices, weights, damping, tol, max_iter, kernel: str | None = None):
    """Run the selected kernel; returns (scores, iterations, converged)."""
    name = kernel or active_kernel_name()
    fn = available_kernels()[name]
    scores, iterations, converged = fn(
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(weights, dtype=np.float64),
        float(damping),
        float(tol),
        int(max_iter),
    )
    return scores, int(iterations), bool(converged)
