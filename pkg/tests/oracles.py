"""Brute-force reference implementations used to cross-check the library.

Each function recomputes a quantity by the most primitive route available
(explicit enumeration, exact rational arithmetic, dense linear algebra) so the
optimized implementations can be compared against an independently derived
answer.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def hypergeom_tail_enumerated(population: int, successes: int, sample: int, observed: int) -> Fraction:
    """P(X >= observed) by enumerating every possible draw of ``sample`` items."""
    marked = set(range(successes))
    favorable = 0
    total = 0
    for subset in itertools.combinations(range(population), sample):
        total += 1
        hits = sum(1 for item in subset if item in marked)
        if hits >= observed:
            favorable += 1
    return Fraction(favorable, total)


def fisher_two_sided_enumerated(a: int, b: int, c: int, d: int) -> Fraction:
    """Two-sided Fisher p by summing exact probabilities of all same-margin tables."""
    row1, row2, col1, col2 = a + b, c + d, a + c, b + d
    n = row1 + row2

    def prob(i: int) -> Fraction | None:
        top_right = row1 - i
        bottom_left = col1 - i
        bottom_right = row2 - bottom_left
        if min(top_right, bottom_left, bottom_right) < 0:
            return None
        numerator = (
            math.factorial(row1)
            * math.factorial(row2)
            * math.factorial(col1)
            * math.factorial(col2)
        )
        denominator = (
            math.factorial(n)
            * math.factorial(i)
            * math.factorial(top_right)
            * math.factorial(bottom_left)
            * math.factorial(bottom_right)
        )
        return Fraction(numerator, denominator)

    p_obs = prob(a)
    assert p_obs is not None
    total = Fraction(0)
    for i in range(0, min(row1, col1) + 1):
        p = prob(i)
        if p is not None and p <= p_obs:
            total += p
    return total


def pagerank_dense(n: int, edges, damping: float = 0.85) -> np.ndarray:
    """Stationary scores by dense linear solve.

    ``edges`` is an iterable of ``(src, dst, weight)`` directed edges.  Nodes
    with no outgoing weight spread their mass uniformly, matching the
    iterative kernels' dangling-node handling.  The solution of
    ``(I - damping * P) x = (1 - damping)/n * 1`` sums to one because ``P`` is
    column-stochastic.
    """
    A = np.zeros((n, n), dtype=np.float64)
    for src, dst, w in edges:
        A[dst, src] += w
    out_strength = A.sum(axis=0)
    P = np.empty((n, n), dtype=np.float64)
    for j in range(n):
        if out_strength[j] > 0:
            P[:, j] = A[:, j] / out_strength[j]
        else:
            P[:, j] = 1.0 / n
    return np.linalg.solve(np.eye(n) - damping * P, np.full(n, (1.0 - damping) / n))


def edges_to_csr(n: int, edges):
    """(indptr, indices, weights) for directed ``(src, dst, weight)`` edges."""
    buckets: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for src, dst, w in edges:
        buckets[src].append((dst, float(w)))
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices: list[int] = []
    weights: list[float] = []
    for src, bucket in enumerate(buckets):
        for dst, w in sorted(bucket):
            indices.append(dst)
            weights.append(w)
        indptr[src + 1] = len(indices)
    return (
        indptr,
        np.asarray(indices, dtype=np.int64),
        np.asarray(weights, dtype=np.float64),
    )


def random_graph_edges(rng, n: int, density: float = 0.4, symmetric: bool = True, integer_weights: bool = False):
    """Random weighted edge list; both directions are emitted when symmetric."""

    def weight() -> float:
        if integer_weights:
            return float(rng.integers(1, 20))
        return float(rng.uniform(0.05, 2.0))

    edges = []
    if symmetric:
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < density:
                    w = weight()
                    edges.append((i, j, w))
                    edges.append((j, i, w))
    else:
        for i in range(n):
            for j in range(n):
                if i != j and rng.random() < density:
                    edges.append((i, j, weight()))
    return edges
