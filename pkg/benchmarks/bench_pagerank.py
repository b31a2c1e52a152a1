"""Compare the pagerank kernels (jit-compiled vs pure numpy) on two workloads:

1. the co-author subnetwork of the busiest molecule in the bundled corpus
   (realistic shape: a few hundred nodes, dense core), and
2. a larger seeded random graph (configurable size).

Each kernel gets one untimed warmup call so jit compilation never pollutes
the numbers, then the best and mean wall time over the requested repeats.
The two kernels' score vectors are compared element-wise at the end.

Usage: python3 benchmarks/bench_pagerank.py [--nodes N] [--degree D]
       [--repeats R] [--seed S] [--tolerance T] [--max-iter M]
"""

from __future__ import annotations

import argparse
import pathlib
import sys
import time

import numpy as np

from collabnet.coauthor import Variant, build_subnetwork
from collabnet.ingest import ingest_corpus, load_interactions, load_molecule_catalog
from collabnet.graph import MultilayerGraph
from collabnet.kernels import available_kernels, pagerank_csr

REPO_ROOT = pathlib.Path(__file__).resolve().parent.parent
SYNTH_DIR = REPO_ROOT / "data" / "synthetic"


def edges_to_csr(n: int, edges: list[tuple[int, int, float]]):
    """Symmetric edge list -> CSR with sorted rows (both directions stored)."""
    adjacency: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for x, y, w in edges:
        adjacency[x].append((y, w))
        adjacency[y].append((x, w))
    indptr = np.zeros(n + 1, dtype=np.int64)
    for i, row in enumerate(adjacency):
        row.sort()
        indptr[i + 1] = indptr[i] + len(row)
    indices = np.fromiter(
        (j for row in adjacency for j, _ in row), dtype=np.int64, count=int(indptr[-1])
    )
    weights = np.fromiter(
        (w for row in adjacency for _, w in row), dtype=np.float64, count=int(indptr[-1])
    )
    return indptr, indices, weights


def corpus_workload():
    graph = MultilayerGraph()
    load_molecule_catalog(SYNTH_DIR / "catalog.tsv", graph)
    load_interactions(SYNTH_DIR / "interactions.tsv", graph)
    ingest_corpus(SYNTH_DIR / "corpus.jsonl", graph)
    hub = max(
        graph.molecules,
        key=lambda mid: len(graph.related_molecules(mid)),
    )
    net = build_subnetwork(graph, hub, Variant.NONNORM)
    order = sorted(net.nodes)
    index = {a: i for i, a in enumerate(order)}
    edges = [(index[e.x], index[e.y], e.weight) for e in net.edges]
    name = graph.molecules[hub].canonical_name
    label = f"corpus hub {name} ({len(order)} authors, {len(edges)} pairs)"
    return label, edges_to_csr(len(order), edges)


def random_workload(nodes: int, degree: int, seed: int):
    rng = np.random.default_rng(seed)
    half = nodes * degree // 2
    xs = rng.integers(0, nodes, size=half)
    ys = rng.integers(0, nodes, size=half)
    keep = xs != ys
    ws = rng.integers(1, 20, size=half).astype(np.float64)
    edges = list(zip(xs[keep].tolist(), ys[keep].tolist(), ws[keep].tolist()))
    label = f"random graph ({nodes} nodes, {len(edges)} pairs, seed {seed})"
    return label, edges_to_csr(nodes, edges)


def bench(kernel: str, csr, damping, tol, max_iter, repeats: int):
    indptr, indices, weights = csr
    # warmup: jit compilation / first-touch costs stay out of the timings
    pagerank_csr(indptr, indices, weights, damping, tol, max_iter, kernel=kernel)
    times = []
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = pagerank_csr(
            indptr, indices, weights, damping, tol, max_iter, kernel=kernel
        )
        times.append(time.perf_counter() - start)
    scores, iterations, converged = result
    return {
        "best_ms": min(times) * 1e3,
        "mean_ms": sum(times) / len(times) * 1e3,
        "iterations": iterations,
        "converged": converged,
        "scores": scores,
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, default=50_000)
    parser.add_argument("--degree", type=int, default=8)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--tolerance", type=float, default=1e-9)
    parser.add_argument("--max-iter", type=int, default=200)
    args = parser.parse_args(argv)

    kernels = sorted(available_kernels())
    if len(kernels) < 2:
        print(f"note: only {kernels} available; no cross-kernel comparison", file=sys.stderr)

    workloads = [
        corpus_workload(),
        random_workload(args.nodes, args.degree, args.seed),
    ]

    print(f"{'workload':<55} {'kernel':<7} {'best ms':>9} {'mean ms':>9} {'iters':>6}  conv")
    for label, csr in workloads:
        results = {}
        for kernel in kernels:
            r = bench(kernel, csr, 0.85, args.tolerance, args.max_iter, args.repeats)
            results[kernel] = r
            print(
                f"{label:<55} {kernel:<7} {r['best_ms']:>9.2f} {r['mean_ms']:>9.2f}"
                f" {r['iterations']:>6}  {r['converged']}"
            )
        if len(results) == 2:
            a, b = (results[k]["scores"] for k in kernels)
            diff = float(np.max(np.abs(a - b))) if len(a) else 0.0
            fastest = min(kernels, key=lambda k: results[k]["best_ms"])
            speedup = (
                max(results[k]["best_ms"] for k in kernels)
                / results[fastest]["best_ms"]
            )
            print(
                f"{'':<55} agree: max |diff| = {diff:.2e}"
                f" | fastest: {fastest} ({speedup:.1f}x)"
            )
            if diff > 1e-10:
                print("error: kernels disagree beyond 1e-10", file=sys.stderr)
                return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
