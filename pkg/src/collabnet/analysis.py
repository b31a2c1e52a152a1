"""Method-comparison and validation analyses over a loaded graph.

Covers the offline study tooling: rank-vs-rank scatter points and their
Pearson correlation, publication-count curves, per-author interest and
co-author profiles, the seeded coauthor-proximity validation experiment with
its contingency-table statistics, and a small wall-clock timing harness.
Emission helpers write plain CSV/JSON so results can be plotted elsewhere.
"""

from __future__ import annotations

import json
import logging
import os
import re
import time
from dataclasses import dataclass

import numpy as np

from . import coauthor, ranking, stats
from .coauthor import PagerankConfig, PrecomputeStore, Variant
from .errors import InsufficientData, UnknownNode
from .graph import MultilayerGraph
from .ranking import Method, RankedList
from .stats import pearson

log = logging.getLogger(__name__)

# Beyond this margin the exact test's support is huge and a 1-dof chi-square
# approximation is indistinguishable at reporting precision.
CHI_SQUARE_MARGIN = 10**7


@dataclass(frozen=True)
class ContingencyTable:
    """2x2 neighbor-status table of the validation experiment.

    Columns: random pairs vs coauthor-derived pairs.  Rows: the two
    molecules are non-neighbors vs neighbors in the interaction layer.
    """

    random_nonneighbor: int
    coauthor_nonneighbor: int
    random_neighbor: int
    coauthor_neighbor: int

    @property
    def cells(self) -> tuple[int, int, int, int]:
        return (
            self.random_nonneighbor,
            self.coauthor_nonneighbor,
            self.random_neighbor,
            self.coauthor_neighbor,
        )

    @property
    def total(self) -> int:
        return sum(self.cells)

    def as_dict(self) -> dict:
        return {
            "random_nonneighbor": self.random_nonneighbor,
            "coauthor_nonneighbor": self.coauthor_nonneighbor,
            "random_neighbor": self.random_neighbor,
            "coauthor_neighbor": self.coauthor_neighbor,
        }


@dataclass(frozen=True)
class CorrelationReport:
    query_molecule: int
    pair: tuple[Method, Method]
    top_t: int
    pearson_r: float
    points: tuple[tuple[int, int], ...]
    omitted: int  # authors in A's top block that never appear in B


@dataclass(frozen=True)
class ValidationResult:
    table: ContingencyTable
    odds_ratio: float
    p_value: float
    n_molecules_used: int
    n_authors_used: int
    scaled_down: bool


@dataclass(frozen=True)
class TimingStats:
    mean_s: float
    var_s: float
    runs: int


def rank_by_method(
    graph: MultilayerGraph,
    m: int,
    method: Method,
    cfg: PagerankConfig | None = None,
    store: PrecomputeStore | None = None,
) -> RankedList:
    """Dispatch a query molecule to the right ranking implementation."""
    method = Method(method)
    if method is Method.HYPERGEOMETRIC:
        return ranking.rank_hypergeometric(graph, m)
    if method is Method.COUNT_NONNORM:
        return ranking.rank_by_count(graph, m, normalized=False)
    if method is Method.COUNT_NORM:
        return ranking.rank_by_count(graph, m, normalized=True)
    variant = Variant.NORM if method is Method.PAGERANK_NORM else Variant.NONNORM
    return coauthor.rank_pagerank(graph, m, variant, cfg, store=store)


def cross_rank(
    list_a: RankedList, list_b: RankedList, top_t: int
) -> list[tuple[int, int]]:
    """(rank in A, rank in B) for A's top block, skipping authors absent from B."""
    rank_in_b = {e.author_id: i + 1 for i, e in enumerate(list_b.entries)}
    points = []
    for i, entry in enumerate(list_a.entries[: max(0, top_t)]):
        b = rank_in_b.get(entry.author_id)
        if b is not None:
            points.append((i + 1, b))
    return points


def correlation_report(
    list_a: RankedList, list_b: RankedList, top_t: int
) -> CorrelationReport:
    """Cross-rank points plus their Pearson correlation."""
    top = min(top_t, len(list_a.entries))
    points = cross_rank(list_a, list_b, top)
    if len(points) < 2:
        raise InsufficientData(
            f"only {len(points)} shared authors between {list_a.method} and {list_b.method}"
        )
    r = pearson([p[0] for p in points], [p[1] for p in points])
    return CorrelationReport(
        query_molecule=list_a.query_molecule,
        pair=(list_a.method, list_b.method),
        top_t=top,
        pearson_r=r,
        points=tuple(points),
        omitted=top - len(points),
    )


def pubcount_curve(ranked: RankedList, top_t: int) -> list[tuple[int, int]]:
    """(rank, n_pc) points for the first ``top_t`` entries carrying counts."""
    points = []
    for i, entry in enumerate(ranked.entries[: max(0, top_t)]):
        if entry.contribution is None:
            continue
        points.append((i + 1, entry.contribution.n_pc))
    return points


def author_interests(graph: MultilayerGraph, a: int, top_m: int = 5) -> list[int]:
    """The author's most-published-on molecules (count desc, name asc)."""
    if a not in graph.authors:
        raise UnknownNode(f"unknown author id {a}")
    counts: dict[int, int] = {}
    for pub_id in graph.author_publications(a):
        for mol in graph.molecules_mentioned_by(pub_id):
            counts[mol] = counts.get(mol, 0) + 1
    ordered = sorted(
        counts, key=lambda mol: (-counts[mol], graph.molecules[mol].canonical_name)
    )
    return ordered[: max(0, top_m)]


def top_coauthors(graph: MultilayerGraph, a: int, top_c: int = 5) -> list[int]:
    """The author's most-frequent co-authors (shared pubs desc, name asc)."""
    if a not in graph.authors:
        raise UnknownNode(f"unknown author id {a}")
    counts: dict[int, int] = {}
    for pub_id in graph.author_publications(a):
        for other in graph.authors_of(pub_id):
            if other != a:
                counts[other] = counts.get(other, 0) + 1
    ordered = sorted(
        counts, key=lambda co: (-counts[co], graph.authors[co].canonical_name)
    )
    return ordered[: max(0, top_c)]


def odds_ratio(t: ContingencyTable) -> float:
    """(coauthor_neighbor / coauthor_nonneighbor) over (random_neighbor / random_nonneighbor).

    Zero cells fall back to the Haldane correction (+0.5 everywhere) with a
    logged warning.
    """
    a, b, c, d = t.cells
    if min(a, b, c, d) < 0:
        raise InsufficientData("negative contingency cell")
    if min(a, b, c, d) == 0:
        if t.total == 0:
            raise InsufficientData("empty contingency table")
        log.warning("zero cell in %s; applying +0.5 continuity correction", t.as_dict())
        af, bf, cf, df = (x + 0.5 for x in t.cells)
        return (df * af) / (bf * cf)
    return (d * a) / (b * c)


def fisher_exact(t: ContingencyTable) -> float:
    """Two-sided exact p-value; chi-square approximation for huge margins."""
    a, b, c, d = t.cells
    margins = (a + b, c + d, a + c, b + d)
    if max(margins, default=0) > CHI_SQUARE_MARGIN:
        return stats.chi_square_p(a, b, c, d)
    return stats.fisher_exact_counts(a, b, c, d)


def _neighbor_sets(graph: MultilayerGraph, molecules) -> dict[int, set[int]]:
    return {m: graph.related_molecules(m) for m in molecules}


def validation_experiment(
    graph: MultilayerGraph,
    n_molecules: int = 500,
    n_authors: int = 250,
    min_pubs: int = 5,
    seed: int = 0,
) -> ValidationResult:
    """Do co-authors' interests sit closer in the interaction network than chance?

    Null side: sample molecules uniformly and classify every unordered pair
    by interaction-neighbor status.  Coauthor side: sample authors with at
    least ``min_pubs`` publications, cross their top-5 interest molecules
    with each of their top-5 co-authors' interests (molecules shared by both
    top-5 lists are dropped first), and classify those pairs the same way.

    Randomness comes from ``numpy.random.default_rng(seed)`` (the PCG64
    generator), so a given seed and graph reproduce the table bit for bit.
    """
    rng = np.random.default_rng(seed)

    mol_ids = sorted(graph.molecules)
    n_mol_used = min(n_molecules, len(mol_ids))
    if n_mol_used < 2:
        raise InsufficientData("need at least two molecules for the null side")
    chosen_idx = rng.choice(len(mol_ids), size=n_mol_used, replace=False)
    sample_mols = sorted(mol_ids[i] for i in chosen_idx)
    neighbors = _neighbor_sets(graph, sample_mols)

    random_neighbor = 0
    random_nonneighbor = 0
    for i, m1 in enumerate(sample_mols):
        near = neighbors[m1]
        for m2 in sample_mols[i + 1 :]:
            if m2 in near:
                random_neighbor += 1
            else:
                random_nonneighbor += 1

    qualified = sorted(a for a, node in graph.authors.items() if node.n_total >= min_pubs)
    n_auth_used = min(n_authors, len(qualified))
    if n_auth_used == 0:
        raise InsufficientData(f"no author has {min_pubs}+ publications")
    chosen_idx = rng.choice(len(qualified), size=n_auth_used, replace=False)
    sample_authors = sorted(qualified[i] for i in chosen_idx)

    coauthor_neighbor = 0
    coauthor_nonneighbor = 0
    for a in sample_authors:
        interests_a = author_interests(graph, a, 5)
        for co in top_coauthors(graph, a, 5):
            interests_c = author_interests(graph, co, 5)
            shared = set(interests_a) & set(interests_c)
            for m1 in interests_a:
                if m1 in shared:
                    continue
                related = graph.related_molecules(m1)
                for m2 in interests_c:
                    if m2 in shared:
                        continue
                    if m2 in related:
                        coauthor_neighbor += 1
                    else:
                        coauthor_nonneighbor += 1

    table = ContingencyTable(
        random_nonneighbor=random_nonneighbor,
        coauthor_nonneighbor=coauthor_nonneighbor,
        random_neighbor=random_neighbor,
        coauthor_neighbor=coauthor_neighbor,
    )
    a_, b_, c_, d_ = table.cells
    if min(a_ + b_, c_ + d_, a_ + c_, b_ + d_) == 0:
        raise InsufficientData(f"degenerate contingency margins: {table.as_dict()}")

    return ValidationResult(
        table=table,
        odds_ratio=odds_ratio(table),
        p_value=fisher_exact(table),
        n_molecules_used=n_mol_used,
        n_authors_used=n_auth_used,
        scaled_down=(n_mol_used < n_molecules or n_auth_used < n_authors),
    )


def timing_harness(
    graph: MultilayerGraph,
    molecules,
    methods,
    repetitions: int,
    cfg: PagerankConfig | None = None,
    store: PrecomputeStore | None = None,
) -> dict[str, TimingStats]:
    """Wall-clock mean/variance per method over repeated full query sweeps.

    Results are machine-dependent and reported, never asserted against
    absolute values.  Each repetition times one pass over ``molecules``.
    """
    out: dict[str, TimingStats] = {}
    if repetitions <= 0:
        return out
    for method in methods:
        method = Method(method)
        durations = []
        for _ in range(repetitions):
            t0 = time.perf_counter()
            for m in molecules:
                rank_by_method(graph, m, method, cfg=cfg, store=store)
            durations.append(time.perf_counter() - t0)
        arr = np.asarray(durations)
        out[method.value] = TimingStats(
            mean_s=float(arr.mean()), var_s=float(arr.var()), runs=repetitions
        )
    return out


# -- report emission ---------------------------------------------------------


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_-]+", "_", text).strip("_") or "query"


def emit_cross_rank_csv(report: CorrelationReport, molecule_name: str, out_dir) -> str:
    """Write rank_a,rank_b points; returns the file path."""
    os.makedirs(out_dir, exist_ok=True)
    name = f"{_slug(molecule_name)}_{report.pair[0].value}_vs_{report.pair[1].value}.csv"
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("rank_a,rank_b\n")
        for ra, rb in report.points:
            fh.write(f"{ra},{rb}\n")
    return path


def emit_curve_csv(ranked: RankedList, molecule_name: str, top_t: int, out_dir) -> str:
    """Write rank,n_pc points for one method; returns the file path."""
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{_slug(molecule_name)}_{ranked.method.value}_curve.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("rank,n_pc\n")
        for rank, n_pc in pubcount_curve(ranked, top_t):
            fh.write(f"{rank},{n_pc}\n")
    return path


def emit_timings_csv(timings: dict[str, TimingStats], out_dir) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "timings.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("method,mean_s,var_s\n")
        for method in sorted(timings):
            t = timings[method]
            fh.write(f"{method},{t.mean_s:.9f},{t.var_s:.12f}\n")
    return path


def emit_summary_json(summary: dict, out_dir) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "summary.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
