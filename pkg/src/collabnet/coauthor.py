"""Per-query co-authorship subnetworks and the two PageRank rankings.

For a query molecule the subnetwork is assembled molecule by molecule: for
each related molecule the strongest co-author pairs (by co-authored
publications on that molecule) are kept, the per-molecule winners are
unioned, and each surviving pair's weight is recomputed over DISTINCT
publications mentioning any related molecule.  The non-normalized variant
uses that raw count as the edge weight; the normalized variant divides by
the geometric mean of the two authors' publication totals.
"""

from __future__ import annotations

import enum
import json
import logging
import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from . import ranking
from .errors import EmptyNetwork, FormatVersionMismatch, IoFailure, ZeroTotal
from .graph import MultilayerGraph
from .kernels import pagerank_csr
from .ranking import Method, RankedEntry, RankedList

log = logging.getLogger(__name__)

STORE_MAGIC = "PRC1"
DEFAULT_STORE_NAME = "pagerank.cache"


class Variant(str, enum.Enum):
    NONNORM = "nonnorm"
    NORM = "norm"

    def __str__(self) -> str:
        return self.value

    @property
    def method(self) -> Method:
        return Method.PAGERANK_NORM if self is Variant.NORM else Method.PAGERANK_NONNORM


@dataclass(frozen=True)
class PagerankConfig:
    damping: float = 0.85
    tolerance: float = 1e-9          # L1 change between iterations
    max_iterations: int = 100
    top_pairs_per_molecule: int = 500

    def validate(self) -> "PagerankConfig":
        if not (0.0 < self.damping < 1.0):
            raise ValueError(f"damping must be in (0, 1), got {self.damping}")
        if self.tolerance <= 0 or self.max_iterations < 1 or self.top_pairs_per_molecule < 1:
            raise ValueError("tolerance, max_iterations and top_pairs_per_molecule must be positive")
        return self


@dataclass(frozen=True)
class CoauthorEdge:
    x: int  # author ids, x < y
    y: int
    m_xy: int       # distinct co-authored publications on related molecules
    weight: float


@dataclass(frozen=True)
class CoauthorSubnetwork:
    query_molecule: int
    variant: Variant
    nodes: frozenset[int]
    edges: tuple[CoauthorEdge, ...]
    built_at_revision: int

    @property
    def empty(self) -> bool:
        return not self.nodes


@dataclass(frozen=True)
class PagerankResult:
    scores: dict[int, float]  # author_id -> score, sums to 1
    iterations: int
    converged: bool


def normalized_edge_weight(m_xy: int, n_x: int, n_y: int) -> float:
    """Collaboration strength normalized by the authors' publication totals."""
    if n_x == 0 or n_y == 0:
        raise ZeroTotal("author publication totals must be positive")
    if m_xy < 0 or n_x < 0 or n_y < 0:
        raise ValueError("counts must be non-negative")
    return m_xy / math.sqrt(n_x * n_y)


def _top_pairs(pair_counts: dict[tuple[int, int], int], limit: int) -> set[tuple[int, int]]:
    """Keep the ``limit`` strongest pairs; ties at the cutoff all survive."""
    if len(pair_counts) <= limit:
        return set(pair_counts)
    ordered = sorted(pair_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    cutoff = ordered[limit - 1][1]
    return {pair for pair, count in pair_counts.items() if count >= cutoff}


def build_subnetwork(
    graph: MultilayerGraph, m: int, variant: Variant, cfg: PagerankConfig | None = None
) -> CoauthorSubnetwork:
    """Assemble the co-authorship subnetwork for one query molecule."""
    cfg = (cfg or PagerankConfig()).validate()
    variant = Variant(variant)
    related = graph.related_molecules(m)

    nodes: set[int] = set()
    pubs_by_pair: dict[tuple[int, int], set[str]] = {}
    all_related_pubs = graph.publications_mentioning(related)
    for pub_id in all_related_pubs:
        authors = sorted(graph.authors_of(pub_id))
        nodes.update(authors)
        for i, x in enumerate(authors):
            for y in authors[i + 1 :]:
                pubs_by_pair.setdefault((x, y), set()).add(pub_id)

    kept: set[tuple[int, int]] = set()
    for r in sorted(related):
        per_mol_counts: dict[tuple[int, int], int] = {}
        for pub_id in graph.publications_mentioning({r}):
            authors = sorted(graph.authors_of(pub_id))
            for i, x in enumerate(authors):
                for y in authors[i + 1 :]:
                    pair = (x, y)
                    per_mol_counts[pair] = per_mol_counts.get(pair, 0) + 1
        kept |= _top_pairs(per_mol_counts, cfg.top_pairs_per_molecule)

    edges = []
    for x, y in sorted(kept):
        m_xy = len(pubs_by_pair[(x, y)])
        if variant is Variant.NORM:
            weight = normalized_edge_weight(m_xy, graph.authors[x].n_total, graph.authors[y].n_total)
        else:
            weight = float(m_xy)
        edges.append(CoauthorEdge(x=x, y=y, m_xy=m_xy, weight=weight))

    return CoauthorSubnetwork(
        query_molecule=m,
        variant=variant,
        nodes=frozenset(nodes),
        edges=tuple(edges),
        built_at_revision=graph.revision,
    )


def pagerank(net: CoauthorSubnetwork, cfg: PagerankConfig | None = None) -> PagerankResult:
    """Stationary visit probabilities of the damped walk on the subnetwork."""
    cfg = (cfg or PagerankConfig()).validate()
    if net.empty:
        raise EmptyNetwork(f"no authors publish on molecules related to {net.query_molecule}")

    order = sorted(net.nodes)
    index = {a: i for i, a in enumerate(order)}
    n = len(order)
    adjacency: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for e in net.edges:
        xi, yi = index[e.x], index[e.y]
        adjacency[xi].append((yi, e.weight))
        adjacency[yi].append((xi, e.weight))

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

    scores, iterations, converged = pagerank_csr(
        indptr, indices, weights, cfg.damping, cfg.tolerance, cfg.max_iterations
    )
    if not converged:
        log.warning(
            "pagerank for molecule %d did not converge in %d iterations",
            net.query_molecule,
            iterations,
        )
    return PagerankResult(
        scores={a: float(scores[i]) for i, a in enumerate(order)},
        iterations=iterations,
        converged=converged,
    )


def _ranked_from_scores(
    graph: MultilayerGraph, m: int, variant: Variant, scores: dict[int, float]
) -> RankedList:
    contribs = {c.author_id: c for c in ranking.contributions(graph, m)}
    def name(a: int) -> str:
        return graph.authors[a].canonical_name

    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], name(kv[0])))
    entries = tuple(
        RankedEntry(
            author_id=a,
            author_name=name(a),
            score=score,
            contribution=contribs.get(a),
        )
        for a, score in ordered
    )
    return RankedList(method=variant.method, query_molecule=m, entries=entries)


def rank_pagerank(
    graph: MultilayerGraph,
    m: int,
    variant: Variant,
    cfg: PagerankConfig | None = None,
    store: "PrecomputeStore | None" = None,
) -> RankedList:
    """Score-descending author ranking; ties break by name.

    With a store attached, a fresh result for the graph's current revision is
    served from disk; stale or missing entries trigger a recompute.
    """
    variant = Variant(variant)
    result = store.get(m, variant, graph.revision) if store is not None else None
    if result is None:
        net = build_subnetwork(graph, m, variant, cfg)
        if net.empty:
            return RankedList(method=variant.method, query_molecule=m, entries=())
        result = pagerank(net, cfg)
        if store is not None:
            store.put(m, variant, graph.revision, result)
            store.save()
    return _ranked_from_scores(graph, m, variant, result.scores)


class PrecomputeStore:
    """Disk-backed map (molecule, variant, revision) -> PagerankResult.

    Single JSON file with a format tag; entries from other revisions are
    kept on write but never served, so a snapshot reload cannot observe
    stale scores.
    """

    def __init__(self, path):
        self.path = os.fspath(path)
        self._entries: dict[str, dict] = {}
        if os.path.exists(self.path):
            self._load()

    @staticmethod
    def _key(molecule: int, variant: Variant, revision: int) -> str:
        return f"{molecule}:{Variant(variant).value}:{revision}"

    def _load(self) -> None:
        try:
            with open(self.path, "r", encoding="utf-8") as fh:
                payload = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise IoFailure(f"cannot read precompute store {self.path}: {exc}") from exc
        if not isinstance(payload, dict) or payload.get("format") != STORE_MAGIC:
            raise FormatVersionMismatch(
                f"{self.path}: expected format {STORE_MAGIC!r}, got {payload.get('format')!r}"
            )
        self._entries = payload["entries"]

    def save(self) -> None:
        payload = {"format": STORE_MAGIC, "entries": self._entries}
        directory = os.path.dirname(self.path) or "."
        try:
            fd, tmp = tempfile.mkstemp(dir=directory, prefix=".pagerank-cache-")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
            os.replace(tmp, self.path)
        except OSError as exc:
            raise IoFailure(f"cannot write precompute store {self.path}: {exc}") from exc

    def get(self, molecule: int, variant: Variant, revision: int) -> PagerankResult | None:
        raw = self._entries.get(self._key(molecule, variant, revision))
        if raw is None:
            return None
        return PagerankResult(
            scores={int(a): float(s) for a, s in raw["scores"].items()},
            iterations=int(raw["iterations"]),
            converged=bool(raw["converged"]),
        )

    def put(self, molecule: int, variant: Variant, revision: int, result: PagerankResult) -> None:
        self._entries[self._key(molecule, variant, revision)] = {
            "scores": {str(a): s for a, s in sorted(result.scores.items())},
            "iterations": result.iterations,
            "converged": result.converged,
        }

    def __len__(self) -> int:
        return len(self._entries)


@dataclass(frozen=True)
class PrecomputeReport:
    stored: int   # entries computed and written this run
    skipped: int  # entries already present at the current revision


def precompute_into(
    graph: MultilayerGraph,
    molecules,
    variants=(Variant.NONNORM, Variant.NORM),
    cfg: PagerankConfig | None = None,
    store: PrecomputeStore | None = None,
) -> PrecomputeReport:
    """Compute and persist scores for every (molecule, variant) pair.

    Pairs already present at the graph's current revision are skipped.
    Molecules without interaction neighbors are ignored entirely; a
    neighborhood whose co-author subnetwork turns out empty is stored as an
    empty score table so repeat queries short-circuit too.
    """
    assert store is not None
    stored = 0
    skipped = 0
    for m in sorted(set(molecules)):
        if not graph.related_molecules(m):
            continue
        for variant in variants:
            variant = Variant(variant)
            if store.get(m, variant, graph.revision) is not None:
                skipped += 1
                continue
            net = build_subnetwork(graph, m, variant, cfg)
            if net.empty:
                result = PagerankResult(scores={}, iterations=0, converged=True)
            else:
                result = pagerank(net, cfg)
            store.put(m, variant, graph.revision, result)
            stored += 1
    store.save()
    return PrecomputeReport(stored=stored, skipped=skipped)


def precompute(
    graph: MultilayerGraph,
    molecules,
    variants=(Variant.NONNORM, Variant.NORM),
    cfg: PagerankConfig | None = None,
    store_path=DEFAULT_STORE_NAME,
) -> int:
    """File-path convenience wrapper around :func:`precompute_into`."""
    return precompute_into(graph, molecules, variants, cfg, PrecomputeStore(store_path)).stored
