"""Embedded multilayer collaboration-network engine.

Layers molecules, publications and authors into one graph, ranks an author's
relevance to a query molecule five different ways (hypergeometric surprise,
raw and normalized publication counts, and two weighted-PageRank variants
over per-query co-authorship subnetworks), and ships the analysis, HTTP
service and CLI tooling around that core.
"""

from .analysis import (
    ContingencyTable,
    CorrelationReport,
    ValidationResult,
    author_interests,
    correlation_report,
    cross_rank,
    fisher_exact,
    odds_ratio,
    pubcount_curve,
    rank_by_method,
    timing_harness,
    top_coauthors,
    validation_experiment,
)
from .coauthor import (
    CoauthorEdge,
    CoauthorSubnetwork,
    PagerankConfig,
    PagerankResult,
    PrecomputeStore,
    Variant,
    build_subnetwork,
    normalized_edge_weight,
    pagerank,
    precompute,
    rank_pagerank,
)
from .eutils import RemoteConfig, fetch_remote
from .graph import AuthorNode, MoleculeNode, MultilayerGraph, PublicationNode
from .ingest import (
    IngestReport,
    PublicationRecord,
    ingest_corpus,
    load_interactions,
    load_molecule_catalog,
    match_mentions,
)
from .ranking import (
    AuthorContribution,
    HypergeomQuery,
    Method,
    RankedEntry,
    RankedList,
    contributions,
    hypergeom_sf,
    r_pc,
    rank_count,
    rank_hypergeometric,
)
from .snapshot import load_snapshot, save_snapshot
from .stats import pearson

__version__ = "0.1.0"

__all__ = [
    "AuthorContribution",
    "AuthorNode",
    "CoauthorEdge",
    "CoauthorSubnetwork",
    "ContingencyTable",
    "CorrelationReport",
    "HypergeomQuery",
    "IngestReport",
    "Method",
    "MoleculeNode",
    "MultilayerGraph",
    "PagerankConfig",
    "PagerankResult",
    "PrecomputeStore",
    "PublicationNode",
    "PublicationRecord",
    "RankedEntry",
    "RankedList",
    "RemoteConfig",
    "ValidationResult",
    "Variant",
    "author_interests",
    "build_subnetwork",
    "contributions",
    "correlation_report",
    "cross_rank",
    "normalized_edge_weight",
    "fetch_remote",
    "fisher_exact",
    "hypergeom_sf",
    "ingest_corpus",
    "load_interactions",
    "load_molecule_catalog",
    "load_snapshot",
    "match_mentions",
    "odds_ratio",
    "pagerank",
    "pearson",
    "precompute",
    "pubcount_curve",
    "r_pc",
    "rank_by_method",
    "rank_count",
    "rank_hypergeometric",
    "rank_pagerank",
    "save_snapshot",
    "timing_harness",
    "top_coauthors",
    "validation_experiment",
    "__version__",
]
