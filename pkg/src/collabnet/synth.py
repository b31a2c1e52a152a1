"""Deterministic synthetic corpus generator.

Produces a molecule catalog, an interaction list and a JSONL publication
corpus whose statistical texture mirrors the real-world behaviour the
analysis layer is tested against:

* a hub molecule (``SYN001``) with a large related set and well over a
  hundred contributing authors;
* "breadth" teams publishing shallowly across many hub neighbors with large
  publication totals, versus "depth" teams concentrating on one or two
  molecules — which decorrelates the hypergeometric ranking from the raw
  count ranking while the two count rankings stay strongly correlated;
* interaction edges concentrated inside team topic clusters, so co-authors'
  favourite molecules really are network neighbors far more often than
  random pairs are.

Everything is driven by one ``numpy.random.default_rng`` seed; identical
config always yields byte-identical files.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .graph import MultilayerGraph
from .ingest import ingest_corpus, load_interactions, load_molecule_catalog

HUB_MOLECULE = "SYN001"

_FIRST = [
    "Alice", "Bruno", "Chen", "Dana", "Elif", "Farid", "Grace", "Hiro",
    "Ines", "Jonas", "Kira", "Liam", "Mara", "Nadia", "Omar", "Priya",
    "Quinn", "Rosa", "Sven", "Tara", "Ulrich", "Vera", "Wen", "Xenia",
    "Yusuf", "Zoe",
]
_LAST = [
    "Abbott", "Bauer", "Costa", "Dimitrov", "Endo", "Fischer", "Garcia",
    "Hansen", "Ito", "Jansen", "Kovacs", "Larsen", "Moreau", "Novak",
    "Okafor", "Petrov", "Quispe", "Rossi", "Sato", "Tanaka", "Ueda",
    "Vogel", "Weber", "Xu", "Yamamoto", "Zhou",
]
_AFFILIATIONS = [
    "Institute of Synthetic Biology",
    "Center for Network Medicine",
    "Department of Computational Chemistry",
    "Molecular Systems Laboratory",
    None,
]

_TEMPLATES = [
    "We investigate the role of {mols} in synthetic pathway regulation.",
    "This study characterizes {mols} using a reconstituted signaling assay.",
    "Binding partners of {mols} were profiled across cell lines.",
    "A quantitative model links {mols} to downstream expression changes.",
    "High-throughput screening identified modulators of {mols}.",
]


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 42
    n_molecules: int = 100
    n_publications: int = 2000
    n_authors: int = 550
    hub_degree: int = 35          # interaction neighbors of the hub molecule
    year_range: tuple[int, int] = (1995, 2025)


def _molecule_names(n: int) -> list[str]:
    return [f"SYN{i + 1:03d}" for i in range(n)]


def _author_names(rng: np.random.Generator, n: int) -> list[str]:
    combos = [f"{f} {l}" for f in _FIRST for l in _LAST]
    idx = rng.choice(len(combos), size=n, replace=False)
    return [combos[i] for i in sorted(idx)]


def _team_specs(rng: np.random.Generator, cfg: SynthConfig):
    """Partition authors into teams and assign each team a topic profile."""
    hub_neighbors = list(range(1, cfg.hub_degree + 1))      # molecule indices
    outside = list(range(cfg.hub_degree + 1, cfg.n_molecules))

    teams = []
    author = 0
    while author < cfg.n_authors:
        size = int(rng.integers(3, 9))
        members = list(range(author, min(author + size, cfg.n_authors)))
        author += size

        archetype = rng.choice(
            ["breadth", "depth", "mixed", "outsider"], p=[0.24, 0.22, 0.14, 0.40]
        )
        if archetype == "breadth":
            hub_topics = rng.choice(hub_neighbors, size=int(rng.integers(6, 11)), replace=False)
            side_topics = rng.choice(outside, size=int(rng.integers(4, 9)), replace=False)
            outsider_share = float(rng.uniform(0.45, 0.65))
            activity = float(rng.uniform(2.2, 3.2))
        elif archetype == "depth":
            hub_topics = rng.choice(hub_neighbors, size=int(rng.integers(1, 3)), replace=False)
            side_topics = rng.choice(outside, size=1)
            outsider_share = float(rng.uniform(0.0, 0.15))
            activity = float(rng.uniform(0.7, 1.3))
        elif archetype == "mixed":
            hub_topics = rng.choice(hub_neighbors, size=int(rng.integers(2, 5)), replace=False)
            side_topics = rng.choice(outside, size=int(rng.integers(2, 5)), replace=False)
            outsider_share = float(rng.uniform(0.25, 0.45))
            activity = float(rng.uniform(1.0, 2.0))
        else:
            hub_topics = np.empty(0, dtype=int)
            side_topics = rng.choice(outside, size=int(rng.integers(3, 7)), replace=False)
            outsider_share = 1.0
            activity = float(rng.uniform(0.8, 1.8))

        weights = rng.dirichlet(np.full(len(members), 1.4))
        teams.append(
            {
                "members": members,
                "hub_topics": sorted(int(t) for t in hub_topics),
                "side_topics": sorted(int(t) for t in side_topics),
                "outsider_share": outsider_share,
                "activity": activity,
                "member_weights": weights,
            }
        )
    return teams


def _interaction_edges(rng: np.random.Generator, cfg: SynthConfig, teams) -> list[tuple[int, int]]:
    """Hub star, intra-topic-cluster edges and sparse random background."""
    edges: set[tuple[int, int]] = set()

    def add(a: int, b: int) -> None:
        if a != b:
            edges.add((min(a, b), max(a, b)))

    for neighbor in range(1, cfg.hub_degree + 1):
        add(0, neighbor)

    # Molecules studied by the same team tend to interact with one another.
    for team in teams:
        cluster = team["hub_topics"] + team["side_topics"]
        for i, a in enumerate(cluster):
            for b in cluster[i + 1 :]:
                if rng.random() < 0.10:
                    add(a, b)

    for _ in range(cfg.n_molecules // 2):
        a, b = rng.integers(1, cfg.n_molecules, size=2)
        add(int(a), int(b))
    return sorted(edges)


def generate(cfg: SynthConfig | None = None):
    """Build the corpus in memory.

    Returns (catalog_lines, interaction_lines, publication_dicts).
    """
    cfg = cfg or SynthConfig()
    rng = np.random.default_rng(cfg.seed)
    molecule_names = _molecule_names(cfg.n_molecules)
    author_names = _author_names(rng, cfg.n_authors)
    affiliations = [
        _AFFILIATIONS[int(rng.integers(0, len(_AFFILIATIONS)))] for _ in author_names
    ]
    teams = _team_specs(rng, cfg)

    catalog_lines = []
    for i, name in enumerate(molecule_names):
        # Every third molecule gets a hyphenated alias to exercise matching.
        alias = f"SP-{i + 1}" if i % 3 == 0 else ""
        catalog_lines.append(f"{name}\t{alias}" if alias else name)

    interaction_lines = [
        f"{molecule_names[a]}\t{molecule_names[b]}"
        for a, b in _interaction_edges(rng, cfg, teams)
    ]

    team_weights = np.array([t["activity"] * len(t["members"]) for t in teams])
    team_weights = team_weights / team_weights.sum()

    publications = []
    for p in range(cfg.n_publications):
        team = teams[int(rng.choice(len(teams), p=team_weights))]
        n_auth = 1 + int(rng.binomial(4, 0.45))
        n_auth = min(n_auth, len(team["members"]))
        picked = rng.choice(
            len(team["members"]), size=n_auth, replace=False, p=team["member_weights"]
        )
        authors = sorted(team["members"][i] for i in picked)

        pool_outside = team["side_topics"]
        pool_hub = team["hub_topics"]
        n_mols = 1 + int(rng.random() < 0.35) + int(rng.random() < 0.12)
        chosen: set[int] = set()
        for _ in range(n_mols):
            use_outside = (not pool_hub) or rng.random() < team["outsider_share"]
            pool = pool_outside if use_outside else pool_hub
            chosen.add(int(pool[int(rng.integers(0, len(pool)))]))

        mentioned = [molecule_names[m] for m in sorted(chosen)]
        # Occasionally refer to a molecule by its alias in the abstract.
        rendered = [
            f"SP-{molecule_names.index(m) + 1}"
            if molecule_names.index(m) % 3 == 0 and rng.random() < 0.10
            else m
            for m in mentioned
        ]
        template = _TEMPLATES[int(rng.integers(0, len(_TEMPLATES)))]
        abstract = template.format(mols=" and ".join(rendered))
        keywords = [mentioned[0]] if rng.random() < 0.3 else []

        publications.append(
            {
                "pub_id": f"SYNTH:{p + 1:06d}",
                "title": f"Study {p + 1} on {mentioned[0]}",
                "abstract": abstract,
                "keywords": keywords,
                "year": int(rng.integers(cfg.year_range[0], cfg.year_range[1] + 1)),
                "authors": [
                    {"name": author_names[a], "affiliation": affiliations[a]}
                    for a in authors
                ],
            }
        )
    return catalog_lines, interaction_lines, publications


def write_corpus(out_dir, cfg: SynthConfig | None = None) -> dict[str, str]:
    """Write catalog.tsv, interactions.tsv and corpus.jsonl; returns paths."""
    cfg = cfg or SynthConfig()
    catalog_lines, interaction_lines, publications = generate(cfg)
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "catalog": os.path.join(out_dir, "catalog.tsv"),
        "interactions": os.path.join(out_dir, "interactions.tsv"),
        "corpus": os.path.join(out_dir, "corpus.jsonl"),
    }
    with open(paths["catalog"], "w", encoding="utf-8") as fh:
        fh.write("\n".join(catalog_lines) + "\n")
    with open(paths["interactions"], "w", encoding="utf-8") as fh:
        fh.write("\n".join(interaction_lines) + "\n")
    with open(paths["corpus"], "w", encoding="utf-8") as fh:
        for pub in publications:
            fh.write(json.dumps(pub, sort_keys=True) + "\n")
    return paths


def build_graph(paths: dict[str, str]) -> MultilayerGraph:
    """Ingest a generated corpus directory into a fresh graph."""
    graph = MultilayerGraph()
    load_molecule_catalog(paths["catalog"], graph)
    load_interactions(paths["interactions"], graph)
    ingest_corpus(paths["corpus"], graph)
    return graph
