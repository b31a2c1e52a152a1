"""Shared fixtures: the tiny hand-checkable graph (Q/M1/M2/M3 with authors
A1/A2) in both programmatic and on-disk forms, and the bundled synthetic
corpus loaded once per session."""

from __future__ import annotations

import json
import pathlib

import pytest

from collabnet.graph import MultilayerGraph, PublicationNode
from collabnet.ingest import ingest_corpus, load_interactions, load_molecule_catalog
from collabnet.snapshot import save_snapshot

REPO_ROOT = pathlib.Path(__file__).resolve().parent.parent
SYNTH_DIR = REPO_ROOT / "data" / "synthetic"

F1_CORPUS = [
    {
        "pub_id": "P1",
        "title": "First study",
        "abstract": "M1 plays a central role in the assay.",
        "keywords": [],
        "year": 2019,
        "authors": [{"name": "A1", "affiliation": "Lab One"}, {"name": "A2"}],
    },
    {
        "pub_id": "P2",
        "title": "Second study",
        "abstract": "M1 interacts with M2 under stress.",
        "keywords": [],
        "year": 2020,
        "authors": [{"name": "A1", "affiliation": "Lab One"}],
    },
    {
        "pub_id": "P3",
        "title": "Third study",
        "abstract": "M2 signaling was characterized.",
        "keywords": [],
        "year": 2021,
        "authors": [{"name": "A2"}],
    },
    {
        "pub_id": "P4",
        "title": "Fourth study",
        "abstract": "M3 expression varies by tissue.",
        "keywords": [],
        "year": 2022,
        "authors": [{"name": "A1", "affiliation": "Lab One"}],
    },
]


def build_f1() -> MultilayerGraph:
    """The canonical small graph, constructed through the graph API."""
    g = MultilayerGraph()
    q = g.upsert_molecule("Q")
    m1 = g.upsert_molecule("M1")
    m2 = g.upsert_molecule("M2")
    g.upsert_molecule("M3")
    g.add_interaction(q, m1)
    g.add_interaction(q, m2)
    for rec in F1_CORPUS:
        g.upsert_publication(
            PublicationNode(rec["pub_id"], rec["title"], rec["abstract"], [], rec["year"]),
            [(a["name"], a.get("affiliation")) for a in rec["authors"]],
        )
    g.add_mention("P1", m1)
    g.add_mention("P2", m1)
    g.add_mention("P2", m2)
    g.add_mention("P3", m2)
    g.add_mention("P4", g.resolve_molecule("M3"))
    return g


@pytest.fixture
def f1():
    return build_f1()


@pytest.fixture(scope="session")
def f1_files(tmp_path_factory):
    """F1 as catalog/interactions/corpus files for the ingest pipeline."""
    root = tmp_path_factory.mktemp("f1")
    catalog = root / "catalog.tsv"
    catalog.write_text("Q\nM1\nM2\nM3\n", encoding="utf-8")
    interactions = root / "interactions.tsv"
    interactions.write_text("Q\tM1\nQ\tM2\n", encoding="utf-8")
    corpus = root / "corpus.jsonl"
    corpus.write_text(
        "".join(json.dumps(rec) + "\n" for rec in F1_CORPUS), encoding="utf-8"
    )
    return {"catalog": catalog, "interactions": interactions, "corpus": corpus, "root": root}


@pytest.fixture(scope="session")
def f1_snapshot(tmp_path_factory):
    path = tmp_path_factory.mktemp("f1snap") / "f1.mlg"
    save_snapshot(build_f1(), path)
    return path


def load_bundled_corpus() -> MultilayerGraph:
    g = MultilayerGraph()
    load_molecule_catalog(SYNTH_DIR / "catalog.tsv", g)
    load_interactions(SYNTH_DIR / "interactions.tsv", g)
    ingest_corpus(SYNTH_DIR / "corpus.jsonl", g)
    return g


@pytest.fixture(scope="session")
def synth_graph():
    """The bundled deterministic corpus, ingested once and frozen."""
    return load_bundled_corpus().freeze()


@pytest.fixture(scope="session")
def synth_golden():
    with open(SYNTH_DIR / "validation_seed42.json", "r", encoding="utf-8") as fh:
        return json.load(fh)
