"""Snapshot persistence for the multilayer graph (``.mlg`` files).

Layout (UTF-8 text, one JSON value per record line):

    MLG1
    {"revision": R, "counts": {...}}
    #MOLECULES <n>
    {"id": 1, "name": "...", "aliases": [...]}
    #INTERACTIONS <n>
    [a, b]
    #PUBLICATIONS <n>
    {"id": "...", "title": "...", "abstract": "...", "keywords": [...], "year": Y}
    #AUTHORS <n>
    {"id": 1, "name": "...", "affiliation": ..., "n_total": N}
    #MENTIONS <n>
    ["pub", mol]
    #AUTHORED <n>
    [author, "pub"]
    #CHECKSUM <sha256 of every byte above>

Node ids are written in insertion order, so ``load(save(G))`` reproduces ids,
indexes and ``revision`` exactly; round-trip stability is the binding
contract.  A wrong header raises FormatVersionMismatch; any truncation or
corruption raises ChecksumMismatch before content is trusted.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

from .errors import ChecksumMismatch, FormatVersionMismatch, IoFailure, ParseError
from .graph import (
    AuthorNode,
    MoleculeNode,
    MultilayerGraph,
    PublicationNode,
    fold_name,
)

MAGIC = "MLG1"
SNAPSHOT_ENV = "SYNERGY_SNAPSHOT"


def _dump(value) -> str:
    return json.dumps(value, ensure_ascii=True, separators=(",", ":"), sort_keys=True)


def graph_sections(graph: MultilayerGraph) -> dict[str, list]:
    """Canonical section content; also handy for whole-graph comparison."""
    return {
        "MOLECULES": [
            {
                "id": m.molecule_id,
                "name": m.canonical_name,
                "aliases": sorted(m.aliases),
            }
            for m in (graph.molecules[k] for k in sorted(graph.molecules))
        ],
        "INTERACTIONS": [list(p) for p in graph.interaction_pairs()],
        "PUBLICATIONS": [
            {
                "id": p.pub_id,
                "title": p.title,
                "abstract": p.abstract,
                "keywords": p.keywords,
                "year": p.year,
            }
            for p in (graph.publications[k] for k in sorted(graph.publications))
        ],
        "AUTHORS": [
            {
                "id": a.author_id,
                "name": a.canonical_name,
                "affiliation": a.affiliation,
                "n_total": a.n_total,
            }
            for a in (graph.authors[k] for k in sorted(graph.authors))
        ],
        "MENTIONS": [list(p) for p in graph.mention_pairs()],
        "AUTHORED": [list(p) for p in graph.authored_pairs()],
    }


def save_snapshot(graph: MultilayerGraph, path) -> None:
    """Write the graph to ``path`` atomically (tmp file + rename)."""
    lines = [MAGIC, _dump({"revision": graph.revision, "counts": graph.counts()})]
    for name, records in graph_sections(graph).items():
        lines.append(f"#{name} {len(records)}")
        lines.extend(_dump(rec) for rec in records)
    body = "\n".join(lines) + "\n"
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    try:
        directory = os.path.dirname(os.path.abspath(path))
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".mlg.tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(body)
                fh.write(f"#CHECKSUM {digest}\n")
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoFailure(f"cannot write snapshot {path}: {exc}") from exc


def load_snapshot(path) -> MultilayerGraph:
    """Load a ``.mlg`` snapshot; the result is not frozen."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read snapshot {path}: {exc}") from exc

    # The checksum is verified over raw bytes, before any decoding, so that
    # arbitrary corruption is reported as such rather than as a codec error.
    if not raw.startswith((MAGIC + "\n").encode()):
        raise FormatVersionMismatch(f"{path}: expected header {MAGIC!r}")
    marker = raw.rfind(b"\n#CHECKSUM ")
    if marker < 0:
        raise ChecksumMismatch(f"{path}: checksum trailer missing (truncated file?)")
    body_bytes = raw[: marker + 1]
    recorded = raw[marker + len(b"\n#CHECKSUM ") :].strip().decode("ascii", "replace")
    actual = hashlib.sha256(body_bytes).hexdigest()
    if recorded != actual:
        raise ChecksumMismatch(f"{path}: checksum mismatch")

    lines = body_bytes.decode("utf-8").splitlines()
    try:
        meta = json.loads(lines[1])
    except (IndexError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: bad snapshot metadata") from exc

    sections: dict[str, list] = {}
    current: list | None = None
    for lineno, line in enumerate(lines[2:], start=3):
        if line.startswith("#"):
            name = line[1:].split()[0]
            current = sections.setdefault(name, [])
        elif current is None:
            raise ParseError("record outside any section", line=lineno)
        else:
            try:
                current.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ParseError(f"bad record: {exc}", line=lineno) from exc

    graph = MultilayerGraph()
    for rec in sections.get("MOLECULES", []):
        node = MoleculeNode(rec["id"], rec["name"], set(rec["aliases"]))
        graph.molecules[node.molecule_id] = node
        graph.name_index[fold_name(node.canonical_name)] = node.molecule_id
        for alias in node.aliases:
            graph.name_index[fold_name(alias)] = node.molecule_id
        graph._interacts[node.molecule_id] = set()
        graph._mentions_by_mol[node.molecule_id] = set()
        graph._next_molecule_id = max(graph._next_molecule_id, node.molecule_id + 1)
    for a, b in sections.get("INTERACTIONS", []):
        graph._interacts[a].add(b)
        graph._interacts[b].add(a)
        graph._interaction_count += 1
    for rec in sections.get("PUBLICATIONS", []):
        node = PublicationNode(
            pub_id=rec["id"],
            title=rec["title"],
            abstract=rec["abstract"],
            keywords=list(rec["keywords"]),
            year=rec["year"],
        )
        graph.publications[node.pub_id] = node
        graph._mentions_by_pub[node.pub_id] = set()
        graph._authors_by_pub[node.pub_id] = []
    for rec in sections.get("AUTHORS", []):
        aid = rec["id"]
        graph.authors[aid] = AuthorNode(aid, rec["name"], rec["affiliation"], rec["n_total"])
        graph._author_index[fold_name(rec["name"])] = aid
        graph._pubs_by_author[aid] = set()
        graph._next_author_id = max(graph._next_author_id, aid + 1)
    for pub, mol in sections.get("MENTIONS", []):
        graph._mentions_by_pub[pub].add(mol)
        graph._mentions_by_mol[mol].add(pub)
    for author, pub in sections.get("AUTHORED", []):
        graph._pubs_by_author[author].add(pub)
        graph._authors_by_pub[pub].append(author)

    for aid, node in graph.authors.items():
        derived = len(graph._pubs_by_author[aid])
        if node.n_total != derived:
            raise ParseError(
                f"{path}: author {aid} n_total {node.n_total} != {derived} edges"
            )
    graph.revision = meta.get("revision", 0)
    return graph
