"""Build the multilayer graph from catalog, interaction and corpus files.

File formats (hand-editable fixtures were the design goal):

* molecule catalog -- ``canonical_name<TAB>comma-separated-aliases`` per line;
* interactions    -- ``nameA<TAB>nameB`` per line;
* corpus          -- one JSON object per line: ``pub_id``, ``title``,
  ``abstract``, ``keywords``, ``year``, ``authors`` = [{name, affiliation}].

Blank lines and ``#`` comment lines are skipped in the TSV formats.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field

from .errors import ParseError, SelfLoop, UnknownMolecule
from .graph import MultilayerGraph, PublicationNode, YEAR_MAX, YEAR_MIN, fold_name

log = logging.getLogger(__name__)

# A token is a maximal run of letters, digits and hyphens ([^\W_] is the
# unicode-aware letter-or-digit class).
_TOKEN = re.compile(r"(?:[^\W_]|-)+")


@dataclass
class PublicationRecord:
    """One bibliographic record as parsed from a corpus line or remote XML."""

    pub_id: str
    title: str = ""
    abstract: str = ""
    keywords: list[str] = field(default_factory=list)
    year: int | None = None
    authors: list[tuple[str, str | None]] = field(default_factory=list)


@dataclass
class IngestReport:
    records_read: int = 0
    records_skipped: int = 0
    mentions_created: int = 0
    molecules_matched: int = 0
    authors_created: int = 0
    skip_reasons: dict[str, int] = field(default_factory=dict)

    def skip(self, reason: str) -> None:
        self.records_skipped += 1
        self.skip_reasons[reason] = self.skip_reasons.get(reason, 0) + 1

    def as_dict(self) -> dict:
        return {
            "records_read": self.records_read,
            "records_skipped": self.records_skipped,
            "mentions_created": self.mentions_created,
            "molecules_matched": self.molecules_matched,
            "authors_created": self.authors_created,
            "skip_reasons": dict(sorted(self.skip_reasons.items())),
        }


def tokenize(text: str):
    """Yield matchable tokens from free text.

    Splits on anything that is not a letter, digit or hyphen.  Every
    hyphenated run is yielded whole (so a catalog name like ``TREM-2``
    matches) and additionally split at hyphens (so catalog ``DAP12`` matches
    inside ``Dap12-mediated``).
    """
    for match in _TOKEN.finditer(text):
        token = match.group()
        yield token
        if "-" in token:
            for part in token.split("-"):
                if part:
                    yield part


def match_mentions(
    rec: PublicationRecord, graph: MultilayerGraph, include_title: bool = True
) -> set[int]:
    """Molecules whose name or alias appears as a whole token in the record.

    Scans the abstract, every keyword and (configurably) the title,
    case-insensitively against the graph's molecule name index.  Pure
    function: no edges are created.
    """
    index = graph.name_index
    found: set[int] = set()
    parts = [rec.abstract, *rec.keywords]
    if include_title:
        parts.append(rec.title)
    for text in parts:
        if not text:
            continue
        for token in tokenize(text):
            mid = index.get(token.casefold())
            if mid is not None:
                found.add(mid)
    return found


def _data_lines(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                yield lineno, line
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def load_molecule_catalog(path, graph: MultilayerGraph) -> int:
    """Upsert every catalog line; returns the number of distinct molecules."""
    seen: set[int] = set()
    for lineno, line in _data_lines(path):
        fields = line.split("\t")
        name = fields[0].strip()
        if not name:
            raise ParseError("empty molecule name", line=lineno)
        aliases = set()
        if len(fields) > 1:
            aliases = {a.strip() for a in fields[1].split(",") if a.strip()}
        seen.add(graph.upsert_molecule(name, aliases))
    return len(seen)


def load_interactions(path, graph: MultilayerGraph) -> int:
    """Add undirected interaction edges; returns the number created.

    Unknown molecule names are fatal (the catalog must be loaded first).
    Self-loop lines are skipped and logged, not fatal.
    """
    created = 0
    for lineno, line in _data_lines(path):
        fields = [f.strip() for f in line.split("\t")]
        if len(fields) != 2 or not fields[0] or not fields[1]:
            raise ParseError(f"expected 'nameA<TAB>nameB', got {line!r}", line=lineno)
        ids = []
        for name in fields:
            mid = graph.name_index.get(fold_name(name))
            if mid is None:
                raise UnknownMolecule(name, line=lineno)
            ids.append(mid)
        try:
            if graph.add_interaction(ids[0], ids[1]):
                created += 1
        except SelfLoop:
            log.warning("%s line %d: self-interaction %r skipped", path, lineno, fields[0])
    return created


def parse_corpus_line(line: str, lineno: int | None = None) -> PublicationRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}", line=lineno) from exc
    if not isinstance(obj, dict) or not str(obj.get("pub_id", "")).strip():
        raise ParseError("record must be an object with a pub_id", line=lineno)
    year = obj.get("year")
    if not isinstance(year, int) or not (YEAR_MIN <= year <= YEAR_MAX):
        year = None
    authors = []
    for a in obj.get("authors") or []:
        if isinstance(a, dict):
            name = str(a.get("name", "")).strip()
            affiliation = a.get("affiliation") or None
        else:
            name, affiliation = str(a).strip(), None
        if name:
            authors.append((name, affiliation))
    return PublicationRecord(
        pub_id=str(obj["pub_id"]),
        title=str(obj.get("title", "") or ""),
        abstract=str(obj.get("abstract", "") or ""),
        keywords=[str(k) for k in obj.get("keywords") or []],
        year=year,
        authors=authors,
    )


def ingest_record(
    rec: PublicationRecord,
    graph: MultilayerGraph,
    report: IngestReport,
    matched_molecules: set[int],
    include_title: bool = True,
) -> None:
    """Store one record: publication node, AUTHORED edges, mention edges.

    Records matching zero molecules are stored anyway; they feed authors'
    totals and the ranking population.
    """
    if not rec.authors:
        report.skip("no_authors")
        return
    authors_before = len(graph.authors)
    graph.upsert_publication(
        PublicationNode(rec.pub_id, rec.title, rec.abstract, rec.keywords, rec.year),
        rec.authors,
    )
    report.authors_created += len(graph.authors) - authors_before
    for mid in sorted(match_mentions(rec, graph, include_title=include_title)):
        matched_molecules.add(mid)
        if graph.add_mention(rec.pub_id, mid):
            report.mentions_created += 1


def ingest_corpus(path, graph: MultilayerGraph, include_title: bool = True) -> IngestReport:
    """Ingest a JSONL corpus; per-record failures are skipped and counted."""
    report = IngestReport()
    matched: set[int] = set()
    for lineno, line in _data_lines(path):
        report.records_read += 1
        try:
            rec = parse_corpus_line(line, lineno)
        except ParseError:
            report.skip("parse_error")
            continue
        try:
            ingest_record(rec, graph, report, matched, include_title=include_title)
        except Exception as exc:  # record-level problem: count, keep going
            log.warning("%s line %d: record %r skipped: %s", path, lineno, rec.pub_id, exc)
            report.skip(type(exc).__name__.lower())
    report.molecules_matched = len(matched)
    return report
