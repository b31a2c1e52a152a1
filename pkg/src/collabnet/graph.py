"""Embedded multilayer property graph.

Three node layers (molecules, publications, authors) with three edge kinds:

* ``interacts`` -- undirected molecule-molecule edges,
* ``mentions``  -- publication->molecule edges,
* ``authored``  -- author->publication edges.

Edge kinds are tagged strings so future layers (diseases, grants, ...) can add
new tags without a schema change.  The graph is a single-writer structure:
build it, then call :meth:`MultilayerGraph.freeze` and share it with any
number of reader threads.  Every mutation bumps ``revision``; derived caches
key on the revision so stale results can never be served.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    AliasConflict,
    DuplicateConflict,
    FrozenGraph,
    SelfLoop,
    UnknownNode,
)

EDGE_INTERACTS = "interacts"
EDGE_MENTIONS = "mentions"
EDGE_AUTHORED = "authored"

YEAR_MIN = 1800
YEAR_MAX = 2100


def fold_name(name: str) -> str:
    """Whitespace-normalized, case-folded key used by all name indexes."""
    return " ".join(name.split()).casefold()


@dataclass
class MoleculeNode:
    molecule_id: int
    canonical_name: str
    aliases: set[str] = field(default_factory=set)


@dataclass
class PublicationNode:
    pub_id: str
    title: str = ""
    abstract: str = ""
    keywords: list[str] = field(default_factory=list)
    year: int | None = None


@dataclass
class AuthorNode:
    author_id: int
    canonical_name: str
    affiliation: str | None = None
    n_total: int = 0


class MultilayerGraph:
    """Molecule, publication and author layers plus cross-layer edges.

    Node ids for molecules and authors are small integers assigned in
    insertion order; publications keep their source ids.  All mutating
    operations are idempotent: repeating a call with identical arguments
    leaves the graph (and ``revision``) unchanged.
    """

    def __init__(self) -> None:
        self.molecules: dict[int, MoleculeNode] = {}
        self.publications: dict[str, PublicationNode] = {}
        self.authors: dict[int, AuthorNode] = {}
        self.name_index: dict[str, int] = {}
        self.revision = 0
        self._frozen = False
        self._next_molecule_id = 1
        self._next_author_id = 1
        self._interacts: dict[int, set[int]] = {}
        self._interaction_count = 0
        self._mentions_by_pub: dict[str, set[int]] = {}
        self._mentions_by_mol: dict[int, set[str]] = {}
        self._pubs_by_author: dict[int, set[str]] = {}
        self._authors_by_pub: dict[str, list[int]] = {}
        self._author_index: dict[str, int] = {}

    # -- lifecycle ---------------------------------------------------------

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> "MultilayerGraph":
        """Mark the graph immutable; reader threads may share it freely."""
        self._frozen = True
        return self

    def _writable(self) -> None:
        if self._frozen:
            raise FrozenGraph("graph snapshot is frozen; mutation is forbidden")

    def _bump(self) -> None:
        self.revision += 1

    # -- molecule layer ----------------------------------------------------

    def upsert_molecule(self, name: str, aliases: set[str] | None = None) -> int:
        """Create or update a molecule; returns its id.

        The molecule is keyed by the case-folded canonical name.  Aliases are
        merged (set union) on repeat.  A name or alias that already belongs to
        a *different* molecule raises :class:`AliasConflict`.
        """
        self._writable()
        if not name or not name.strip():
            raise ValueError("molecule name must be non-empty")
        name = " ".join(name.split())
        key = fold_name(name)
        existing = self.name_index.get(key)
        if existing is not None:
            node = self.molecules[existing]
            if fold_name(node.canonical_name) != key:
                raise AliasConflict(
                    f"name {name!r} is already an alias of {node.canonical_name!r}"
                )
            mid = existing
        else:
            mid = self._next_molecule_id
            self._next_molecule_id += 1
            node = MoleculeNode(molecule_id=mid, canonical_name=name)
            self.molecules[mid] = node
            self.name_index[key] = mid
            self._interacts[mid] = set()
            self._mentions_by_mol[mid] = set()
            self._bump()
        changed = False
        for alias in aliases or ():
            alias = " ".join(alias.split())
            if not alias:
                continue
            akey = fold_name(alias)
            if akey == key:
                continue  # alias identical to canonical adds nothing
            owner = self.name_index.get(akey)
            if owner is not None and owner != mid:
                raise AliasConflict(
                    f"alias {alias!r} of {name!r} already resolves to "
                    f"{self.molecules[owner].canonical_name!r}"
                )
            if alias not in node.aliases:
                node.aliases.add(alias)
                self.name_index[akey] = mid
                changed = True
        if changed:
            self._bump()
        return mid

    def resolve_molecule(self, name: str) -> int:
        """Resolve a canonical name or alias (case-insensitive) to an id."""
        mid = self.name_index.get(fold_name(name))
        if mid is None:
            raise UnknownNode(f"unknown molecule name {name!r}")
        return mid

    def _require_molecule(self, mid: int) -> MoleculeNode:
        node = self.molecules.get(mid)
        if node is None:
            raise UnknownNode(f"unknown molecule id {mid}")
        return node

    def add_interaction(self, a: int, b: int) -> bool:
        """Add the undirected interaction edge {a, b}; True if new."""
        self._writable()
        self._require_molecule(a)
        self._require_molecule(b)
        if a == b:
            raise SelfLoop(f"molecule {a} cannot interact with itself")
        if b in self._interacts[a]:
            return False
        self._interacts[a].add(b)
        self._interacts[b].add(a)
        self._interaction_count += 1
        self._bump()
        return True

    def related_molecules(self, m: int, include_self: bool = False) -> set[int]:
        """One-hop interaction neighbors of ``m`` (plus ``m`` on request)."""
        self._require_molecule(m)
        related = set(self._interacts[m])
        if include_self:
            related.add(m)
        return related

    def interaction_degree(self, m: int) -> int:
        self._require_molecule(m)
        return len(self._interacts[m])

    # -- publication and author layers ---------------------------------------

    def upsert_publication(self, rec: PublicationNode, authors) -> str:
        """Store a publication and its AUTHORED edges; returns the pub id.

        ``authors`` is a non-empty sequence of names or (name, affiliation)
        pairs.  Authors are resolved by exact whitespace-normalized,
        case-folded name; new identities are created on demand.  Re-inserting
        the same pub id with the same title is a no-op; a differing title
        raises :class:`DuplicateConflict` (early corpus-corruption signal).
        """
        self._writable()
        if not rec.pub_id:
            raise ValueError("pub_id must be non-empty")
        if not authors:
            raise ValueError("publication needs at least one author")
        if rec.year is not None and not (YEAR_MIN <= rec.year <= YEAR_MAX):
            raise ValueError(f"year {rec.year} outside [{YEAR_MIN}, {YEAR_MAX}]")
        existing = self.publications.get(rec.pub_id)
        if existing is not None:
            if existing.title != rec.title:
                raise DuplicateConflict(
                    f"pub {rec.pub_id!r} already stored with a different title"
                )
            return rec.pub_id
        self.publications[rec.pub_id] = PublicationNode(
            pub_id=rec.pub_id,
            title=rec.title,
            abstract=rec.abstract,
            keywords=list(rec.keywords),
            year=rec.year,
        )
        self._mentions_by_pub[rec.pub_id] = set()
        author_ids: list[int] = []
        for entry in authors:
            name, affiliation = entry if isinstance(entry, tuple) else (entry, None)
            aid = self._upsert_author(name, affiliation)
            if aid not in author_ids:
                author_ids.append(aid)
        self._authors_by_pub[rec.pub_id] = author_ids
        for aid in author_ids:
            self._pubs_by_author[aid].add(rec.pub_id)
            self.authors[aid].n_total = len(self._pubs_by_author[aid])
        self._bump()
        return rec.pub_id

    def _upsert_author(self, name: str, affiliation: str | None) -> int:
        if not name or not name.strip():
            raise ValueError("author name must be non-empty")
        display = " ".join(name.split())
        key = fold_name(display)
        aid = self._author_index.get(key)
        if aid is None:
            aid = self._next_author_id
            self._next_author_id += 1
            self.authors[aid] = AuthorNode(author_id=aid, canonical_name=display)
            self._author_index[key] = aid
            self._pubs_by_author[aid] = set()
        node = self.authors[aid]
        if node.affiliation is None and affiliation:
            node.affiliation = affiliation
        return aid

    def add_mention(self, p: str, m: int) -> bool:
        """Add a publication->molecule mention edge; True if new."""
        self._writable()
        if p not in self.publications:
            raise UnknownNode(f"unknown publication {p!r}")
        self._require_molecule(m)
        if m in self._mentions_by_pub[p]:
            return False
        self._mentions_by_pub[p].add(m)
        self._mentions_by_mol[m].add(p)
        self._bump()
        return True

    def publications_mentioning(self, ms) -> set[str]:
        """Union of publications mentioning any molecule in ``ms``."""
        pubs: set[str] = set()
        for m in ms:
            self._require_molecule(m)
            pubs |= self._mentions_by_mol[m]
        return pubs

    def molecules_mentioned_by(self, p: str) -> set[int]:
        if p not in self.publications:
            raise UnknownNode(f"unknown publication {p!r}")
        return set(self._mentions_by_pub[p])

    def author_publications(self, a: int) -> set[str]:
        if a not in self.authors:
            raise UnknownNode(f"unknown author id {a}")
        return set(self._pubs_by_author[a])

    def authors_of(self, p: str) -> list[int]:
        """Authors of one publication, in source order, deduplicated."""
        if p not in self.publications:
            raise UnknownNode(f"unknown publication {p!r}")
        return list(self._authors_by_pub[p])

    def resolve_author(self, name: str) -> int:
        aid = self._author_index.get(fold_name(name))
        if aid is None:
            raise UnknownNode(f"unknown author name {name!r}")
        return aid

    # -- introspection -------------------------------------------------------

    def counts(self) -> dict[str, int]:
        return {
            "molecules": len(self.molecules),
            "publications": len(self.publications),
            "authors": len(self.authors),
            "interactions": self._interaction_count,
            "mentions": sum(len(s) for s in self._mentions_by_pub.values()),
            "authored": sum(len(s) for s in self._pubs_by_author.values()),
        }

    def interaction_pairs(self) -> list[tuple[int, int]]:
        """All interaction edges as sorted (low, high) pairs."""
        return sorted(
            (a, b) for a, nbrs in self._interacts.items() for b in nbrs if a < b
        )

    def mention_pairs(self) -> list[tuple[str, int]]:
        return sorted(
            (p, m) for p, mols in self._mentions_by_pub.items() for m in sorted(mols)
        )

    def authored_pairs(self) -> list[tuple[int, str]]:
        return sorted(
            (a, p) for a, pubs in self._pubs_by_author.items() for p in sorted(pubs)
        )
