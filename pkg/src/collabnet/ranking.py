"""Author rankings for a query molecule based on publication counts.

Three of the five ranking methods live here:

* ``hypergeometric`` -- surprise of the author's hit count under sampling
  without replacement, ascending p-value;
* ``count_nonnorm``  -- distinct related molecules, then raw publication
  count ``n_pc``;
* ``count_norm``     -- distinct related molecules, then the normalized
  count ``r_pc = n_pc / n_total`` (compared as an exact rational).

The PageRank pair is in :mod:`collabnet.coauthor`; both use the shared
``Method`` / ``RankedList`` containers defined here.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from . import stats
from .errors import InvalidParams, ZeroTotal
from .graph import MultilayerGraph


class Method(str, enum.Enum):
    HYPERGEOMETRIC = "hypergeometric"
    COUNT_NONNORM = "count_nonnorm"
    COUNT_NORM = "count_norm"
    PAGERANK_NONNORM = "pagerank_nonnorm"
    PAGERANK_NORM = "pagerank_norm"

    def __str__(self) -> str:  # argparse/help friendliness
        return self.value


COUNT_METHODS = (Method.HYPERGEOMETRIC, Method.COUNT_NONNORM, Method.COUNT_NORM)
PAGERANK_METHODS = (Method.PAGERANK_NONNORM, Method.PAGERANK_NORM)


def r_pc(n_pc: int, n_total: int) -> Fraction:
    """Normalized publication count n_pc / n_total as an exact rational."""
    if n_total == 0:
        raise ZeroTotal("author has no publications")
    if n_pc < 0 or n_total < 0:
        raise InvalidParams("counts must be non-negative")
    return Fraction(n_pc, n_total)


@dataclass(frozen=True)
class AuthorContribution:
    """One author's publication record on the query's related molecules."""

    author_id: int
    author_name: str
    per_molecule: dict[int, int]  # related molecule -> publications by this author
    n_pc: int                     # sum of per_molecule (multi-mention pubs count per molecule)
    k_distinct: int               # distinct publications hitting >= 1 related molecule
    n_total: int                  # all publications by this author

    @property
    def molecule_count(self) -> int:
        return len(self.per_molecule)

    @property
    def r_pc(self) -> Fraction:
        return r_pc(self.n_pc, self.n_total)


@dataclass(frozen=True)
class HypergeomQuery:
    """Parameters of one author's hypergeometric test.

    population: all publications in the graph; successes: distinct
    publications mentioning any related molecule; sample: the author's
    publication total; observed: the author's distinct hits.
    """

    population: int
    successes: int
    sample: int
    observed: int

    def validate(self) -> "HypergeomQuery":
        if not (0 <= self.successes <= self.population):
            raise InvalidParams(f"successes outside [0, population]: {self}")
        if not (0 <= self.observed <= self.sample <= self.population):
            raise InvalidParams(f"need 0 <= observed <= sample <= population: {self}")
        if self.observed > self.successes:
            raise InvalidParams(f"observed exceeds successes: {self}")
        return self


def hypergeom_sf(q: HypergeomQuery) -> float:
    """P(X >= q.observed) for the author's sampling model; in [0, 1]."""
    q.validate()
    return stats.hypergeom_tail(q.population, q.successes, q.sample, q.observed)


@dataclass(frozen=True)
class RankedEntry:
    author_id: int
    author_name: str
    score: float  # p-value, n_pc, r_pc or pagerank score depending on method
    contribution: AuthorContribution | None = None


@dataclass(frozen=True)
class RankedList:
    method: Method
    query_molecule: int
    entries: tuple[RankedEntry, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def author_ids(self) -> list[int]:
        return [e.author_id for e in self.entries]

    def page(self, page: int, page_size: int) -> tuple[RankedEntry, ...]:
        start = (page - 1) * page_size
        return self.entries[start : start + page_size]


def contributions(graph: MultilayerGraph, m: int) -> list[AuthorContribution]:
    """Per-author counts over the related molecules of ``m``.

    One entry per author having at least one publication that mentions at
    least one related molecule.  A publication mentioning two related
    molecules adds to both per-molecule counts (so ``n_pc`` may exceed the
    distinct count ``k_distinct``).  Returned sorted by author id.
    """
    related = graph.related_molecules(m)
    per_molecule: dict[int, dict[int, int]] = {}
    distinct: dict[int, set[str]] = {}
    for pub_id in graph.publications_mentioning(related):
        hit_molecules = graph.molecules_mentioned_by(pub_id) & related
        for author_id in graph.authors_of(pub_id):
            distinct.setdefault(author_id, set()).add(pub_id)
            counts = per_molecule.setdefault(author_id, {})
            for mol in hit_molecules:
                counts[mol] = counts.get(mol, 0) + 1

    out = []
    for author_id in sorted(per_molecule):
        counts = per_molecule[author_id]
        author = graph.authors[author_id]
        contrib = AuthorContribution(
            author_id=author_id,
            author_name=author.canonical_name,
            per_molecule=dict(sorted(counts.items())),
            n_pc=sum(counts.values()),
            k_distinct=len(distinct[author_id]),
            n_total=author.n_total,
        )
        assert contrib.k_distinct <= contrib.n_pc and contrib.k_distinct <= contrib.n_total
        out.append(contrib)
    return out


def rank_count(
    contribs: list[AuthorContribution], normalized: bool, query_molecule: int = 0
) -> RankedList:
    """Sort contributions by (molecule count, then n_pc or exact r_pc, then name)."""
    if normalized:
        def key(c: AuthorContribution):
            return (-c.molecule_count, -c.r_pc, c.author_name)
    else:
        def key(c: AuthorContribution):
            return (-c.molecule_count, -c.n_pc, c.author_name)

    method = Method.COUNT_NORM if normalized else Method.COUNT_NONNORM
    entries = tuple(
        RankedEntry(
            author_id=c.author_id,
            author_name=c.author_name,
            score=float(c.r_pc) if normalized else float(c.n_pc),
            contribution=c,
        )
        for c in sorted(contribs, key=key)
    )
    return RankedList(method=method, query_molecule=query_molecule, entries=entries)


def rank_hypergeometric(graph: MultilayerGraph, m: int) -> RankedList:
    """Rank contributing authors by ascending hypergeometric tail probability.

    Ties break by raw publication count (descending), then name.
    """
    related = graph.related_molecules(m)
    population = len(graph.publications)
    successes = len(graph.publications_mentioning(related))
    scored = []
    for c in contributions(graph, m):
        q = HypergeomQuery(
            population=population,
            successes=successes,
            sample=c.n_total,
            observed=c.k_distinct,
        )
        scored.append((hypergeom_sf(q), c))
    scored.sort(key=lambda pc: (pc[0], -pc[1].n_pc, pc[1].author_name))
    entries = tuple(
        RankedEntry(author_id=c.author_id, author_name=c.author_name, score=p, contribution=c)
        for p, c in scored
    )
    return RankedList(method=Method.HYPERGEOMETRIC, query_molecule=m, entries=entries)


def rank_by_count(graph: MultilayerGraph, m: int, normalized: bool) -> RankedList:
    """Convenience wrapper: contributions + rank_count for a live graph."""
    return rank_count(contributions(graph, m), normalized, query_molecule=m)
