"""Operator command line: ingest, query, precompute, serve, experiments, fetch.

Machine-readable output goes to stdout (TSV for tables, JSON for reports);
diagnostics go to stderr.  Exit codes: 0 success, 2 usage or input problem,
3 name not found, 4 remote service failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import analysis, coauthor, eutils, ingest, service, snapshot, synth
from .coauthor import PrecomputeStore
from .errors import (
    CollabnetError,
    HttpError,
    NetworkTimeout,
    RateLimited,
    UnknownNode,
)
from .graph import MultilayerGraph
from .ranking import Method
from .snapshot import SNAPSHOT_ENV

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_FOUND = 3
EXIT_REMOTE = 4


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _snapshot_path(args) -> str | None:
    return args.snapshot or os.environ.get(SNAPSHOT_ENV)


def _load_graph(args) -> MultilayerGraph:
    path = _snapshot_path(args)
    if not path:
        raise FileNotFoundError(f"no snapshot given (--snapshot or ${SNAPSHOT_ENV})")
    return snapshot.load_snapshot(path)


def _print_json(payload) -> None:
    print(json.dumps(payload, sort_keys=True))


def _score_str(score: float) -> str:
    return f"{score:.6g}"


# -- subcommand implementations ----------------------------------------------


def _cmd_ingest(args) -> int:
    graph = MultilayerGraph()
    ingest.load_molecule_catalog(args.catalog, graph)
    ingest.load_interactions(args.interactions, graph)
    report = ingest.ingest_corpus(args.corpus, graph, include_title=not args.no_title_match)
    snapshot.save_snapshot(graph, args.out)
    _print_json(report.as_dict())
    return EXIT_OK


def _cmd_query(args) -> int:
    if args.top is not None and args.top < 1:
        return _fail("--top must be at least 1", EXIT_USAGE)
    graph = _load_graph(args)
    try:
        mid = graph.resolve_molecule(args.molecule)
    except UnknownNode:
        return _fail(f"molecule {args.molecule!r} not in snapshot", EXIT_NOT_FOUND)
    store = PrecomputeStore(args.cache) if args.cache else None
    ranked = analysis.rank_by_method(graph, mid, Method(args.method), store=store)
    entries = ranked.entries[: args.top] if args.top else ranked.entries

    rows = []
    for i, entry in enumerate(entries, start=1):
        related = ""
        if entry.contribution is not None:
            related = ",".join(
                f"{graph.molecules[mol].canonical_name}({count})"
                for mol, count in sorted(
                    entry.contribution.per_molecule.items(),
                    key=lambda mc: graph.molecules[mc[0]].canonical_name,
                )
            )
        rows.append((str(i), entry.author_name, _score_str(entry.score), related))

    if args.pretty:
        widths = [max(len(row[c]) for row in rows + [("rank", "author", "score", "related")]) for c in range(4)]
        header = ("rank", "author", "score", "related")
        print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
        for row in rows:
            print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
    else:
        for row in rows:
            print("\t".join(row))
    return EXIT_OK


def _cmd_precompute(args) -> int:
    graph = _load_graph(args)
    if args.molecules:
        try:
            molecules = [graph.resolve_molecule(name) for name in args.molecules]
        except UnknownNode as exc:
            return _fail(str(exc), EXIT_NOT_FOUND)
    else:
        molecules = sorted(graph.molecules)
    store = PrecomputeStore(args.cache)
    report = coauthor.precompute_into(graph, molecules, store=store)
    _print_json({"stored": report.stored, "skipped": report.skipped})
    return EXIT_OK


def _parse_listen(listen: str) -> tuple[str, int]:
    host, sep, port = listen.rpartition(":")
    if not sep or not host or not port.isdigit() or not (0 <= int(port) <= 65535):
        raise ValueError(f"listen address must be HOST:PORT, got {listen!r}")
    return host, int(port)


def _cmd_serve(args) -> int:
    host, port = _parse_listen(args.listen)
    config = service.ServiceConfig(
        cache_ttl_s=args.cache_ttl,
        cache_entries=args.cache_entries,
        cors_origins=tuple(args.cors_origin) if args.cors_origin else ("*",),
    )
    svc = service.Service(config)
    svc.load_snapshot_file(_snapshot_path(args), store_path=args.cache)
    if args.precompute_on_start:
        if not args.cache:
            return _fail("--precompute-on-start requires --cache", EXIT_USAGE)
        state = svc.state
        report = coauthor.precompute_into(
            state.graph, sorted(state.graph.molecules), store=state.store
        )
        log.info("precomputed %d entries (%d already present)", report.stored, report.skipped)
    server = service.make_server(host, port, svc)
    print(f"listening on http://{host}:{port}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def _cmd_rank_compare(args) -> int:
    if args.top_t < 1:
        return _fail("--top-t must be at least 1", EXIT_USAGE)
    graph = _load_graph(args)
    try:
        mid = graph.resolve_molecule(args.molecule)
    except UnknownNode:
        return _fail(f"molecule {args.molecule!r} not in snapshot", EXIT_NOT_FOUND)
    name = graph.molecules[mid].canonical_name

    lists = {
        method: analysis.rank_by_method(graph, mid, method)
        for method in (Method.COUNT_NONNORM, Method.COUNT_NORM, Method.HYPERGEOMETRIC)
    }
    pairs = [
        (Method.COUNT_NONNORM, Method.COUNT_NORM),
        (Method.COUNT_NONNORM, Method.HYPERGEOMETRIC),
        (Method.COUNT_NORM, Method.HYPERGEOMETRIC),
    ]
    summary = {"molecule": name, "top_t": args.top_t, "pearson": {}, "omitted": {}}
    for a, b in pairs:
        report = analysis.correlation_report(lists[a], lists[b], args.top_t)
        analysis.emit_cross_rank_csv(report, name, args.out)
        key = f"{a.value}_vs_{b.value}"
        summary["pearson"][key] = report.pearson_r
        summary["omitted"][key] = report.omitted
    for method in (Method.COUNT_NONNORM, Method.COUNT_NORM):
        analysis.emit_curve_csv(lists[method], name, args.top_t, args.out)
    analysis.emit_summary_json(summary, args.out)
    _print_json(summary)
    return EXIT_OK


def _cmd_validate(args) -> int:
    graph = _load_graph(args)
    result = analysis.validation_experiment(
        graph,
        n_molecules=args.molecules,
        n_authors=args.authors,
        min_pubs=args.min_pubs,
        seed=args.seed,
    )
    summary = {
        "table": result.table.as_dict(),
        "odds_ratio": result.odds_ratio,
        "p_value": result.p_value,
        "n_molecules_used": result.n_molecules_used,
        "n_authors_used": result.n_authors_used,
        "scaled_down": result.scaled_down,
        "seed": args.seed,
    }
    if args.out:
        analysis.emit_summary_json(summary, args.out)
    _print_json(summary)
    return EXIT_OK


def _cmd_fetch(args) -> int:
    if args.max < 0:
        return _fail("--max must be non-negative", EXIT_USAGE)
    config = eutils.RemoteConfig(
        base_url=args.base_url,
        api_key=args.api_key or os.environ.get(eutils.API_KEY_ENV),
    )
    records = eutils.fetch_remote(args.query, args.max, config)
    with open(args.out, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(
                json.dumps(
                    {
                        "pub_id": rec.pub_id,
                        "title": rec.title,
                        "abstract": rec.abstract,
                        "keywords": rec.keywords,
                        "year": rec.year,
                        "authors": [
                            {"name": name, "affiliation": affiliation}
                            for name, affiliation in rec.authors
                        ],
                    },
                    sort_keys=True,
                )
                + "\n"
            )
    _print_json({"records_fetched": len(records), "out": args.out})
    return EXIT_OK


def _cmd_synth(args) -> int:
    cfg = synth.SynthConfig(seed=args.seed)
    paths = synth.write_corpus(args.out, cfg)
    _print_json(paths)
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collabnet",
        description="Multilayer collaboration-network engine: build snapshots, rank authors, serve the API.",
    )
    parser.add_argument("--verbose", action="store_true", help="log INFO diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="build a snapshot from catalog, interactions and corpus files")
    p.add_argument("--catalog", required=True)
    p.add_argument("--interactions", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-title-match", action="store_true", help="match mentions in abstract/keywords only")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("query", help="rank authors for one molecule")
    p.add_argument("--snapshot")
    p.add_argument("--molecule", required=True)
    p.add_argument("--method", default=Method.COUNT_NONNORM.value, choices=[m.value for m in Method])
    p.add_argument("--top", type=int)
    p.add_argument("--cache", help="precomputed PageRank store to reuse")
    p.add_argument("--pretty", action="store_true", help="aligned human-readable table")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("precompute", help="persist PageRank scores for later queries")
    p.add_argument("--snapshot")
    p.add_argument("--cache", required=True)
    p.add_argument("--molecules", nargs="*")
    p.set_defaults(func=_cmd_precompute)

    p = sub.add_parser("serve", help="serve the HTTP API over a snapshot")
    p.add_argument("--snapshot")
    p.add_argument("--cache", help="precompute store path")
    p.add_argument("--listen", default="127.0.0.1:8080")
    p.add_argument("--cache-ttl", type=float, default=3600.0)
    p.add_argument("--cache-entries", type=int, default=10_000)
    p.add_argument("--cors-origin", action="append", help="allowed origin (repeatable; default *)")
    p.add_argument("--precompute-on-start", action="store_true")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("experiment", help="method-comparison and validation studies")
    exp = p.add_subparsers(dest="experiment", required=True)

    e = exp.add_parser("rank-compare", help="cross-rank scatter + correlations for one molecule")
    e.add_argument("--snapshot")
    e.add_argument("--molecule", required=True)
    e.add_argument("--top-t", type=int, default=120)
    e.add_argument("--out", required=True)
    e.set_defaults(func=_cmd_rank_compare)

    e = exp.add_parser("validate", help="coauthor-proximity contingency experiment")
    e.add_argument("--snapshot")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--molecules", type=int, default=500)
    e.add_argument("--authors", type=int, default=250)
    e.add_argument("--min-pubs", type=int, default=5)
    e.add_argument("--out")
    e.set_defaults(func=_cmd_validate)

    p = sub.add_parser("fetch", help="download records from an E-utilities-compatible API")
    p.add_argument("--query", required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--base-url", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--api-key")
    p.set_defaults(func=_cmd_fetch)

    p = sub.add_parser("synth", help="generate the deterministic synthetic corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=_cmd_synth)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (HttpError, NetworkTimeout, RateLimited) as exc:
        return _fail(str(exc), EXIT_REMOTE)
    except UnknownNode as exc:
        return _fail(str(exc), EXIT_NOT_FOUND)
    except FileNotFoundError as exc:
        return _fail(str(exc), EXIT_USAGE)
    except (CollabnetError, ValueError, OSError) as exc:
        return _fail(str(exc), EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
