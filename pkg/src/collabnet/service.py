"""HTTP API over a loaded graph snapshot.

Endpoints
---------
* ``GET /api/search?molecule=&method=&page=&page_size=`` -- ranked authors,
  paged; page bodies are cached (TTL + LRU) keyed by molecule, method, page,
  page size and graph revision, so a stale revision can never be served.
* ``GET /api/molecules/{name}`` -- molecule detail for pivot navigation.
* ``POST /api/admin/precompute`` -- run and persist PageRank for molecules.
* ``GET /api/health`` -- status, revision and node counts.

Response bodies are byte-stable for identical (snapshot, request) pairs:
JSON is serialized with sorted keys and fixed separators, scores are
rounded to six significant digits, and the cache markers travel as the
``X-Cache`` (hit/miss) and ``X-Compute-Ms`` headers rather than in the body.
Every handler thread reads one immutable state reference, so swapping in a
new snapshot is atomic; in-flight requests finish on the old one.
"""

from __future__ import annotations

import json
import logging
import re
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, unquote, urlparse

from . import analysis, coauthor, snapshot
from .cache import TtlLruCache
from .coauthor import PagerankConfig, PrecomputeStore, Variant
from .errors import CollabnetError, UnknownNode
from .graph import MultilayerGraph
from .ranking import Method

log = logging.getLogger(__name__)

_MOLECULE_PATH = re.compile(r"^/api/molecules/(?P<name>[^/]+)$")


@dataclass
class ServiceConfig:
    cache_ttl_s: float = 3600.0
    cache_entries: int = 10_000
    cors_origins: tuple[str, ...] = ("*",)
    pagerank: PagerankConfig = field(default_factory=PagerankConfig)
    default_page_size: int = 20
    max_page_size: int = 100


class _State:
    """One immutable snapshot plus its derived caches."""

    def __init__(self, graph: MultilayerGraph, store: PrecomputeStore | None, config: ServiceConfig):
        self.graph = graph.freeze()
        self.store = store
        self.cache = TtlLruCache(config.cache_ttl_s, config.cache_entries)


class Service:
    """Holds state shared by all request handler threads."""

    def __init__(self, config: ServiceConfig | None = None):
        self.config = config or ServiceConfig()
        self._state: _State | None = None
        self._precompute_lock = threading.Lock()

    # -- state management ---------------------------------------------------

    def load_graph(self, graph: MultilayerGraph, store: PrecomputeStore | None = None) -> None:
        self._state = _State(graph, store, self.config)

    def load_snapshot_file(self, path, store_path=None) -> None:
        graph = snapshot.load_snapshot(path)
        store = PrecomputeStore(store_path) if store_path else None
        self.load_graph(graph, store)

    @property
    def state(self) -> "_State | None":
        return self._state

    # -- request handling (transport-independent) ---------------------------

    def handle(self, method: str, path: str, body: bytes) -> tuple[int, dict, bytes]:
        """Route one request; returns (status, extra_headers, body_bytes)."""
        url = urlparse(path)
        try:
            if method == "GET" and url.path == "/api/health":
                return self._health()
            if method == "GET" and url.path == "/api/search":
                return self._search(parse_qs(url.query))
            if method == "GET":
                match = _MOLECULE_PATH.match(url.path)
                if match:
                    return self._molecule(unquote(match.group("name")))
            if method == "POST" and url.path == "/api/admin/precompute":
                return self._precompute(body)
            return _error(404, f"no route for {method} {url.path}")
        except CollabnetError as exc:
            log.warning("%s %s failed: %s", method, path, exc)
            return _error(500, str(exc))

    def _require_state(self) -> "_State | tuple":
        state = self._state
        if state is None:
            return _error(503, "no snapshot loaded")
        return state

    def _health(self):
        state = self._state
        if state is None:
            return _error(503, "no snapshot loaded")
        payload = {
            "status": "ok",
            "revision": state.graph.revision,
            "counts": state.graph.counts(),
        }
        return 200, {}, _encode(payload)

    def _molecule(self, name: str):
        state = self._require_state()
        if isinstance(state, tuple):
            return state
        graph = state.graph
        try:
            mid = graph.resolve_molecule(name)
        except UnknownNode:
            return _error(404, f"unknown molecule {name!r}")
        node = graph.molecules[mid]
        related = sorted(
            graph.molecules[r].canonical_name for r in graph.related_molecules(mid)
        )
        payload = {
            "name": node.canonical_name,
            "aliases": sorted(node.aliases),
            "degree": len(related),
            "related": related,
            "publication_count": len(graph.publications_mentioning({mid})),
        }
        return 200, {}, _encode(payload)

    def _search(self, query: dict):
        state = self._require_state()
        if isinstance(state, tuple):
            return state
        graph = state.graph

        molecule = (query.get("molecule") or [""])[0].strip()
        if not molecule:
            return _error(400, "missing required parameter: molecule")
        method_raw = (query.get("method") or [Method.COUNT_NONNORM.value])[0]
        try:
            method = Method(method_raw)
        except ValueError:
            valid = ", ".join(m.value for m in Method)
            return _error(400, f"unknown method {method_raw!r}; valid: {valid}")
        try:
            page = int((query.get("page") or ["1"])[0])
            page_size = int((query.get("page_size") or [str(self.config.default_page_size)])[0])
        except ValueError:
            return _error(400, "page and page_size must be integers")
        if page < 1:
            return _error(400, "page must be >= 1")
        if not (1 <= page_size <= self.config.max_page_size):
            return _error(400, f"page_size must be in [1, {self.config.max_page_size}]")
        try:
            mid = graph.resolve_molecule(molecule)
        except UnknownNode:
            return _error(404, f"unknown molecule {molecule!r}")

        key = (mid, method.value, page, page_size, graph.revision)
        cached = state.cache.get(key)
        if cached is not None:
            return 200, {"X-Cache": "hit", "X-Compute-Ms": "0"}, cached

        t0 = time.perf_counter()
        ranked = analysis.rank_by_method(
            graph, mid, method, cfg=self.config.pagerank, store=state.store
        )
        total = len(ranked.entries)
        total_pages = (total + page_size - 1) // page_size
        entries = []
        for e in ranked.page(page, page_size):
            related_counts = []
            if e.contribution is not None:
                related_counts = [
                    [graph.molecules[mol].canonical_name, count]
                    for mol, count in sorted(
                        e.contribution.per_molecule.items(),
                        key=lambda mc: graph.molecules[mc[0]].canonical_name,
                    )
                ]
            author = graph.authors[e.author_id]
            entry = {
                "author": e.author_name,
                "score": _sig6(e.score),
                "related_molecules": related_counts,
            }
            if author.affiliation:
                entry["affiliation"] = author.affiliation
            entries.append(entry)
        payload = {
            "query": {
                "molecule": graph.molecules[mid].canonical_name,
                "method": method.value,
                "page": page,
                "page_size": page_size,
            },
            "total_results": total,
            "total_pages": total_pages,
            "entries": entries,
        }
        body = _encode(payload)
        compute_ms = int(round((time.perf_counter() - t0) * 1000))
        state.cache.put(key, body)
        return 200, {"X-Cache": "miss", "X-Compute-Ms": str(compute_ms)}, body

    def _precompute(self, body: bytes):
        state = self._require_state()
        if isinstance(state, tuple):
            return state
        graph = state.graph
        if state.store is None:
            return _error(400, "server started without a precompute store")
        try:
            payload = json.loads(body) if body.strip() else {}
        except json.JSONDecodeError as exc:
            return _error(400, f"invalid JSON body: {exc}")
        if not isinstance(payload, dict):
            return _error(400, "body must be a JSON object")

        if "molecules" in payload:
            try:
                molecules = [graph.resolve_molecule(str(m)) for m in payload["molecules"]]
            except UnknownNode as exc:
                return _error(400, str(exc))
        else:
            molecules = sorted(graph.molecules)
        try:
            variants = [Variant(v) for v in payload.get("variants", ["nonnorm", "norm"])]
        except ValueError as exc:
            return _error(400, f"unknown variant: {exc}")

        with self._precompute_lock:
            report = coauthor.precompute_into(
                graph, molecules, variants, self.config.pagerank, state.store
            )
        return 200, {}, _encode({"stored": report.stored, "skipped": report.skipped})


def _sig6(x: float) -> float:
    return float(f"{x:.6g}")


def _encode(payload) -> bytes:
    return (json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n").encode()


def _error(status: int, message: str) -> tuple[int, dict, bytes]:
    return status, {}, _encode({"error": message, "status": status})


class ApiHandler(BaseHTTPRequestHandler):
    """Thin HTTP shim over :meth:`Service.handle`."""

    server_version = "collabnet/0.1"
    protocol_version = "HTTP/1.1"

    @property
    def service(self) -> Service:
        return self.server.service  # type: ignore[attr-defined]

    def _origin_header(self) -> str | None:
        allowed = self.service.config.cors_origins
        origin = self.headers.get("Origin")
        if "*" in allowed:
            return "*"
        if origin and origin in allowed:
            return origin
        return None

    def _reply(self, status: int, headers: dict, body: bytes) -> None:
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        origin = self._origin_header()
        if origin:
            self.send_header("Access-Control-Allow-Origin", origin)
            self.send_header("Access-Control-Expose-Headers", "X-Cache, X-Compute-Ms")
        for name, value in headers.items():
            self.send_header(name, value)
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self) -> None:
        self._reply(*self.service.handle("GET", self.path, b""))

    def do_POST(self) -> None:
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length) if length else b""
        self._reply(*self.service.handle("POST", self.path, body))

    def do_OPTIONS(self) -> None:
        self.send_response(204)
        origin = self._origin_header()
        if origin:
            self.send_header("Access-Control-Allow-Origin", origin)
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Access-Control-Max-Age", "600")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def log_message(self, format: str, *args) -> None:  # route to logging, not stderr
        log.info("%s %s", self.address_string(), format % args)


class ApiServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], service: Service):
        super().__init__(address, ApiHandler)
        self.service = service


def make_server(host: str, port: int, service: Service) -> ApiServer:
    return ApiServer((host, port), service)
