"""HTTP API: routing, paging, response caching, CORS, concurrency."""

import json
import threading
import urllib.error
import urllib.parse
import urllib.request
from concurrent.futures import ThreadPoolExecutor

import pytest

from collabnet.cache import TtlLruCache
from collabnet.coauthor import PrecomputeStore
from collabnet.graph import MultilayerGraph
from collabnet.service import Service, ServiceConfig, make_server

from conftest import build_f1


class FakeClock:
    def __init__(self):
        self.now = 0.0

    def __call__(self):
        return self.now


class TestTtlLruCache:
    def test_round_trip_and_counters(self):
        cache = TtlLruCache(ttl_s=10, max_entries=4)
        assert cache.get("k") is None
        cache.put("k", b"v")
        assert cache.get("k") == b"v"
        assert (cache.hits, cache.misses) == (1, 1)

    def test_expiry(self):
        clock = FakeClock()
        cache = TtlLruCache(ttl_s=5, max_entries=4, clock=clock)
        cache.put("k", b"v")
        clock.now = 4.999
        assert cache.get("k") == b"v"
        clock.now = 5.0
        assert cache.get("k") is None
        assert len(cache) == 0

    def test_lru_eviction_order(self):
        cache = TtlLruCache(ttl_s=100, max_entries=2)
        cache.put("a", 1)
        cache.put("b", 2)
        cache.get("a")  # refresh a
        cache.put("c", 3)  # evicts b
        assert cache.get("a") == 1
        assert cache.get("b") is None
        assert cache.get("c") == 3

    def test_clear(self):
        cache = TtlLruCache()
        cache.put("a", 1)
        cache.clear()
        assert len(cache) == 0

    def test_validation(self):
        with pytest.raises(ValueError):
            TtlLruCache(ttl_s=0)
        with pytest.raises(ValueError):
            TtlLruCache(max_entries=0)


def call(service, method, path, body=b""):
    status, headers, payload = service.handle(method, path, body)
    return status, headers, json.loads(payload.decode())


@pytest.fixture
def service(f1, tmp_path):
    svc = Service()
    svc.load_graph(f1, PrecomputeStore(tmp_path / "pagerank.cache"))
    return svc


class TestHealthAndRouting:
    def test_no_snapshot_yet(self):
        svc = Service()
        status, _, body = call(svc, "GET", "/api/health")
        assert status == 503
        assert "error" in body
        assert call(svc, "GET", "/api/search?molecule=Q")[0] == 503

    def test_health_counts(self, service, f1):
        status, _, body = call(service, "GET", "/api/health")
        assert status == 200
        assert body["status"] == "ok"
        assert body["revision"] == f1.revision
        assert body["counts"] == f1.counts()

    def test_unknown_route(self, service):
        assert call(service, "GET", "/api/nope")[0] == 404
        assert call(service, "POST", "/api/search?molecule=Q")[0] == 404

    def test_snapshot_file_loading(self, f1_snapshot):
        svc = Service()
        svc.load_snapshot_file(f1_snapshot)
        status, _, body = call(svc, "GET", "/api/health")
        assert status == 200
        assert body["counts"] == build_f1().counts()

    def test_snapshot_swap_is_visible(self, service):
        replacement = MultilayerGraph()
        replacement.upsert_molecule("ONLY")
        service.load_graph(replacement)
        _, _, body = call(service, "GET", "/api/health")
        assert body["counts"]["molecules"] == 1


class TestSearch:
    def test_f1_body(self, service):
        status, headers, body = call(
            service, "GET", "/api/search?molecule=Q&method=count_nonnorm"
        )
        assert status == 200
        assert headers["X-Cache"] == "miss"
        assert body["query"] == {
            "molecule": "Q",
            "method": "count_nonnorm",
            "page": 1,
            "page_size": 20,
        }
        assert body["total_results"] == 2
        assert body["total_pages"] == 1
        first, second = body["entries"]
        assert first == {
            "author": "A1",
            "score": 3.0,
            "related_molecules": [["M1", 2], ["M2", 1]],
            "affiliation": "Lab One",
        }
        assert second["author"] == "A2"
        assert "affiliation" not in second  # never collected for A2

    def test_method_defaults_to_raw_count(self, service):
        _, _, defaulted = call(service, "GET", "/api/search?molecule=Q")
        _, _, explicit = call(
            service, "GET", "/api/search?molecule=Q&method=count_nonnorm"
        )
        assert defaulted == explicit

    def test_all_methods_serve(self, service):
        for method in (
            "hypergeometric",
            "count_nonnorm",
            "count_norm",
            "pagerank_nonnorm",
            "pagerank_norm",
        ):
            status, _, body = call(
                service, "GET", f"/api/search?molecule=Q&method={method}"
            )
            assert status == 200
            assert body["total_results"] == 2
            assert body["query"]["method"] == method

    def test_hypergeometric_order_and_rounding(self, service):
        _, _, body = call(
            service, "GET", "/api/search?molecule=Q&method=hypergeometric"
        )
        assert [e["author"] for e in body["entries"]] == ["A2", "A1"]
        assert [e["score"] for e in body["entries"]] == [0.5, 1.0]

    def test_validation_errors(self, service):
        cases = [
            "/api/search",
            "/api/search?molecule=",
            "/api/search?molecule=Q&method=sideways",
            "/api/search?molecule=Q&page=0",
            "/api/search?molecule=Q&page=x",
            "/api/search?molecule=Q&page_size=0",
            "/api/search?molecule=Q&page_size=101",
        ]
        for path in cases:
            assert call(service, "GET", path)[0] == 400, path

    def test_unknown_molecule(self, service):
        status, _, body = call(service, "GET", "/api/search?molecule=NOPE")
        assert status == 404
        assert "NOPE" in body["error"]

    def test_cache_hit_is_byte_identical(self, service):
        path = "/api/search?molecule=Q&method=count_norm"
        status1, headers1, body1 = service.handle("GET", path, b"")
        status2, headers2, body2 = service.handle("GET", path, b"")
        assert (status1, status2) == (200, 200)
        assert headers1["X-Cache"] == "miss"
        assert headers2["X-Cache"] == "hit"
        assert headers2["X-Compute-Ms"] == "0"
        assert body1 == body2

    def test_cache_key_includes_paging(self, service):
        one = call(service, "GET", "/api/search?molecule=Q&page_size=1")[2]
        twenty = call(service, "GET", "/api/search?molecule=Q&page_size=20")[2]
        assert one != twenty

    def test_paging_boundaries(self, service):
        _, _, page1 = call(service, "GET", "/api/search?molecule=Q&page_size=1&page=1")
        _, _, page2 = call(service, "GET", "/api/search?molecule=Q&page_size=1&page=2")
        _, _, page3 = call(service, "GET", "/api/search?molecule=Q&page_size=1&page=3")
        assert [e["author"] for e in page1["entries"]] == ["A1"]
        assert [e["author"] for e in page2["entries"]] == ["A2"]
        assert page3["entries"] == []
        assert page1["total_pages"] == page2["total_pages"] == page3["total_pages"] == 2

    def test_page_past_end_of_single_page(self, service):
        _, _, body = call(service, "GET", "/api/search?molecule=Q&page=2")
        assert body["entries"] == []
        assert body["total_pages"] == 1

    def test_pages_concatenate_to_full_list(self, service):
        _, _, full = call(service, "GET", "/api/search?molecule=Q&page_size=100")
        collected = []
        page = 1
        while True:
            _, _, body = call(
                service, "GET", f"/api/search?molecule=Q&page_size=1&page={page}"
            )
            if not body["entries"]:
                break
            collected.extend(body["entries"])
            page += 1
        assert collected == full["entries"]


class TestMoleculeDetail:
    def test_detail_payload(self, service):
        status, _, body = call(service, "GET", "/api/molecules/Q")
        assert status == 200
        assert body == {
            "name": "Q",
            "aliases": [],
            "degree": 2,
            "related": ["M1", "M2"],
            "publication_count": 0,
        }

    def test_neighbor_detail(self, service):
        _, _, body = call(service, "GET", "/api/molecules/M1")
        assert body["related"] == ["Q"]
        assert body["publication_count"] == 2

    def test_alias_and_case_resolution(self, f1, tmp_path):
        f1.upsert_molecule("Q", {"Query-Node"})
        svc = Service()
        svc.load_graph(f1)
        for name in ("q", "query-node", "Query-Node"):
            status, _, body = call(svc, "GET", f"/api/molecules/{name}")
            assert status == 200
            assert body["name"] == "Q"
            assert body["aliases"] == ["Query-Node"]

    def test_unknown_molecule(self, service):
        assert call(service, "GET", "/api/molecules/NOPE")[0] == 404


class TestPrecomputeEndpoint:
    def test_requires_store(self, f1):
        svc = Service()
        svc.load_graph(f1)
        status, _, body = call(svc, "POST", "/api/admin/precompute")
        assert status == 400
        assert "store" in body["error"]

    def test_selected_molecules(self, service):
        status, _, body = call(
            service,
            "POST",
            "/api/admin/precompute",
            json.dumps({"molecules": ["Q"]}).encode(),
        )
        assert status == 200
        assert body == {"stored": 2, "skipped": 0}
        _, _, again = call(
            service,
            "POST",
            "/api/admin/precompute",
            json.dumps({"molecules": ["Q"]}).encode(),
        )
        assert again == {"stored": 0, "skipped": 2}

    def test_empty_body_covers_all_molecules(self, service):
        _, _, body = call(service, "POST", "/api/admin/precompute")
        # Q, M1 and M2 have neighbors; two variants each
        assert body == {"stored": 6, "skipped": 0}

    def test_single_variant(self, service):
        _, _, body = call(
            service,
            "POST",
            "/api/admin/precompute",
            json.dumps({"molecules": ["Q"], "variants": ["norm"]}).encode(),
        )
        assert body == {"stored": 1, "skipped": 0}

    def test_bad_requests(self, service):
        bad = [
            b"{not json",
            json.dumps(["Q"]).encode(),
            json.dumps({"molecules": ["NOPE"]}).encode(),
            json.dumps({"molecules": ["Q"], "variants": ["diagonal"]}).encode(),
        ]
        for body in bad:
            assert call(service, "POST", "/api/admin/precompute", body)[0] == 400

    def test_store_failure_is_500(self, f1, tmp_path):
        target = tmp_path / "gone"
        target.mkdir()
        store = PrecomputeStore(target / "pagerank.cache")
        svc = Service()
        svc.load_graph(f1, store)
        target.rmdir()
        status, _, body = call(svc, "POST", "/api/admin/precompute")
        assert status == 500
        assert "error" in body


def http_get(url, headers=None):
    req = urllib.request.Request(url, headers=headers or {})
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, dict(resp.headers), resp.read()
    except urllib.error.HTTPError as exc:
        body = exc.read()
        return exc.code, dict(exc.headers), body


@pytest.fixture
def api(f1, tmp_path):
    svc = Service()
    svc.load_graph(f1, PrecomputeStore(tmp_path / "pagerank.cache"))
    server = make_server("127.0.0.1", 0, svc)
    thread = threading.Thread(
        target=server.serve_forever, kwargs={"poll_interval": 0.02}, daemon=True
    )
    thread.start()
    try:
        yield f"http://127.0.0.1:{server.server_port}"
    finally:
        server.shutdown()
        thread.join()


class TestHttpTransport:
    def test_health_over_http(self, api):
        status, headers, body = http_get(f"{api}/api/health")
        assert status == 200
        assert headers["Content-Type"].startswith("application/json")
        assert int(headers["Content-Length"]) == len(body)
        assert json.loads(body)["status"] == "ok"

    def test_search_cache_markers(self, api):
        url = f"{api}/api/search?molecule=Q&method=count_nonnorm"
        status1, headers1, body1 = http_get(url)
        status2, headers2, body2 = http_get(url)
        assert (status1, status2) == (200, 200)
        assert headers1["X-Cache"] == "miss"
        assert headers2["X-Cache"] == "hit"
        assert "X-Compute-Ms" in headers1
        assert body1 == body2

    def test_error_status_over_http(self, api):
        status, _, body = http_get(f"{api}/api/search?molecule=NOPE")
        assert status == 404
        assert "NOPE" in json.loads(body)["error"]

    def test_cors_wildcard(self, api):
        _, headers, _ = http_get(
            f"{api}/api/health", headers={"Origin": "http://example.test"}
        )
        assert headers["Access-Control-Allow-Origin"] == "*"
        assert "X-Cache" in headers["Access-Control-Expose-Headers"]

    def test_cors_allowlist(self, f1):
        config = ServiceConfig(cors_origins=("http://localhost:5173",))
        svc = Service(config)
        svc.load_graph(f1)
        server = make_server("127.0.0.1", 0, svc)
        thread = threading.Thread(
            target=server.serve_forever, kwargs={"poll_interval": 0.02}, daemon=True
        )
        thread.start()
        try:
            base = f"http://127.0.0.1:{server.server_port}"
            _, allowed, _ = http_get(
                f"{base}/api/health", headers={"Origin": "http://localhost:5173"}
            )
            assert allowed["Access-Control-Allow-Origin"] == "http://localhost:5173"
            _, denied, _ = http_get(
                f"{base}/api/health", headers={"Origin": "http://evil.test"}
            )
            assert "Access-Control-Allow-Origin" not in denied
        finally:
            server.shutdown()
            thread.join()

    def test_preflight(self, api):
        req = urllib.request.Request(
            f"{api}/api/search",
            method="OPTIONS",
            headers={"Origin": "http://example.test"},
        )
        with urllib.request.urlopen(req) as resp:
            assert resp.status == 204
            assert "GET" in resp.headers["Access-Control-Allow-Methods"]

    def test_concurrent_identical_requests(self, api):
        url = f"{api}/api/search?molecule=Q&method=pagerank_nonnorm"
        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(lambda _: http_get(url), range(16)))
        bodies = {body for _, _, body in results}
        assert all(status == 200 for status, _, _ in results)
        assert len(bodies) == 1

    def test_post_precompute_over_http(self, api):
        payload = json.dumps({"molecules": ["Q"]}).encode()
        req = urllib.request.Request(
            f"{api}/api/admin/precompute",
            data=payload,
            method="POST",
            headers={"Content-Type": "application/json"},
        )
        with urllib.request.urlopen(req) as resp:
            assert resp.status == 200
            assert json.loads(resp.read()) == {"stored": 2, "skipped": 0}
