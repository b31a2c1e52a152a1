/**
 * Canned API fixtures mirroring the backend's JSON bodies for the small
 * four-molecule graph used across the test suites (query molecule Q with
 * interaction partners M1 and M2, authors A1 and A2), plus a five-author
 * "BIG" molecule for multi-page flows.
 */

import type {
  ApiResponse,
  FetchLike,
  HealthResponse,
  MoleculeDetail,
  SearchEntry,
} from "../src/api.js";

export const HEALTH: HealthResponse = {
  status: "ok",
  revision: 8,
  counts: { molecules: 4, publications: 4, authors: 2 },
};

export const DETAILS: Record<string, MoleculeDetail> = {
  Q: { name: "Q", aliases: [], degree: 2, related: ["M1", "M2"], publication_count: 0 },
  M1: { name: "M1", aliases: [], degree: 1, related: ["Q"], publication_count: 2 },
  M2: { name: "M2", aliases: [], degree: 1, related: ["Q"], publication_count: 2 },
  BIG: { name: "BIG", aliases: ["B-1"], degree: 3, related: ["Q", "M1", "M2"], publication_count: 9 },
};

const Q_A1: SearchEntry = {
  author: "A1",
  score: 3.0,
  related_molecules: [["M1", 2], ["M2", 1]],
  affiliation: "Lab One",
};

const Q_A2: SearchEntry = {
  author: "A2",
  score: 2.0,
  related_molecules: [["M1", 1], ["M2", 1]],
};

/** Full (unpaged) ranked lists per molecule and method. */
export const RANKINGS: Record<string, Record<string, SearchEntry[]>> = {
  Q: {
    count_nonnorm: [Q_A1, Q_A2],
    count_norm: [
      { ...Q_A1, score: 0.03 },
      { ...Q_A2, score: 0.02 },
    ],
    hypergeometric: [
      { ...Q_A2, score: 0.5 },
      { ...Q_A1, score: 1.0 },
    ],
    pagerank_nonnorm: [
      { ...Q_A1, score: 0.5 },
      { ...Q_A2, score: 0.5 },
    ],
    pagerank_norm: [
      { ...Q_A1, score: 0.5 },
      { ...Q_A2, score: 0.5 },
    ],
  },
  M1: {},
  M2: {},
  BIG: {
    count_nonnorm: [5, 4, 3, 2, 1].map((score, i) => ({
      author: `B${i + 1}`,
      score,
      related_molecules: [["Q", score]] as [string, number][],
    })),
  },
};

export function jsonResponse(body: unknown, status = 200): ApiResponse {
  return { ok: status < 400, status, json: async () => body };
}

export interface FakeServer {
  fetchFn: FetchLike;
  /** Every request URL, in arrival order. */
  requests: URL[];
  /** URLs of /api/search requests only. */
  searches(): URL[];
}

/**
 * In-memory stand-in for the backend: same routes, same body shapes, same
 * paging semantics (a page past the end returns an empty `entries` list).
 */
export function fakeServer(): FakeServer {
  const requests: URL[] = [];
  const fetchFn: FetchLike = async (url) => {
    const u = new URL(url, "http://fixture.test");
    requests.push(u);
    if (u.pathname === "/api/health") return jsonResponse(HEALTH);

    const detailMatch = u.pathname.match(/^\/api\/molecules\/(.+)$/);
    if (detailMatch) {
      const name = decodeURIComponent(detailMatch[1] ?? "");
      const detail = DETAILS[name];
      if (!detail) {
        return jsonResponse({ error: `unknown molecule '${name}'`, status: 404 }, 404);
      }
      return jsonResponse(detail);
    }

    if (u.pathname === "/api/search") {
      const molecule = u.searchParams.get("molecule") ?? "";
      const method = u.searchParams.get("method") ?? "count_nonnorm";
      const page = Number(u.searchParams.get("page") ?? "1");
      const pageSize = Number(u.searchParams.get("page_size") ?? "20");
      const perMethod = RANKINGS[molecule];
      if (!perMethod) {
        return jsonResponse({ error: `unknown molecule '${molecule}'`, status: 404 }, 404);
      }
      const all = perMethod[method] ?? [];
      const entries = all.slice((page - 1) * pageSize, page * pageSize);
      return jsonResponse({
        query: { molecule, method, page, page_size: pageSize },
        total_results: all.length,
        total_pages: Math.ceil(all.length / pageSize),
        entries,
      });
    }

    return jsonResponse({ error: `no route for GET ${u.pathname}`, status: 404 }, 404);
  };
  return {
    fetchFn,
    requests,
    searches: () => requests.filter((u) => u.pathname === "/api/search"),
  };
}

export interface PendingRequest {
  url: URL;
  signal: AbortSignal | undefined;
  resolve(body: unknown, status?: number): void;
  reject(err: unknown): void;
}

/**
 * A fetch fake whose responses are released manually, for testing what
 * happens while requests are still in flight.  Aborting the signal rejects
 * the pending promise with an AbortError, like real fetch.
 */
export function deferredFetch(): { fetchFn: FetchLike; pending: PendingRequest[] } {
  const pending: PendingRequest[] = [];
  const fetchFn: FetchLike = (url, init) =>
    new Promise<ApiResponse>((resolve, reject) => {
      const abort = () => {
        const err = new Error("request aborted");
        err.name = "AbortError";
        reject(err);
      };
      const signal = init?.signal;
      if (signal?.aborted) {
        abort();
        return;
      }
      signal?.addEventListener("abort", abort);
      pending.push({
        url: new URL(url, "http://fixture.test"),
        signal,
        resolve: (body, status = 200) => resolve(jsonResponse(body, status)),
        reject,
      });
    });
  return { fetchFn, pending };
}
