import { describe, expect, it } from "vitest";

import {
  ApiClient,
  ApiError,
  isAbortError,
  NetworkError,
  NotFoundError,
} from "../src/api.js";
import type { FetchLike } from "../src/api.js";
import { fakeServer, jsonResponse } from "./fixtures.js";

const QUERY = {
  molecule: "Q",
  method: "count_nonnorm",
  page: 1,
  pageSize: 20,
} as const;

describe("searchUrl", () => {
  it("builds a same-origin relative URL by default", () => {
    const client = new ApiClient("");
    expect(client.searchUrl(QUERY)).toBe(
      "/api/search?molecule=Q&method=count_nonnorm&page=1&page_size=20",
    );
  });

  it("joins an explicit base, dropping a trailing slash", () => {
    const client = new ApiClient("http://api.test:8080/");
    expect(client.searchUrl(QUERY)).toMatch(
      /^http:\/\/api\.test:8080\/api\/search\?/,
    );
  });

  it("percent-encodes the molecule name", () => {
    const client = new ApiClient("");
    expect(client.searchUrl({ ...QUERY, molecule: "A&B 2" })).toContain(
      "molecule=A%26B+2",
    );
  });
});

describe("search", () => {
  it("returns the parsed body on 200", async () => {
    const server = fakeServer();
    const client = new ApiClient("", server.fetchFn);
    const res = await client.search(QUERY);
    expect(res.total_results).toBe(2);
    expect(res.entries.map((e) => e.author)).toEqual(["A1", "A2"]);
    expect(server.searches()).toHaveLength(1);
  });

  it("throws NotFoundError with the server's message on 404", async () => {
    const server = fakeServer();
    const client = new ApiClient("", server.fetchFn);
    const err = await client
      .search({ ...QUERY, molecule: "NOPE" })
      .then(() => null, (e: unknown) => e);
    expect(err).toBeInstanceOf(NotFoundError);
    expect((err as NotFoundError).message).toContain("NOPE");
  });

  it("throws ApiError carrying the status for other failures", async () => {
    const fetchFn: FetchLike = async () =>
      jsonResponse({ error: "page must be >= 1", status: 400 }, 400);
    const client = new ApiClient("", fetchFn);
    const err = await client.search(QUERY).then(() => null, (e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(400);
    expect((err as ApiError).message).toBe("page must be >= 1");
  });

  it("falls back to a generic message for non-JSON error bodies", async () => {
    const fetchFn: FetchLike = async () => ({
      ok: false,
      status: 502,
      json: () => Promise.reject(new SyntaxError("not json")),
    });
    const client = new ApiClient("", fetchFn);
    const err = await client.search(QUERY).then(() => null, (e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).message).toContain("502");
  });

  it("wraps transport failures in NetworkError", async () => {
    const fetchFn: FetchLike = () =>
      Promise.reject(new TypeError("fetch failed"));
    const client = new ApiClient("", fetchFn);
    const err = await client.search(QUERY).then(() => null, (e: unknown) => e);
    expect(err).toBeInstanceOf(NetworkError);
    expect((err as NetworkError).message).toContain("fetch failed");
  });

  it("lets aborts through untouched so callers can ignore stale requests", async () => {
    const fetchFn: FetchLike = () => {
      const err = new Error("request aborted");
      err.name = "AbortError";
      return Promise.reject(err);
    };
    const client = new ApiClient("", fetchFn);
    const err = await client.search(QUERY).then(() => null, (e: unknown) => e);
    expect(isAbortError(err)).toBe(true);
    expect(err).not.toBeInstanceOf(NetworkError);
  });
});

describe("molecule and health", () => {
  it("fetches molecule detail by encoded name", async () => {
    const server = fakeServer();
    const client = new ApiClient("", server.fetchFn);
    const detail = await client.molecule("Q");
    expect(detail).toEqual({
      name: "Q",
      aliases: [],
      degree: 2,
      related: ["M1", "M2"],
      publication_count: 0,
    });
    expect(server.requests[0]?.pathname).toBe("/api/molecules/Q");
  });

  it("reports unknown molecules as NotFoundError", async () => {
    const server = fakeServer();
    const client = new ApiClient("", server.fetchFn);
    const err = await client
      .molecule("NOPE")
      .then(() => null, (e: unknown) => e);
    expect(err).toBeInstanceOf(NotFoundError);
  });

  it("fetches the health document", async () => {
    const server = fakeServer();
    const client = new ApiClient("", server.fetchFn);
    const health = await client.health();
    expect(health.status).toBe("ok");
    expect(health.counts["molecules"]).toBe(4);
  });
});
