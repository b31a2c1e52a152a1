import { describe, expect, it } from "vitest";

import { METHODS } from "../src/api.js";
import type { SearchQuery } from "../src/api.js";
import {
  DEFAULT_PAGE_SIZE,
  initialState,
  parseQueryString,
  toQueryString,
} from "../src/state.js";

describe("parseQueryString", () => {
  it("fills defaults when only the molecule is given", () => {
    expect(parseQueryString("?molecule=Q")).toEqual({
      molecule: "Q",
      method: "count_nonnorm",
      page: 1,
      pageSize: DEFAULT_PAGE_SIZE,
    });
  });

  it("returns null without a molecule", () => {
    expect(parseQueryString("")).toBeNull();
    expect(parseQueryString("?")).toBeNull();
    expect(parseQueryString("?molecule=")).toBeNull();
    expect(parseQueryString("?molecule=%20%20")).toBeNull();
    expect(parseQueryString("?method=count_norm&page=2")).toBeNull();
  });

  it("reads every parameter", () => {
    expect(
      parseQueryString("?molecule=SYN001&method=pagerank_norm&page=3&page_size=5"),
    ).toEqual({
      molecule: "SYN001",
      method: "pagerank_norm",
      page: 3,
      pageSize: 5,
    });
  });

  it("falls back to defaults on malformed values", () => {
    const q = parseQueryString(
      "?molecule=Q&method=sideways&page=zero&page_size=-3",
    );
    expect(q).toEqual({
      molecule: "Q",
      method: "count_nonnorm",
      page: 1,
      pageSize: DEFAULT_PAGE_SIZE,
    });
  });

  it("clamps page_size into the API's accepted range", () => {
    expect(parseQueryString("?molecule=Q&page_size=500")?.pageSize).toBe(100);
    expect(parseQueryString("?molecule=Q&page_size=0")?.pageSize).toBe(
      DEFAULT_PAGE_SIZE,
    );
  });

  it("decodes percent-encoded molecule names", () => {
    expect(parseQueryString("?molecule=A%26B%2F2")?.molecule).toBe("A&B/2");
  });
});

describe("toQueryString", () => {
  it("omits parameters at their default value", () => {
    expect(
      toQueryString({
        molecule: "Q",
        method: "count_nonnorm",
        page: 1,
        pageSize: DEFAULT_PAGE_SIZE,
      }),
    ).toBe("molecule=Q");
  });

  it("writes non-default parameters", () => {
    expect(
      toQueryString({
        molecule: "SYN001",
        method: "hypergeometric",
        page: 2,
        pageSize: 10,
      }),
    ).toBe("molecule=SYN001&method=hypergeometric&page=2&page_size=10");
  });

  it("round-trips every combination of methods, pages, and sizes", () => {
    for (const method of METHODS) {
      for (const page of [1, 2, 7, 99]) {
        for (const pageSize of [1, 20, 50, 100]) {
          const q: SearchQuery = { molecule: "A&B name", method, page, pageSize };
          expect(parseQueryString("?" + toQueryString(q))).toEqual(q);
        }
      }
    }
  });
});

describe("initialState", () => {
  it("starts blank, idle, and on the default method", () => {
    const s = initialState();
    expect(s.query.molecule).toBe("");
    expect(s.query.method).toBe("count_nonnorm");
    expect(s.loading).toBe(false);
    expect(s.response).toBeNull();
    expect(s.error).toBeNull();
    expect(s.notice).toBeNull();
  });
});
