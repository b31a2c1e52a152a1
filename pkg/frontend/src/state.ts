/**
 * View state and its URL (de)serialization.
 *
 * The query string fully determines what the page shows, so every reachable
 * view is deep-linkable and the browser's session history doubles as the
 * navigation history: back/forward re-parse the previous URL and re-run its
 * query.
 */

import type {
  HealthResponse,
  MoleculeDetail,
  SearchQuery,
  SearchResponse,
} from "./api.js";
import { isMethod } from "./api.js";
import type { Method } from "./api.js";

export const DEFAULT_METHOD: Method = "count_nonnorm";
export const DEFAULT_PAGE_SIZE = 20;
export const MAX_PAGE_SIZE = 100;

export type ErrorKind = "not-found" | "network" | "server";

export interface ViewError {
  kind: ErrorKind;
  message: string;
  status?: number;
}

export interface ViewState {
  /** Current query; `molecule` is "" until the first search. */
  query: SearchQuery;
  loading: boolean;
  response: SearchResponse | null;
  /** Catalog card for the current molecule; null when unavailable. */
  detail: MoleculeDetail | null;
  /** Backend status probe shown in the header; null until it answers. */
  health: HealthResponse | null;
  error: ViewError | null;
  /** One-shot informational message, e.g. after clamping a page number. */
  notice: string | null;
}

export function initialState(): ViewState {
  return {
    query: {
      molecule: "",
      method: DEFAULT_METHOD,
      page: 1,
      pageSize: DEFAULT_PAGE_SIZE,
    },
    loading: false,
    response: null,
    detail: null,
    health: null,
    error: null,
    notice: null,
  };
}

/** Parse a location search string; null when it names no molecule. */
export function parseQueryString(search: string): SearchQuery | null {
  const params = new URLSearchParams(
    search.startsWith("?") ? search.slice(1) : search,
  );
  const molecule = (params.get("molecule") ?? "").trim();
  if (!molecule) return null;
  const methodRaw = params.get("method") ?? "";
  return {
    molecule,
    method: isMethod(methodRaw) ? methodRaw : DEFAULT_METHOD,
    page: parsePositiveInt(params.get("page"), 1),
    pageSize: clamp(
      parsePositiveInt(params.get("page_size"), DEFAULT_PAGE_SIZE),
      1,
      MAX_PAGE_SIZE,
    ),
  };
}

/** Serialize a query, omitting parameters that hold their default value. */
export function toQueryString(q: SearchQuery): string {
  const params = new URLSearchParams({ molecule: q.molecule });
  if (q.method !== DEFAULT_METHOD) params.set("method", q.method);
  if (q.page !== 1) params.set("page", String(q.page));
  if (q.pageSize !== DEFAULT_PAGE_SIZE) {
    params.set("page_size", String(q.pageSize));
  }
  return params.toString();
}

function parsePositiveInt(raw: string | null, fallback: number): number {
  if (raw === null || !/^\d+$/.test(raw)) return fallback;
  const value = Number(raw);
  return value >= 1 ? value : fallback;
}

function clamp(value: number, low: number, high: number): number {
  return Math.min(high, Math.max(low, value));
}
