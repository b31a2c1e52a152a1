/**
 * Typed client for the collaboration-network JSON API.
 *
 * Endpoints:
 *   GET /api/search?molecule=&method=&page=&page_size=
 *   GET /api/molecules/{name}
 *   GET /api/health
 *
 * The base URL is resolved at runtime: an explicit constructor argument
 * wins, then the `COLLABNET_API_BASE` global (set it in a script tag
 * before the app loads), then same-origin relative paths.
 */

export const METHODS = [
  "hypergeometric",
  "count_nonnorm",
  "count_norm",
  "pagerank_nonnorm",
  "pagerank_norm",
] as const;

export type Method = (typeof METHODS)[number];

export function isMethod(value: string): value is Method {
  return (METHODS as readonly string[]).includes(value);
}

export interface SearchQuery {
  molecule: string;
  method: Method;
  page: number;
  pageSize: number;
}

export interface SearchEntry {
  author: string;
  score: number;
  /** `[molecule name, publication count]` pairs, ordered by the server. */
  related_molecules: [string, number][];
  /** Present only when the corpus recorded an affiliation for the author. */
  affiliation?: string;
}

export interface SearchResponse {
  query: { molecule: string; method: Method; page: number; page_size: number };
  total_results: number;
  total_pages: number;
  entries: SearchEntry[];
}

export interface MoleculeDetail {
  name: string;
  aliases: string[];
  degree: number;
  related: string[];
  publication_count: number;
}

export interface HealthResponse {
  status: string;
  revision: number;
  counts: Record<string, number>;
}

/** Server-reported failure (4xx/5xx) carrying the JSON error message. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** 404 from the API: the molecule (or route) does not exist. */
export class NotFoundError extends ApiError {
  constructor(message: string) {
    super(404, message);
    this.name = "NotFoundError";
  }
}

/** The request never reached the server (offline, refused, timeout...). */
export class NetworkError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "NetworkError";
  }
}

/** True for the rejection produced by aborting an in-flight request. */
export function isAbortError(err: unknown): boolean {
  return err instanceof Error && err.name === "AbortError";
}

declare global {
  // Optional deploy-time override for the API origin; empty means same-origin.
  // eslint-disable-next-line no-var
  var COLLABNET_API_BASE: string | undefined;
}

export function resolveApiBase(): string {
  const base = globalThis.COLLABNET_API_BASE;
  return typeof base === "string" ? base : "";
}

/** Structural subset of `Response` the client needs; keeps fakes trivial. */
export interface ApiResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: { signal?: AbortSignal },
) => Promise<ApiResponse>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl?: string, fetchFn?: FetchLike) {
    const base = baseUrl ?? resolveApiBase();
    this.base = base.endsWith("/") ? base.slice(0, -1) : base;
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  searchUrl(q: SearchQuery): string {
    const params = new URLSearchParams({
      molecule: q.molecule,
      method: q.method,
      page: String(q.page),
      page_size: String(q.pageSize),
    });
    return `${this.base}/api/search?${params.toString()}`;
  }

  async search(q: SearchQuery, signal?: AbortSignal): Promise<SearchResponse> {
    return (await this.get(this.searchUrl(q), signal)) as SearchResponse;
  }

  async molecule(name: string, signal?: AbortSignal): Promise<MoleculeDetail> {
    const url = `${this.base}/api/molecules/${encodeURIComponent(name)}`;
    return (await this.get(url, signal)) as MoleculeDetail;
  }

  async health(signal?: AbortSignal): Promise<HealthResponse> {
    return (await this.get(`${this.base}/api/health`, signal)) as HealthResponse;
  }

  private async get(url: string, signal?: AbortSignal): Promise<unknown> {
    let response: ApiResponse;
    try {
      response = await this.fetchFn(url, { signal });
    } catch (err) {
      if (isAbortError(err)) throw err;
      throw new NetworkError(err instanceof Error ? err.message : String(err));
    }
    if (!response.ok) {
      const message = await errorMessage(response);
      if (response.status === 404) throw new NotFoundError(message);
      throw new ApiError(response.status, message);
    }
    return response.json();
  }
}

async function errorMessage(response: ApiResponse): Promise<string> {
  try {
    const body = (await response.json()) as { error?: unknown };
    if (body !== null && typeof body === "object" && typeof body.error === "string") {
      return body.error;
    }
  } catch {
    // non-JSON error body; fall through to the generic message
  }
  return `server responded with status ${response.status}`;
}
