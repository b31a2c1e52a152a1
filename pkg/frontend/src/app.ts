/**
 * Event wiring: connects the pure renderer to the API client and the
 * browser history.  Every user action maps to a query transition; the URL
 * is written first, so the browser's back/forward buttons walk through past
 * searches and each one re-runs when restored.
 *
 * At most one search is in flight.  Starting a new one aborts the previous
 * request, so a slow response can never overwrite a newer one.
 */

import type { FetchLike, SearchQuery } from "./api.js";
import {
  ApiClient,
  ApiError,
  isAbortError,
  isMethod,
  NotFoundError,
} from "./api.js";
import type { ViewError, ViewState } from "./state.js";
import { initialState, parseQueryString, toQueryString } from "./state.js";
import { renderApp } from "./render.js";

export interface AppOptions {
  root: HTMLElement;
  client?: ApiClient;
  fetchFn?: FetchLike;
  /** Defaults to the real window; injectable for tests. */
  win?: Window;
}

export class App {
  private state: ViewState = initialState();
  private inflight: AbortController | null = null;
  private readonly root: HTMLElement;
  private readonly client: ApiClient;
  private readonly win: Window;
  private readonly onPopState = (): void => this.restoreFromUrl();

  constructor(options: AppOptions) {
    this.root = options.root;
    this.client = options.client ?? new ApiClient(undefined, options.fetchFn);
    this.win = options.win ?? window;
  }

  /** Render the landing view, wire events, and honor a deep link if present. */
  start(): void {
    this.attach();
    this.render();
    void this.refreshHealth();
    const query = parseQueryString(this.win.location.search);
    if (query) void this.run(query, { push: false });
  }

  /** Detach window listeners and abort any in-flight request. */
  stop(): void {
    this.win.removeEventListener("popstate", this.onPopState);
    this.inflight?.abort();
    this.inflight = null;
  }

  getState(): ViewState {
    return this.state;
  }

  private setState(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    this.render();
  }

  private render(): void {
    this.root.innerHTML = renderApp(this.state);
  }

  private attach(): void {
    this.root.addEventListener("submit", (event) => {
      event.preventDefault();
      this.submitFromForm();
    });

    // Live-toggle the submit button while typing; the rendered markup
    // reflects the committed state, this mirrors the draft value.
    this.root.addEventListener("input", (event) => {
      const target = event.target;
      if (!(target instanceof HTMLInputElement)) return;
      if (target.id !== "molecule-input") return;
      const button =
        this.root.querySelector<HTMLButtonElement>("#search-submit");
      if (button) button.disabled = target.value.trim() === "";
    });

    // Switching methods re-queries from page one when a molecule is active.
    this.root.addEventListener("change", (event) => {
      const target = event.target;
      if (!(target instanceof HTMLSelectElement)) return;
      if (target.id !== "method-select") return;
      const method = target.value;
      if (!isMethod(method)) return;
      if (this.state.query.molecule) {
        void this.run(
          { ...this.state.query, method, page: 1 },
          { push: true },
        );
      } else {
        this.setState({ query: { ...this.state.query, method } });
      }
    });

    this.root.addEventListener("click", (event) => {
      const origin = event.target;
      if (!(origin instanceof Element)) return;
      const target = origin.closest("[data-pivot],[data-action]");
      if (!target) return;
      const pivot = target.getAttribute("data-pivot");
      if (pivot !== null) {
        event.preventDefault();
        void this.run(
          {
            molecule: pivot,
            method: this.state.query.method,
            page: 1,
            pageSize: this.state.query.pageSize,
          },
          { push: true },
        );
        return;
      }
      const action = target.getAttribute("data-action");
      if (action === "prev" || action === "next") {
        const delta = action === "next" ? 1 : -1;
        void this.run(
          { ...this.state.query, page: this.state.query.page + delta },
          { push: true },
        );
      } else if (action === "retry") {
        void this.run(this.state.query, { push: false });
      }
    });

    this.win.addEventListener("popstate", this.onPopState);
  }

  private submitFromForm(): void {
    const input =
      this.root.querySelector<HTMLInputElement>("#molecule-input");
    const select =
      this.root.querySelector<HTMLSelectElement>("#method-select");
    if (!input || !select) return;
    const molecule = input.value.trim();
    if (!molecule) return;
    const method = isMethod(select.value)
      ? select.value
      : this.state.query.method;
    void this.run(
      { molecule, method, page: 1, pageSize: this.state.query.pageSize },
      { push: true },
    );
  }

  private restoreFromUrl(): void {
    const query = parseQueryString(this.win.location.search);
    if (query) {
      void this.run(query, { push: false });
    } else {
      this.inflight?.abort();
      this.inflight = null;
      this.setState({ ...initialState(), health: this.state.health });
    }
  }

  private async run(
    query: SearchQuery,
    options: { push: boolean },
  ): Promise<void> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;

    if (options.push) {
      this.win.history.pushState(null, "", "?" + toQueryString(query));
    }
    this.setState({ query, loading: true, error: null, notice: null });

    // The catalog card is best-effort: a failure only hides it.
    const detailPromise = this.client
      .molecule(query.molecule, controller.signal)
      .catch(() => null);

    let effective = query;
    let notice: string | null = null;
    try {
      let response = await this.client.search(effective, controller.signal);
      if (response.total_pages >= 1 && effective.page > response.total_pages) {
        // The requested page is past the end; fetch the last real page.
        effective = { ...effective, page: response.total_pages };
        response = await this.client.search(effective, controller.signal);
        notice = `page ${query.page} is past the end; showing page ${effective.page} of ${response.total_pages}`;
        this.win.history.replaceState(null, "", "?" + toQueryString(effective));
      }
      const detail = await detailPromise;
      if (controller.signal.aborted) return;
      this.inflight = null;
      this.setState({
        query: effective,
        loading: false,
        response,
        detail,
        error: null,
        notice,
      });
    } catch (err) {
      if (isAbortError(err) || controller.signal.aborted) return;
      this.inflight = null;
      this.setState({
        query: effective,
        loading: false,
        response: null,
        detail: null,
        error: classifyError(err),
        notice: null,
      });
    }
  }

  private async refreshHealth(): Promise<void> {
    try {
      const health = await this.client.health();
      this.setState({ health });
    } catch {
      // the header simply omits backend status when the probe fails
    }
  }
}

function classifyError(err: unknown): ViewError {
  if (err instanceof NotFoundError) {
    return { kind: "not-found", message: err.message, status: 404 };
  }
  if (err instanceof ApiError) {
    return { kind: "server", message: err.message, status: err.status };
  }
  const message = err instanceof Error ? err.message : String(err);
  return { kind: "network", message };
}
