/**
 * HTML rendering as a pure function of `ViewState`.
 *
 * Nothing here touches the DOM, the network, or global state:
 * `renderApp(state)` always returns the same markup for the same state, so
 * views snapshot cleanly and the event layer can re-render wholesale.
 * Result rows are emitted in the order the server returned them; the client
 * never re-ranks.
 */

import type { Method, SearchEntry, SearchResponse } from "./api.js";
import { METHODS } from "./api.js";
import type { ViewState } from "./state.js";
import { toQueryString } from "./state.js";

const EM_DASH = "—";

const METHOD_LABELS: Record<Method, string> = {
  hypergeometric: "hypergeometric",
  count_nonnorm: "raw count",
  count_norm: "normalized count",
  pagerank_nonnorm: "pagerank",
  pagerank_norm: "normalized pagerank",
};

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function formatScore(score: number): string {
  return String(score);
}

export function renderApp(state: ViewState): string {
  return `<header>
  <h1>Collaboration network explorer</h1>
  ${renderHealth(state)}
</header>
<main>
  ${renderSearchForm(state)}
  ${renderNotice(state)}
  ${renderBody(state)}
</main>`;
}

function renderHealth(state: ViewState): string {
  if (!state.health) return "";
  return `<p class="health">backend ${escapeHtml(state.health.status)} · snapshot revision ${state.health.revision}</p>`;
}

function renderSearchForm(state: ViewState): string {
  const molecule = state.query.molecule;
  const submitDisabled = molecule.trim() === "" ? " disabled" : "";
  return `<form id="search-form" autocomplete="off">
  <input id="molecule-input" name="molecule" type="text"
         placeholder="molecule name or alias"
         value="${escapeHtml(molecule)}" />
  <select id="method-select" name="method" aria-label="ranking method">
    ${methodOptions(state.query.method)}
  </select>
  <button id="search-submit" type="submit"${submitDisabled}>Search</button>
</form>`;
}

function methodOptions(selected: Method): string {
  return METHODS.map(
    (m) =>
      `<option value="${m}"${m === selected ? " selected" : ""}>${METHOD_LABELS[m]}</option>`,
  ).join("\n    ");
}

function renderNotice(state: ViewState): string {
  if (!state.notice) return "";
  return `<div class="banner notice" role="status">${escapeHtml(state.notice)}</div>`;
}

function renderBody(state: ViewState): string {
  if (state.loading) {
    return `<p class="loading" role="status">Searching for ${escapeHtml(state.query.molecule)}…</p>`;
  }
  if (state.error) return renderError(state);
  if (state.response) return renderResults(state);
  return `<p class="welcome">Enter a molecule to rank the authors publishing on its interaction partners.</p>`;
}

function renderError(state: ViewState): string {
  const err = state.error;
  if (!err) return "";
  if (err.kind === "not-found") {
    return `<div class="banner error" data-error="not-found">
  <p>Molecule "${escapeHtml(state.query.molecule)}" was not found.</p>
  <p>Check the spelling, or search by one of the molecule's aliases —
     the catalog resolves aliases to their canonical name.</p>
</div>`;
  }
  const label =
    err.kind === "network"
      ? `Could not reach the server: ${escapeHtml(err.message)}`
      : `Request failed (${err.status ?? "?"}): ${escapeHtml(err.message)}`;
  return `<div class="banner error" data-error="${err.kind}">
  <p>${label}</p>
  <button type="button" data-action="retry">Retry</button>
</div>`;
}

function renderResults(state: ViewState): string {
  const res = state.response;
  if (!res) return "";
  if (res.total_results === 0) {
    return `${renderDetailCard(state)}
<p class="empty">No ranked authors for "${escapeHtml(res.query.molecule)}".</p>`;
  }
  const rows = res.entries
    .map((entry, i) => renderRow(entry, i, res, state))
    .join("\n");
  return `${renderDetailCard(state)}
<table id="results">
  <thead>
    <tr><th>#</th><th>Author</th><th>Affiliation</th><th>Score</th><th>Related molecules</th></tr>
  </thead>
  <tbody>
${rows}
  </tbody>
</table>
${renderPager(res)}`;
}

function renderDetailCard(state: ViewState): string {
  const d = state.detail;
  if (!d) return "";
  const aliases =
    d.aliases.length > 0 ? d.aliases.map(escapeHtml).join(", ") : EM_DASH;
  return `<section class="molecule-card">
  <h2>${escapeHtml(d.name)}</h2>
  <dl>
    <dt>Aliases</dt><dd>${aliases}</dd>
    <dt>Interaction partners</dt><dd>${d.degree}</dd>
    <dt>Publications</dt><dd>${d.publication_count}</dd>
  </dl>
</section>`;
}

function renderRow(
  entry: SearchEntry,
  index: number,
  res: SearchResponse,
  state: ViewState,
): string {
  const rank = (res.query.page - 1) * res.query.page_size + index + 1;
  const affiliation = entry.affiliation ? escapeHtml(entry.affiliation) : EM_DASH;
  const related = entry.related_molecules
    .map(([name, count]) => `${pivotLink(name, state)} (${count})`)
    .join(", ");
  return `    <tr>
      <td>${rank}</td>
      <td class="author">${escapeHtml(entry.author)}</td>
      <td class="affiliation">${affiliation}</td>
      <td class="score">${formatScore(entry.score)}</td>
      <td class="related">${related}</td>
    </tr>`;
}

function pivotLink(name: string, state: ViewState): string {
  const href =
    "?" +
    toQueryString({
      molecule: name,
      method: state.query.method,
      page: 1,
      pageSize: state.query.pageSize,
    });
  return `<a href="${escapeHtml(href)}" data-pivot="${escapeHtml(name)}">${escapeHtml(name)}</a>`;
}

function renderPager(res: SearchResponse): string {
  const page = res.query.page;
  const total = Math.max(res.total_pages, 1);
  const prevDisabled = page <= 1 ? " disabled" : "";
  const nextDisabled = page >= total ? " disabled" : "";
  return `<nav class="pager">
  <button type="button" data-action="prev"${prevDisabled}>Previous</button>
  <span id="page-label">page ${page} of ${total}</span>
  <button type="button" data-action="next"${nextDisabled}>Next</button>
</nav>`;
}
