/**
 * DOM layer. A static skeleton is built once; every state change then
 * rewrites the data-bearing regions from the current bundle. All event
 * handling is delegated from the root so rebuilt nodes need no rewiring.
 *
 * Rendered numbers are copied verbatim from the bundle. No view sums,
 * filters, or recounts anything on its own.
 */

import { Dashboard, DashboardState } from "./state.js";
import { segmentColor, shadeFor, squarify } from "./treemap.js";
import { AggregateBundle, HoverInfo, TREEMAP_FACETS } from "./types.js";

const PAPER_BAR_MAX_PX = 100;
const CITATION_BAR_MAX_PX = 140;
const TREEMAP_W = 640;
const TREEMAP_H = 360;

const FACET_TITLES: Record<string, string> = {
  "venue-type": "venue and type",
  unigram: "title words",
  bigram: "title word pairs",
  language: "languages",
};

export function ensureSkeleton(root: HTMLElement): void {
  if (root.querySelector(".dashboard")) return;
  root.innerHTML = `
    <div class="dashboard">
      <div class="banner" data-testid="error-banner" hidden></div>
      <div class="chips">
        <button type="button" data-testid="excluded-chip" data-action="undo-exclude" hidden></button>
        <span class="pending" data-testid="pending" hidden>loading&hellip;</span>
      </div>
      <section class="panel">
        <h3>Papers</h3>
        <div class="total" data-testid="papers-total">0</div>
        <div class="timeline" data-testid="papers-timeline"></div>
      </section>
      <section class="panel">
        <h3>Citations</h3>
        <div class="total" data-testid="citations-total">0</div>
        <div class="timeline stacked" data-testid="citations-timeline"></div>
      </section>
      <section class="panel">
        <h3>Most cited papers</h3>
        <ol data-testid="top-papers"></ol>
      </section>
      <section class="panel">
        <h3>Most cited authors</h3>
        <ol data-testid="top-authors"></ol>
      </section>
      <section class="panel search" data-testid="search-panel">
        <h3>Search</h3>
        <label>Title terms
          <input type="text" data-testid="terms-input" data-action="terms-input"
                 placeholder="sentiment, emotion" />
        </label>
        <label>Author
          <input type="text" data-testid="author-input" data-action="author-input"
                 placeholder="Last, First" />
        </label>
        <fieldset class="years">
          <legend>Years</legend>
          <input type="number" data-testid="year-lo" data-action="year-input" />
          <input type="number" data-testid="year-hi" data-action="year-input" />
          <button type="button" data-action="clear-years">clear</button>
        </fieldset>
      </section>
      <section class="panel">
        <nav class="facet-tabs" data-testid="facet-tabs"></nav>
        <div class="treemap" data-testid="treemap"
             style="position:relative;width:${TREEMAP_W}px;height:${TREEMAP_H}px"></div>
      </section>
      <div class="hover-box" data-testid="hover-box" hidden></div>
    </div>`;
}

function el<T extends HTMLElement>(root: HTMLElement, testid: string): T {
  const found = root.querySelector(`[data-testid="${testid}"]`);
  if (!found) throw new Error(`missing skeleton element ${testid}`);
  return found as T;
}

function renderPapersTimeline(container: HTMLElement, bundle: AggregateBundle): void {
  const years = Object.keys(bundle.papers_by_year).map(Number);
  const max = Math.max(0, ...years.map((y) => bundle.papers_by_year[String(y)] ?? 0));
  container.innerHTML = "";
  for (const year of years) {
    const count = bundle.papers_by_year[String(year)] ?? 0;
    const bar = document.createElement("div");
    bar.className = "year-bar";
    bar.dataset.action = "click-year";
    bar.dataset.year = String(year);
    bar.dataset.count = String(count);
    bar.title = `${year}: ${count} papers`;
    bar.style.height = `${max ? (count / max) * PAPER_BAR_MAX_PX : 0}px`;
    const label = document.createElement("span");
    label.className = "tick";
    label.textContent = String(year);
    bar.appendChild(label);
    container.appendChild(bar);
  }
}

function renderCitationsTimeline(container: HTMLElement, bundle: AggregateBundle): void {
  const max = Math.max(0, ...bundle.citations_by_year.map((b) => b.year_total));
  container.innerHTML = "";
  for (const yearBar of bundle.citations_by_year) {
    const column = document.createElement("div");
    column.className = "year-column";
    column.dataset.year = String(yearBar.year);
    column.dataset.total = String(yearBar.year_total);
    for (const segment of yearBar.segments) {
      const div = document.createElement("div");
      div.className = "segment";
      div.dataset.nlpsId = segment.nlps_id;
      div.dataset.citations = String(segment.n_citations);
      div.dataset.action = "segment";
      div.style.height = `${
        max ? (segment.n_citations / max) * CITATION_BAR_MAX_PX : 0
      }px`;
      div.style.background = segmentColor(segment.color_index);
      column.appendChild(div);
    }
    const label = document.createElement("span");
    label.className = "tick";
    label.textContent = String(yearBar.year);
    column.appendChild(label);
    container.appendChild(column);
  }
}

function renderTopPapers(list: HTMLElement, bundle: AggregateBundle): void {
  list.innerHTML = "";
  for (const row of bundle.top_papers) {
    const item = document.createElement("li");
    item.className = "paper-row";
    item.dataset.nlpsId = row.nlps_id;
    item.dataset.action = "paper-row";
    const cited = row.n_citations === null ? "unaligned" : String(row.n_citations);
    item.innerHTML =
      `<span class="cited">${cited}</span> ` +
      `<span class="title"></span> <span class="meta"></span>`;
    (item.querySelector(".title") as HTMLElement).textContent = row.title;
    (item.querySelector(".meta") as HTMLElement).textContent =
      `(${row.year}, ${row.venue})`;
    list.appendChild(item);
  }
}

function renderTopAuthors(list: HTMLElement, bundle: AggregateBundle): void {
  list.innerHTML = "";
  for (const row of bundle.top_authors) {
    const item = document.createElement("li");
    item.className = "author-row";
    item.dataset.name = row.name;
    item.dataset.action = "click-author";
    item.innerHTML = `<span class="name"></span> <span class="meta"></span>`;
    (item.querySelector(".name") as HTMLElement).textContent = row.name;
    (item.querySelector(".meta") as HTMLElement).textContent =
      `${row.citations} citations, ${row.papers} papers`;
    list.appendChild(item);
  }
}

function renderFacetTabs(nav: HTMLElement, active: string): void {
  nav.innerHTML = "";
  for (const facet of TREEMAP_FACETS) {
    const tab = document.createElement("button");
    tab.type = "button";
    tab.className = facet === active ? "facet-tab active" : "facet-tab";
    tab.dataset.action = "switch-facet";
    tab.dataset.facet = facet;
    tab.textContent = FACET_TITLES[facet] ?? facet;
    nav.appendChild(tab);
  }
}

function renderTreemap(container: HTMLElement, bundle: AggregateBundle): void {
  container.innerHTML = "";
  const cells = bundle.treemap;
  if (!cells.length) {
    const empty = document.createElement("p");
    empty.className = "empty";
    empty.textContent = "nothing to show";
    container.appendChild(empty);
    return;
  }
  const rects = squarify(
    cells.map((c) => c.paper_count),
    TREEMAP_W,
    TREEMAP_H,
  );
  const maxCount = Math.max(...cells.map((c) => c.paper_count));
  cells.forEach((cell, i) => {
    const rect = rects[i];
    if (!rect) return;
    const div = document.createElement("div");
    div.className = "treemap-cell";
    div.dataset.action = "treemap-cell";
    div.dataset.label = cell.label;
    div.dataset.count = String(cell.paper_count);
    div.title = `${cell.label}: ${cell.paper_count} papers`; // full label on hover
    div.style.cssText =
      `position:absolute;overflow:hidden;` +
      `left:${rect.x}px;top:${rect.y}px;width:${rect.w}px;height:${rect.h}px;` +
      `background:${shadeFor(cell.paper_count, maxCount)}`;
    const text = document.createElement("span");
    text.className = "cell-label";
    text.textContent = cell.label;
    div.appendChild(text);
    container.appendChild(div);
  });
}

function syncInput(input: HTMLInputElement, value: string): void {
  // do not fight the user for an input they are typing into
  if (document.activeElement !== input) input.value = value;
}

export function update(root: HTMLElement, state: DashboardState): void {
  ensureSkeleton(root);

  const banner = el<HTMLElement>(root, "error-banner");
  banner.hidden = state.error === null;
  banner.textContent = state.error ?? "";

  el<HTMLElement>(root, "pending").hidden = !state.pending;

  const chip = el<HTMLButtonElement>(root, "excluded-chip");
  chip.hidden = state.excludedCount === 0;
  chip.textContent = `excluded (${state.excludedCount}), undo`;

  const bundle: AggregateBundle = state.bundle ?? {
    papers_total: 0,
    papers_by_year: {},
    citations_total: 0,
    citations_by_year: [],
    top_papers: [],
    top_authors: [],
    treemap: [],
  };

  el<HTMLElement>(root, "papers-total").textContent = String(bundle.papers_total);
  el<HTMLElement>(root, "citations-total").textContent = String(bundle.citations_total);
  renderPapersTimeline(el(root, "papers-timeline"), bundle);
  renderCitationsTimeline(el(root, "citations-timeline"), bundle);
  renderTopPapers(el(root, "top-papers"), bundle);
  renderTopAuthors(el(root, "top-authors"), bundle);
  renderFacetTabs(el(root, "facet-tabs"), state.facet);
  renderTreemap(el(root, "treemap"), bundle);

  syncInput(el(root, "terms-input"), (state.spec.title_terms ?? []).join(", "));
  const author = state.spec.author_query;
  syncInput(
    el(root, "author-input"),
    author ? (author.first ? `${author.last}, ${author.first}` : author.last) : "",
  );
  syncInput(el(root, "year-lo"), state.spec.year_range ? String(state.spec.year_range[0]) : "");
  syncInput(el(root, "year-hi"), state.spec.year_range ? String(state.spec.year_range[1]) : "");
}

function hoverText(info: HoverInfo | null): string {
  if (info === null) return "paper unavailable";
  return [
    info.title,
    info.authors,
    `year: ${info.year}`,
    `venue: ${info.venue}`,
    `citations: ${info.n_citations}`,
  ].join("\n");
}

/** Wire all interactions once, via delegation from the root element. */
export function wire(root: HTMLElement, dash: Dashboard): void {
  ensureSkeleton(root);
  const hoverBox = el<HTMLElement>(root, "hover-box");
  let hoveredId: string | null = null;

  root.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) return;
    switch (target.dataset.action) {
      case "click-year":
        void dash.clickYear(Number(target.dataset.year));
        break;
      case "treemap-cell":
        void dash.clickTreemapCell(target.dataset.label ?? "");
        break;
      case "switch-facet":
        void dash.switchFacet(target.dataset.facet as never);
        break;
      case "click-author":
        void dash.clickAuthor(target.dataset.name ?? "");
        break;
      case "undo-exclude":
        void dash.undoExclude();
        break;
      case "clear-years":
        void dash.clearYearRange();
        break;
    }
  });

  // right click excludes a paper from every view
  root.addEventListener("contextmenu", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>(
      '[data-action="segment"], [data-action="paper-row"]',
    );
    if (!target || !target.dataset.nlpsId) return;
    event.preventDefault();
    void dash.excludePaper(target.dataset.nlpsId);
  });

  root.addEventListener("mouseover", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>(
      '[data-action="segment"]',
    );
    if (!target || !target.dataset.nlpsId) return;
    const id = target.dataset.nlpsId;
    hoveredId = id;
    void dash.hoverInfo(id).then((info) => {
      if (hoveredId !== id) return; // moved away before the fetch finished
      hoverBox.textContent = hoverText(info);
      hoverBox.hidden = false;
    });
  });

  root.addEventListener("mouseout", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>(
      '[data-action="segment"]',
    );
    if (!target) return;
    hoveredId = null;
    hoverBox.hidden = true;
  });

  root.addEventListener("input", (event) => {
    const target = event.target as HTMLInputElement;
    switch (target.dataset.action) {
      case "terms-input":
        dash.searchTermsInput(target.value);
        break;
      case "author-input":
        dash.searchAuthorInput(target.value);
        break;
      case "year-input": {
        const lo = el<HTMLInputElement>(root, "year-lo").valueAsNumber;
        const hi = el<HTMLInputElement>(root, "year-hi").valueAsNumber;
        if (Number.isFinite(lo) && Number.isFinite(hi) && lo <= hi) {
          dash.yearRangeInput(lo, hi);
        }
        break;
      }
    }
  });
}
