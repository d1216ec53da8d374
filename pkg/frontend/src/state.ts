/**
 * Dashboard controller: one shared filter spec, one bundle, one pending
 * request at a time.
 *
 * Every interaction funnels through commit(), which issues a query and
 * stamps it with a sequence number. Only the newest request may publish
 * its response; anything slower is discarded, so the rendered views can
 * never mix two filter states. On success the server's echoed canonical
 * spec is adopted as the current one, making the server the single
 * authority on spec normalization.
 */

import { ApiClient } from "./api.js";
import {
  addExclusion,
  fragmentFromState,
  removeExclusion,
  setAuthorText,
  setTerms,
  setYearRange,
  specKey,
  stateFromFragment,
  toggleAuthor,
  toggleYear,
  treemapCellToggle,
} from "./spec.js";
import {
  AggregateBundle,
  FilterSpecData,
  HoverInfo,
  TreemapFacet,
} from "./types.js";

export interface DashboardState {
  spec: FilterSpecData;
  facet: TreemapFacet;
  bundle: AggregateBundle | null;
  pending: boolean;
  error: string | null;
  excludedCount: number;
}

export type StateListener = (state: DashboardState) => void;

const DEBOUNCE_MS = 300;

export class Dashboard {
  private spec: FilterSpecData = {};
  private facet: TreemapFacet = "venue-type";
  private bundle: AggregateBundle | null = null;
  private pending = false;
  private error: string | null = null;
  private undoStack: string[] = [];
  private seq = 0;
  private debounceTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private api: ApiClient,
    private listener: StateListener,
    private debounceMs = DEBOUNCE_MS,
  ) {}

  get state(): DashboardState {
    return {
      spec: this.spec,
      facet: this.facet,
      bundle: this.bundle,
      pending: this.pending,
      error: this.error,
      excludedCount: this.spec.excluded_ids?.length ?? 0,
    };
  }

  /** Boot from a URL fragment (possibly empty) and load the first bundle. */
  async init(fragment = ""): Promise<void> {
    const parsed = stateFromFragment(fragment);
    this.spec = parsed.spec;
    this.facet = parsed.facet;
    this.undoStack = [...(this.spec.excluded_ids ?? [])];
    await this.refresh();
  }

  fragment(): string {
    return fragmentFromState(this.spec, this.facet);
  }

  // ---- interactions --------------------------------------------------

  clickYear(year: number): Promise<void> {
    return this.commit(toggleYear(this.spec, year));
  }

  clickTreemapCell(label: string): Promise<void> {
    return this.commit(treemapCellToggle(this.spec, this.facet, label));
  }

  /** Author rows carry the canonical "Last, First" display name. */
  clickAuthor(name: string): Promise<void> {
    const comma = name.indexOf(",");
    const last = comma < 0 ? name.trim() : name.slice(0, comma).trim();
    const first = comma < 0 ? undefined : name.slice(comma + 1).trim() || undefined;
    return this.commit(toggleAuthor(this.spec, last, first));
  }

  excludePaper(nlpsId: string): Promise<void> {
    const next = addExclusion(this.spec, nlpsId);
    if (specKey(next) === specKey(this.spec)) return Promise.resolve(); // already excluded
    this.undoStack.push(nlpsId);
    return this.commit(next);
  }

  undoExclude(): Promise<void> {
    const last = this.undoStack.pop();
    if (last === undefined) return Promise.resolve();
    return this.commit(removeExclusion(this.spec, last));
  }

  switchFacet(facet: TreemapFacet): Promise<void> {
    this.facet = facet;
    return this.refresh();
  }

  searchTermsInput(text: string): void {
    this.debounced(() => this.commit(setTerms(this.spec, text)));
  }

  searchAuthorInput(text: string): void {
    this.debounced(() => this.commit(setAuthorText(this.spec, text)));
  }

  yearRangeInput(lo: number, hi: number): void {
    this.debounced(() => this.commit(setYearRange(this.spec, [lo, hi])));
  }

  clearYearRange(): Promise<void> {
    return this.commit(setYearRange(this.spec, null));
  }

  hoverInfo(nlpsId: string): Promise<HoverInfo | null> {
    return this.api.paper(nlpsId);
  }

  // ---- internals -----------------------------------------------------

  private debounced(action: () => void): void {
    if (this.debounceTimer !== null) clearTimeout(this.debounceTimer);
    this.debounceTimer = setTimeout(() => {
      this.debounceTimer = null;
      action();
    }, this.debounceMs);
  }

  private commit(spec: FilterSpecData): Promise<void> {
    this.spec = spec;
    return this.refresh();
  }

  private async refresh(): Promise<void> {
    const mySeq = ++this.seq;
    this.pending = true;
    this.error = null;
    this.listener(this.state);
    try {
      const envelope = await this.api.query(this.spec, this.facet);
      if (mySeq !== this.seq) return; // superseded while in flight
      if (envelope.facet !== this.facet) return; // server answered a stale facet
      this.spec = envelope.spec;
      this.bundle = envelope.bundle;
      this.pending = false;
    } catch (err) {
      if (mySeq !== this.seq) return;
      // keep the previous bundle on screen; surface the failure
      this.pending = false;
      this.error = err instanceof Error ? err.message : String(err);
    }
    this.listener(this.state);
  }
}
