/**
 * Filter-spec bookkeeping: canonical form, toggle edits, URL codec.
 *
 * Every interaction edits the filter spec through one of the pure helpers here,
 * so view code never mutates state in place. The canonical form mirrors
 * the server's field order, which makes spec comparison a string compare.
 */

import {
  FilterSpecData,
  TREEMAP_FACETS,
  TreemapFacet,
} from "./types.js";

export const VENUE_TYPE_SEP = " · ";

const sorted = (xs: string[]) => [...xs].sort((a, b) => (a < b ? -1 : a > b ? 1 : 0));

/** Rebuild a spec in the server's canonical field order, arrays sorted. */
export function canonicalSpec(data: FilterSpecData): FilterSpecData {
  const out: FilterSpecData = {};
  if (data.year_range) out.year_range = [data.year_range[0], data.year_range[1]];
  if (data.years_clicked?.length) {
    out.years_clicked = [...data.years_clicked].sort((a, b) => a - b);
  }
  if (data.venues?.length) out.venues = sorted(data.venues);
  if (data.paper_types?.length) out.paper_types = sorted(data.paper_types);
  if (data.author_query) {
    out.author_query = { last: data.author_query.last };
    if (data.author_query.first !== undefined) {
      out.author_query.first = data.author_query.first;
    }
  }
  if (data.title_terms?.length) out.title_terms = sorted(data.title_terms);
  if (data.title_bigram) out.title_bigram = data.title_bigram;
  if (data.language) out.language = data.language;
  if (data.excluded_ids?.length) out.excluded_ids = sorted(data.excluded_ids);
  return out;
}

/** Stable identity for stale-response matching and URL encoding. */
export function specKey(data: FilterSpecData): string {
  return JSON.stringify(canonicalSpec(data));
}

export function isEmptySpec(data: FilterSpecData): boolean {
  return specKey(data) === "{}";
}

// ---- toggle edits ----------------------------------------------------

export function toggleYear(spec: FilterSpecData, year: number): FilterSpecData {
  const current = new Set(spec.years_clicked ?? []);
  if (current.has(year)) current.delete(year);
  else current.add(year);
  const next = { ...spec };
  if (current.size) next.years_clicked = [...current];
  else delete next.years_clicked;
  return canonicalSpec(next);
}

export function setYearRange(
  spec: FilterSpecData,
  range: [number, number] | null,
): FilterSpecData {
  const next = { ...spec };
  if (range) next.year_range = range;
  else delete next.year_range;
  return canonicalSpec(next);
}

export function toggleVenueType(
  spec: FilterSpecData,
  venue: string,
  paperType: string,
): FilterSpecData {
  const next = { ...spec };
  const already =
    spec.venues?.length === 1 &&
    spec.venues[0] === venue &&
    spec.paper_types?.length === 1 &&
    spec.paper_types[0] === paperType;
  if (already) {
    delete next.venues;
    delete next.paper_types;
  } else {
    next.venues = [venue];
    next.paper_types = [paperType];
  }
  return canonicalSpec(next);
}

export function toggleTerm(spec: FilterSpecData, term: string): FilterSpecData {
  const next = { ...spec };
  if (spec.title_terms?.length === 1 && spec.title_terms[0] === term) {
    delete next.title_terms;
  } else {
    next.title_terms = [term];
  }
  return canonicalSpec(next);
}

/** Search-box entry: comma or whitespace separated, empty clears. */
export function setTerms(spec: FilterSpecData, text: string): FilterSpecData {
  const entries = text
    .split(/[,\s]+/)
    .map((t) => t.trim().toLowerCase())
    .filter(Boolean);
  const next = { ...spec };
  if (entries.length) next.title_terms = entries;
  else delete next.title_terms;
  return canonicalSpec(next);
}

export function toggleBigram(spec: FilterSpecData, bigram: string): FilterSpecData {
  const next = { ...spec };
  if (spec.title_bigram === bigram) delete next.title_bigram;
  else next.title_bigram = bigram;
  return canonicalSpec(next);
}

export function toggleLanguage(spec: FilterSpecData, language: string): FilterSpecData {
  const next = { ...spec };
  if (spec.language === language) delete next.language;
  else next.language = language;
  return canonicalSpec(next);
}

export function toggleAuthor(
  spec: FilterSpecData,
  last: string,
  first?: string,
): FilterSpecData {
  const next = { ...spec };
  const current = spec.author_query;
  if (current && current.last === last && current.first === first) {
    delete next.author_query;
  } else {
    next.author_query = first === undefined ? { last } : { last, first };
  }
  return canonicalSpec(next);
}

/** Author search box: "Last" or "Last, First"; empty clears. */
export function setAuthorText(spec: FilterSpecData, text: string): FilterSpecData {
  const next = { ...spec };
  const trimmed = text.trim();
  if (!trimmed) {
    delete next.author_query;
    return canonicalSpec(next);
  }
  const comma = trimmed.indexOf(",");
  if (comma < 0) next.author_query = { last: trimmed };
  else {
    const last = trimmed.slice(0, comma).trim();
    const first = trimmed.slice(comma + 1).trim();
    next.author_query = first ? { last, first } : { last };
  }
  return canonicalSpec(next);
}

export function addExclusion(spec: FilterSpecData, id: string): FilterSpecData {
  const current = new Set(spec.excluded_ids ?? []);
  if (current.has(id)) return canonicalSpec(spec); // set semantics: no-op
  current.add(id);
  return canonicalSpec({ ...spec, excluded_ids: [...current] });
}

export function removeExclusion(spec: FilterSpecData, id: string): FilterSpecData {
  const current = new Set(spec.excluded_ids ?? []);
  current.delete(id);
  const next = { ...spec };
  if (current.size) next.excluded_ids = [...current];
  else delete next.excluded_ids;
  return canonicalSpec(next);
}

/** One treemap-cell click, routed by the facet the cell came from. */
export function treemapCellToggle(
  spec: FilterSpecData,
  facet: TreemapFacet,
  label: string,
): FilterSpecData {
  switch (facet) {
    case "venue-type": {
      const at = label.indexOf(VENUE_TYPE_SEP);
      if (at < 0) return canonicalSpec(spec);
      return toggleVenueType(
        spec,
        label.slice(0, at),
        label.slice(at + VENUE_TYPE_SEP.length),
      );
    }
    case "unigram":
      return toggleTerm(spec, label);
    case "bigram":
      return toggleBigram(spec, label);
    case "language":
      return toggleLanguage(spec, label);
  }
}

// ---- URL fragment codec ----------------------------------------------

export function fragmentFromState(spec: FilterSpecData, facet: TreemapFacet): string {
  const params = new URLSearchParams();
  if (!isEmptySpec(spec)) params.set("q", specKey(spec));
  if (facet !== "venue-type") params.set("f", facet);
  return params.toString();
}

export function stateFromFragment(fragment: string): {
  spec: FilterSpecData;
  facet: TreemapFacet;
} {
  const params = new URLSearchParams(fragment.replace(/^#/, ""));
  let spec: FilterSpecData = {};
  const raw = params.get("q");
  if (raw) {
    try {
      const parsed = JSON.parse(raw);
      if (parsed && typeof parsed === "object" && !Array.isArray(parsed)) {
        spec = canonicalSpec(parsed as FilterSpecData);
      }
    } catch {
      // a mangled link falls back to the unfiltered view
    }
  }
  const facetRaw = params.get("f");
  const facet = (TREEMAP_FACETS as readonly string[]).includes(facetRaw ?? "")
    ? (facetRaw as TreemapFacet)
    : "venue-type";
  return { spec, facet };
}
