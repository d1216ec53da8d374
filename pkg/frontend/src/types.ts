/**
 * Wire types for the dashboard's JSON API.
 *
 * These mirror the server's serialized shapes exactly; nothing here is
 * computed client-side. The dashboard treats the bundle as the single
 * source of truth for every rendered number.
 */

export const TREEMAP_FACETS = ["venue-type", "unigram", "bigram", "language"] as const;
export type TreemapFacet = (typeof TREEMAP_FACETS)[number];

/** Declarative filter, the JSON form the query endpoint accepts and echoes. */
export interface FilterSpecData {
  year_range?: [number, number];
  years_clicked?: number[];
  venues?: string[];
  paper_types?: string[];
  author_query?: { last: string; first?: string };
  title_terms?: string[];
  title_bigram?: string;
  language?: string;
  excluded_ids?: string[];
}

export interface CitationSegment {
  nlps_id: string;
  n_citations: number;
  color_index: number;
}

export interface YearBar {
  year: number;
  year_total: number;
  segments: CitationSegment[];
}

export interface TopPaperRow {
  nlps_id: string;
  title: string;
  year: number;
  venue: string;
  n_citations: number | null;
}

export interface TopAuthorRow {
  name: string;
  citations: number;
  papers: number;
}

export interface TreemapCell {
  label: string;
  paper_count: number;
  facet: TreemapFacet;
}

export interface AggregateBundle {
  papers_total: number;
  papers_by_year: Record<string, number>;
  citations_total: number;
  citations_by_year: YearBar[];
  top_papers: TopPaperRow[];
  top_authors: TopAuthorRow[];
  treemap: TreemapCell[];
}

/** Query responses echo the canonicalized spec alongside the bundle. */
export interface QueryEnvelope {
  spec: FilterSpecData;
  facet: TreemapFacet;
  bundle: AggregateBundle;
}

/** Hover payload for one paper; unaligned papers carry the literal string. */
export interface HoverInfo {
  nlps_id: string;
  aa_id: string;
  title: string;
  year: number;
  venue: string;
  paper_type: string;
  authors: string;
  n_citations: number | "unaligned";
}
