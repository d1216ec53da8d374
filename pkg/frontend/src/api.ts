/**
 * Thin typed client for the dashboard's JSON endpoints.
 *
 * Paper lookups are cached for the life of the page: hover traffic is
 * bursty and paper metadata only changes on a snapshot reload, at which
 * point the page is expected to be refreshed anyway.
 */

import { FilterSpecData, HoverInfo, QueryEnvelope, TreemapFacet } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

async function errorMessage(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") return body.error;
  } catch {
    // fall through to the generic message
  }
  return `request failed with status ${response.status}`;
}

export class ApiClient {
  private paperCache = new Map<string, Promise<HoverInfo | null>>();

  constructor(
    private baseUrl = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async query(spec: FilterSpecData, facet: TreemapFacet): Promise<QueryEnvelope> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/api/query?facet=${encodeURIComponent(facet)}`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(spec),
      },
    );
    if (!response.ok) throw new ApiError(await errorMessage(response), response.status);
    return (await response.json()) as QueryEnvelope;
  }

  /** Resolves null for an unknown id (the 404 case renders as unavailable). */
  paper(nlpsId: string): Promise<HoverInfo | null> {
    const cached = this.paperCache.get(nlpsId);
    if (cached) return cached;
    const pending = (async (): Promise<HoverInfo | null> => {
      const response = await this.fetchImpl(
        `${this.baseUrl}/api/paper/${encodeURIComponent(nlpsId)}`,
      );
      if (response.status === 404) return null;
      if (!response.ok) throw new ApiError(await errorMessage(response), response.status);
      return (await response.json()) as HoverInfo;
    })();
    // a transport failure should not poison the cache
    pending.catch(() => this.paperCache.delete(nlpsId));
    this.paperCache.set(nlpsId, pending);
    return pending;
  }
}
