/**
 * Chair console: the five overview tabs, the accept-set builder and the
 * distribution report viewer. Decisions are atomic server-side; the local
 * accept set survives a failed attempt untouched so nothing is half-applied.
 */

import { ApiClient } from "./api.js";

export const OVERVIEW_TABS = [
  "progress",
  "all",
  "categories",
  "champions",
  "low-expertise",
] as const;

export type OverviewKind = (typeof OVERVIEW_TABS)[number];

export class ChairConsole {
  acceptSet = new Set<number>();
  decided: { accepted: number[]; rejected: number[] } | null = null;
  tabs: Partial<Record<OverviewKind, unknown[]>> = {};

  constructor(private api: ApiClient) {}

  async loadTab(kind: OverviewKind): Promise<unknown[]> {
    const rows = await this.api.overview(kind);
    this.tabs[kind] = rows;
    return rows;
  }

  toggleAccept(paperId: number): void {
    if (this.acceptSet.has(paperId)) {
      this.acceptSet.delete(paperId);
    } else {
      this.acceptSet.add(paperId);
    }
  }

  async recordDecisions(): Promise<{ accepted: number[]; rejected: number[] }> {
    // on ApiError the accept set is left as-is: nothing was applied
    const record = await this.api.recordDecisions([...this.acceptSet].sort((a, b) => a - b));
    this.decided = record;
    return record;
  }

  async loadDistributionReport(): Promise<unknown> {
    return this.api.distributionReport();
  }
}
