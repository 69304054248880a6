/**
 * Bidding browser model: per-paper checkbox plus high/low selector.
 *
 * Selections accumulate locally until submitted; the server accumulates
 * across submissions (last bid per paper wins). Conflict-of-interest
 * rejections come back per item and never discard the rest of the batch;
 * papers known to be conflicted render with disabled bid controls.
 */

import { ApiClient, type BidPriority } from "./api.js";

export class BiddingModel {
  /** pending (unsubmitted) selections */
  selections = new Map<number, BidPriority>();
  /** effective bids as the server last reported them */
  effective = new Map<number, BidPriority>();
  /** papers this reviewer cannot bid on */
  coi = new Set<number>();
  /** per-item rejections from the last submit */
  lastRejections: { paper_id: number; reason: string }[] = [];

  select(paperId: number, priority: BidPriority): void {
    if (this.coi.has(paperId)) {
      return; // controls are disabled; ignore programmatic attempts too
    }
    this.selections.set(paperId, priority);
  }

  unselect(paperId: number): void {
    this.selections.delete(paperId);
  }

  isDisabled(paperId: number): boolean {
    return this.coi.has(paperId);
  }

  /** Priority a row should display: pending selection wins over server state. */
  displayedPriority(paperId: number): BidPriority | null {
    return this.selections.get(paperId) ?? this.effective.get(paperId) ?? null;
  }

  async declareCoi(api: ApiClient, paperId: number): Promise<void> {
    await api.declareCoi(paperId);
    this.coi.add(paperId);
    this.selections.delete(paperId);
    this.effective.delete(paperId);
  }

  /** Push pending selections; returns the count that stuck. */
  async submit(api: ApiClient): Promise<number> {
    const batch = [...this.selections.entries()].map(([paper_id, priority]) => ({
      paper_id,
      priority,
    }));
    if (batch.length === 0) {
      return 0;
    }
    const outcome = await api.submitBids(batch);
    this.lastRejections = outcome.rejected;
    for (const rejection of outcome.rejected) {
      if (rejection.reason.includes("conflict")) {
        this.coi.add(rejection.paper_id);
      }
      this.selections.delete(rejection.paper_id);
    }
    for (const bid of outcome.applied) {
      this.selections.delete(bid.paper_id);
    }
    this.effective = new Map(
      outcome.effective.map((bid) => [bid.paper_id, bid.priority]),
    );
    return outcome.applied.length;
  }

  /** Reload server-side effective bids (the "after refresh" view). */
  async refresh(api: ApiClient): Promise<void> {
    const reply = await api.myBids();
    this.effective = new Map(
      reply.effective.map((bid) => [bid.paper_id, bid.priority]),
    );
  }
}
