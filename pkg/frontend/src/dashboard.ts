/**
 * Reviewer dashboard poller.
 *
 * Polls the dashboard endpoint on the configured interval with a
 * conditional GET: a 304 costs nothing and means nothing visible changed.
 * A failed poll raises the stale banner but keeps the last good data on
 * screen; the next successful poll clears it.
 */

import { ApiClient, type DashboardData } from "./api.js";

export type PollResult = "updated" | "not-modified" | "error";

export class DashboardPoller {
  lastGood: DashboardData | null = null;
  etag: string | null = null;
  stale = false;
  counts = { updated: 0, notModified: 0, errors: 0 };
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private api: ApiClient,
    private reviewerId: string,
    public intervalSeconds: number,
    private onChange: (data: DashboardData) => void = () => {},
  ) {}

  async pollOnce(): Promise<PollResult> {
    try {
      const reply = await this.api.dashboard(this.reviewerId, this.etag);
      this.stale = false;
      if (reply.status === 304) {
        this.counts.notModified += 1;
        return "not-modified";
      }
      this.etag = reply.etag;
      this.lastGood = reply.data;
      this.counts.updated += 1;
      this.onChange(reply.data);
      return "updated";
    } catch {
      this.stale = true; // keep lastGood on screen
      this.counts.errors += 1;
      return "error";
    }
  }

  start(): void {
    if (this.timer !== null) {
      return; // concurrent polls deduplicated
    }
    void this.pollOnce();
    this.timer = setInterval(() => void this.pollOnce(), this.intervalSeconds * 1000);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  /** Color of one paper box, straight from the wire contract. */
  stateOf(paperId: number): string | null {
    const entry = this.lastGood?.papers.find((p) => p.paper_id === paperId);
    return entry ? entry.state : null;
  }
}
