import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient, type DashboardData } from "../src/api.js";
import { DashboardPoller } from "../src/dashboard.js";
import { ScriptedFetch, jsonResponse } from "./fake.js";

function dashboardBody(state: string): DashboardData {
  return {
    reviewer_id: "r1",
    papers: [
      {
        paper_id: 1,
        title: "Paper 1",
        abstract: "a",
        state,
        own_review_submitted: state !== "white",
        file_link: "/papers/1/file",
        reviews_link: "/papers/1/reviews",
        messages_link: "/papers/1/messages",
      },
    ],
  };
}

describe("DashboardPoller", () => {
  it("stores data and etag on 200, then honors 304", async () => {
    let calls = 0;
    const fetcher = new ScriptedFetch().on(
      "GET",
      "/reviewers/r1/dashboard",
      (req) => {
        calls += 1;
        if (req.headers["if-none-match"] === '"v1"') {
          return jsonResponse(304, null, { ETag: '"v1"' });
        }
        return jsonResponse(200, dashboardBody("white"), { ETag: '"v1"' });
      },
    );
    const api = new ApiClient("http://test", fetcher.fetch);
    const poller = new DashboardPoller(api, "r1", 300);

    expect(await poller.pollOnce()).toBe("updated");
    expect(poller.etag).toBe('"v1"');
    expect(poller.stateOf(1)).toBe("white");

    expect(await poller.pollOnce()).toBe("not-modified");
    expect(poller.counts).toMatchObject({ updated: 1, notModified: 1 });
    expect(calls).toBe(2);
  });

  it("keeps the last good data and raises the stale flag on errors", async () => {
    let failing = false;
    const fetcher = new ScriptedFetch().on("GET", "/reviewers/r1/dashboard", () => {
      if (failing) throw new Error("network down");
      return jsonResponse(200, dashboardBody("pink"), { ETag: '"v2"' });
    });
    const api = new ApiClient("http://test", fetcher.fetch);
    const poller = new DashboardPoller(api, "r1", 300);

    await poller.pollOnce();
    expect(poller.stateOf(1)).toBe("pink");

    failing = true;
    expect(await poller.pollOnce()).toBe("error");
    expect(poller.stale).toBe(true);
    expect(poller.stateOf(1)).toBe("pink"); // retained

    failing = false;
    await poller.pollOnce();
    expect(poller.stale).toBe(false);
  });

  it("notifies on every content change", async () => {
    const states = ["white", "pink", "red"];
    let call = 0;
    const fetcher = new ScriptedFetch().on("GET", "/reviewers/r1/dashboard", () =>
      jsonResponse(200, dashboardBody(states[Math.min(call++, 2)]), {
        ETag: `"v${call}"`,
      }),
    );
    const api = new ApiClient("http://test", fetcher.fetch);
    const seen: string[] = [];
    const poller = new DashboardPoller(api, "r1", 300, (data) =>
      seen.push(data.papers[0].state),
    );
    await poller.pollOnce();
    await poller.pollOnce();
    await poller.pollOnce();
    expect(seen).toEqual(["white", "pink", "red"]);
  });

  describe("with timers", () => {
    beforeEach(() => vi.useFakeTimers());
    afterEach(() => vi.useRealTimers());

    it("polls on the configured interval and stops cleanly", async () => {
      let calls = 0;
      const fetcher = new ScriptedFetch().on("GET", "/reviewers/r1/dashboard", () => {
        calls += 1;
        return jsonResponse(200, dashboardBody("white"), { ETag: '"v1"' });
      });
      const api = new ApiClient("http://test", fetcher.fetch);
      const poller = new DashboardPoller(api, "r1", 5);
      poller.start();
      poller.start(); // deduplicated
      await vi.advanceTimersByTimeAsync(15_000);
      poller.stop();
      await vi.advanceTimersByTimeAsync(30_000);
      expect(calls).toBe(4); // immediate + 3 ticks
    });
  });
});
