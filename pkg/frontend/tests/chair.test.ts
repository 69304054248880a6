import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ChairConsole, OVERVIEW_TABS } from "../src/chair.js";
import { ScriptedFetch, jsonResponse } from "./fake.js";

describe("ChairConsole", () => {
  it("loads each overview tab from its endpoint", async () => {
    const fetcher = new ScriptedFetch();
    for (const kind of OVERVIEW_TABS) {
      fetcher.on("GET", `/overviews/${kind}`, () =>
        jsonResponse(200, [{ kind }]),
      );
    }
    const console_ = new ChairConsole(new ApiClient("http://test", fetcher.fetch));
    for (const kind of OVERVIEW_TABS) {
      const rows = await console_.loadTab(kind);
      expect(rows).toEqual([{ kind }]);
    }
    expect(fetcher.requests).toHaveLength(OVERVIEW_TABS.length);
  });

  it("builds the accept set by toggling", () => {
    const console_ = new ChairConsole(new ApiClient("http://test"));
    console_.toggleAccept(2);
    console_.toggleAccept(5);
    console_.toggleAccept(2);
    expect([...console_.acceptSet]).toEqual([5]);
  });

  it("records decisions and keeps the set on atomic failure", async () => {
    let fail = true;
    const fetcher = new ScriptedFetch().on("POST", "/decisions", (req) => {
      if (fail) return jsonResponse(404, { detail: "unknown paper 9" });
      const body = JSON.parse(req.body!);
      return jsonResponse(201, { accepted: body.accept, rejected: [3] });
    });
    const console_ = new ChairConsole(new ApiClient("http://test", fetcher.fetch));
    console_.toggleAccept(9);

    await expect(console_.recordDecisions()).rejects.toThrowError();
    expect(console_.decided).toBeNull();
    expect(console_.acceptSet.has(9)).toBe(true); // nothing applied

    fail = false;
    console_.acceptSet = new Set([1, 2]);
    const record = await console_.recordDecisions();
    expect(record).toEqual({ accepted: [1, 2], rejected: [3] });
    expect(console_.decided).toEqual(record);
  });

  it("fetches the distribution report", async () => {
    const fetcher = new ScriptedFetch().on("GET", "/distribution/report", () =>
      jsonResponse(200, { totals: { papers: 3 } }),
    );
    const console_ = new ChairConsole(new ApiClient("http://test", fetcher.fetch));
    const report = (await console_.loadDistributionReport()) as any;
    expect(report.totals.papers).toBe(3);
  });
});
