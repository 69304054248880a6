import { describe, expect, it } from "vitest";

import type { DashboardPaper, Review } from "../src/api.js";
import { BiddingModel } from "../src/bidding.js";
import {
  escapeHtml,
  renderBiddingRow,
  renderDashboard,
  renderOverviewTable,
  renderPaperBox,
  renderPaperDetail,
} from "../src/render.js";

function paper(state: string): DashboardPaper {
  return {
    paper_id: 12,
    title: "Types & Things <b>",
    abstract: "All about <things>.",
    state,
    own_review_submitted: false,
    file_link: "/papers/12/file",
    reviews_link: "/papers/12/reviews",
    messages_link: "/papers/12/messages",
  };
}

const REVIEW: Review = {
  paper_id: 12,
  reviewer_id: "r2",
  classification: "D",
  expertise: "X",
  comments_for_authors: "needs work",
  submitted_at: 1,
  updated_at: 1,
};

describe("renderers", () => {
  it("uses the wire state name verbatim as the box class", () => {
    for (const state of [
      "white", "pink", "lightgreen", "orange", "green",
      "lightyellow", "yellow", "red", "gold", "grey",
    ]) {
      const html = renderPaperBox(paper(state));
      expect(html).toContain(`class="paper-box ${state}"`);
      expect(html).toContain(`data-paper="12"`);
    }
  });

  it("shows the stale banner only when stale", () => {
    const data = { reviewer_id: "r1", papers: [paper("white")] };
    expect(renderDashboard(data, false)).not.toContain("stale-banner");
    expect(renderDashboard(data, true)).toContain("stale-banner");
  });

  it("escapes HTML in titles and abstracts", () => {
    const html = renderPaperDetail(paper("white"), null);
    expect(html).toContain("Types &amp; Things &lt;b&gt;");
    expect(html).not.toContain("<b>");
  });

  it("renders other reviews and the composer only when provided", () => {
    const closed = renderPaperDetail(paper("white"), null);
    expect(closed).not.toContain("other-reviews");
    expect(closed).not.toContain("message-composer");
    expect(closed).not.toContain("needs work");

    const open = renderPaperDetail(paper("pink"), [REVIEW]);
    expect(open).toContain("other-reviews");
    expect(open).toContain("message-composer");
    expect(open).toContain("needs work");
  });

  it("disables bid controls on conflicted rows", () => {
    const model = new BiddingModel();
    model.coi.add(3);
    const html = renderBiddingRow(model, {
      paper_id: 3,
      title: "T",
      abstract: "A",
    });
    expect(html).toContain("coi");
    expect(html).toContain(" disabled");
  });

  it("shows the effective priority as selected", () => {
    const model = new BiddingModel();
    model.effective.set(4, "low");
    const html = renderBiddingRow(model, {
      paper_id: 4,
      title: "T",
      abstract: "A",
    });
    expect(html).toContain(`<option value="low" selected>`);
    expect(html).toContain("checked");
  });

  it("tags the state column of overview tables with the state class", () => {
    const html = renderOverviewTable("all", [
      { paper_id: 1, state: "red", title: "x" },
    ]);
    expect(html).toContain(`class="state red"`);
  });

  it("escapeHtml handles every special character", () => {
    expect(escapeHtml(`<a href="x">&'`)).toBe(
      "&lt;a href=&quot;x&quot;&gt;&amp;&#39;",
    );
  });

  it("overview cells reproduce the API rows exactly (DOM vs JSON)", () => {
    const rows = [
      { key: "AAB", papers: [{ paper_id: 4, title: "T4" }] },
      { key: "BD", papers: [{ paper_id: 2, title: "T2" }] },
    ];
    const html = renderOverviewTable("categories", rows);
    const cellText = [...html.matchAll(/<td[^>]*>(.*?)<\/td>/g)].map((m) => m[1]);
    const expected = rows.flatMap((row) => [
      escapeHtml(row.key),
      escapeHtml(JSON.stringify(row.papers)),
    ]);
    expect(cellText).toEqual(expected);
  });
});
