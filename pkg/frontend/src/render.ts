/**
 * HTML renderers. Pure string producers so they test without a DOM.
 *
 * Paper boxes use the wire state name verbatim as a CSS class; the palette
 * lives in the stylesheet and no color logic exists in script. Another
 * reviewer's review text renders only when the caller passes data the API
 * actually returned.
 */

import type { DashboardData, DashboardPaper, Review } from "./api.js";
import type { BiddingModel } from "./bidding.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function renderPaperBox(paper: DashboardPaper): string {
  return (
    `<button class="paper-box ${paper.state}" data-paper="${paper.paper_id}">` +
    `${paper.paper_id}</button>`
  );
}

export function renderDashboard(data: DashboardData, stale: boolean): string {
  const banner = stale
    ? `<div class="stale-banner">connection lost; showing the last good state</div>`
    : "";
  const boxes = data.papers.map(renderPaperBox).join("");
  return `${banner}<div class="paper-boxes">${boxes}</div>`;
}

export function renderReview(review: Review): string {
  return (
    `<div class="review">` +
    `<span class="classification">${escapeHtml(review.classification)}</span>` +
    `<span class="expertise">${escapeHtml(review.expertise)}</span>` +
    `<p>${escapeHtml(review.comments_for_authors)}</p>` +
    `</div>`
  );
}

/**
 * Detail pane for one assigned paper: download link, abstract and the
 * review form always; other reviewers' reviews and the discussion
 * composer only once the API handed them over (i.e. after own submission).
 */
export function renderPaperDetail(
  paper: DashboardPaper,
  othersReviews: Review[] | null,
): string {
  const parts = [
    `<h2>Paper ${paper.paper_id}: ${escapeHtml(paper.title)}</h2>`,
    `<a class="download" href="${paper.file_link}">download</a>`,
    `<p class="abstract">${escapeHtml(paper.abstract)}</p>`,
    `<section class="review-form" data-paper="${paper.paper_id}"></section>`,
  ];
  if (othersReviews !== null) {
    parts.push(
      `<section class="other-reviews">` +
        othersReviews.map(renderReview).join("") +
        `</section>`,
    );
    parts.push(`<section class="message-composer" data-paper="${paper.paper_id}"></section>`);
  }
  return parts.join("\n");
}

export function renderBiddingRow(
  model: BiddingModel,
  paper: { paper_id: number; title: string; abstract: string },
): string {
  const disabled = model.isDisabled(paper.paper_id);
  const priority = model.displayedPriority(paper.paper_id);
  const flag = disabled ? " disabled" : "";
  const checked = priority !== null ? " checked" : "";
  const select =
    `<select class="priority"${flag}>` +
    ["high", "low"]
      .map(
        (level) =>
          `<option value="${level}"${priority === level ? " selected" : ""}>${level}</option>`,
      )
      .join("") +
    `</select>`;
  return (
    `<tr class="bid-row${disabled ? " coi" : ""}" data-paper="${paper.paper_id}">` +
    `<td><input type="checkbox"${checked}${flag}></td>` +
    `<td>${select}</td>` +
    `<td>${paper.paper_id}</td>` +
    `<td>${escapeHtml(paper.title)}</td>` +
    `</tr>`
  );
}

export function renderOverviewTable(kind: string, rows: unknown[]): string {
  if (rows.length === 0) {
    return `<p class="empty">nothing to show</p>`;
  }
  const keys = Object.keys(rows[0] as Record<string, unknown>);
  const head = keys.map((key) => `<th>${escapeHtml(key)}</th>`).join("");
  const body = rows
    .map((row) => {
      const cells = keys
        .map((key) => {
          const value = (row as Record<string, unknown>)[key];
          const text =
            typeof value === "object" ? JSON.stringify(value) : String(value);
          if (key === "state") {
            return `<td class="state ${escapeHtml(String(value))}">${escapeHtml(text)}</td>`;
          }
          return `<td>${escapeHtml(text)}</td>`;
        })
        .join("");
      return `<tr>${cells}</tr>`;
    })
    .join("");
  return `<table class="overview ${escapeHtml(kind)}"><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`;
}
