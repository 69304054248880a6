/**
 * Browser glue: login, hash routing between the author wizard, the
 * bidding browser, the reviewer dashboard and the chair console. All
 * behavior lives in the imported models; this file only touches the DOM.
 */

import { ApiClient, type PaperForm, type Topic } from "./api.js";
import { BiddingModel } from "./bidding.js";
import { ChairConsole, OVERVIEW_TABS } from "./chair.js";
import { DashboardPoller } from "./dashboard.js";
import {
  escapeHtml,
  renderBiddingRow,
  renderDashboard,
  renderOverviewTable,
  renderPaperDetail,
} from "./render.js";
import { SubmissionWizard } from "./wizard.js";

const api = new ApiClient("");
let topics: Topic[] = [];
let login = "";

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function readForm(): PaperForm {
  const val = (id: string) => (el(id) as HTMLInputElement).value;
  const checked = [...document.querySelectorAll<HTMLInputElement>(".topic-box:checked")];
  return {
    title: val("f-title"),
    abstract: val("f-abstract"),
    contact: { name: val("f-contact-name"), email: val("f-contact-email") },
    authors: val("f-authors")
      .split(";")
      .map((chunk) => chunk.trim())
      .filter(Boolean)
      .map((name) => {
        const [first = "", ...rest] = name.split(/\s+/);
        return { first_name: first, last_name: rest.join(" "), affiliation: "" };
      }),
    topics: checked.map((box) => Number(box.value)),
    remarks: "",
  };
}

async function showSubmission(): Promise<void> {
  const wizard = new SubmissionWizard(api, topics.map((t) => t.id));
  const boxes = topics
    .map(
      (t) =>
        `<label><input class="topic-box" type="checkbox" value="${t.id}"> ${escapeHtml(t.name)}</label>`,
    )
    .join("<br>");
  el("main").innerHTML = `
    <h1>Submission: step 1</h1>
    <div id="wizard-errors" class="errors"></div>
    <input id="f-title" placeholder="Title">
    <textarea id="f-abstract" placeholder="Abstract"></textarea>
    <input id="f-contact-name" placeholder="Contact name">
    <input id="f-contact-email" placeholder="Contact email">
    <input id="f-authors" placeholder="Authors (First Last; First Last)">
    <fieldset>${boxes}</fieldset>
    <button id="submit-meta">Submit abstract</button>
    <div id="wizard-next"></div>`;
  el("submit-meta").onclick = async () => {
    const state = await wizard.submitMetadata(readForm());
    if (state.step === "metadata") {
      el("wizard-errors").innerHTML = state.errors
        .map((e) => `<p class="error">${escapeHtml(e)}</p>`)
        .join("");
      return;
    }
    if (state.step === "credentials") {
      el("wizard-next").innerHTML = `
        <h2>Registered as paper ${state.paperId}</h2>
        <p>Login <code>${escapeHtml(state.login)}</code>; the password is in your mail.</p>
        <input id="f-password" type="password" placeholder="Password from email">
        <input id="f-file" type="file">
        <button id="upload">Upload full paper</button>`;
      el("upload").onclick = async () => {
        wizard.enterCredentials((el("f-password") as HTMLInputElement).value);
        const picker = el("f-file") as HTMLInputElement;
        const file = picker.files?.[0];
        if (!file) return;
        const result = await wizard.uploadPaper(file, file.name);
        el("wizard-next").innerHTML =
          result.step === "uploaded"
            ? `<p>Full paper stored for paper ${result.paperId}.</p>`
            : `<p class="error">Authentication needed; check the password.</p>`;
      };
    }
  };
}

async function showBidding(): Promise<void> {
  const model = new BiddingModel();
  await model.refresh(api);
  const sections = await Promise.all(topics.map((t) => api.topicAbstracts(t.id)));
  const tables = sections
    .map(
      (section) => `
      <h2>${escapeHtml(section.topic_name)}</h2>
      <table>${section.papers.map((p) => renderBiddingRow(model, p)).join("")}</table>`,
    )
    .join("");
  el("main").innerHTML = `
    <h1>Bidding</h1>
    <div id="bid-errors" class="errors"></div>
    ${tables}
    <button id="send-bids">Submit bids</button>`;
  document.querySelectorAll<HTMLTableRowElement>(".bid-row").forEach((row) => {
    const paperId = Number(row.dataset.paper);
    const checkbox = row.querySelector<HTMLInputElement>("input[type=checkbox]")!;
    const select = row.querySelector<HTMLSelectElement>("select")!;
    const sync = () => {
      if (checkbox.checked) {
        model.select(paperId, select.value as "high" | "low");
      } else {
        model.unselect(paperId);
      }
    };
    checkbox.onchange = sync;
    select.onchange = sync;
  });
  el("send-bids").onclick = async () => {
    await model.submit(api);
    el("bid-errors").innerHTML = model.lastRejections
      .map((r) => `<p class="error">paper ${r.paper_id}: ${escapeHtml(r.reason)}</p>`)
      .join("");
    location.reload();
  };
}

async function showDashboard(): Promise<void> {
  const health = await api.health();
  void health;
  const poller = new DashboardPoller(api, login, pollSeconds(), (data) => {
    el("boxes").innerHTML = renderDashboard(data, poller.stale);
    wireBoxes();
  });
  el("main").innerHTML = `<h1>Your papers</h1><div id="boxes"></div><div id="detail"></div>`;

  function wireBoxes(): void {
    document.querySelectorAll<HTMLButtonElement>(".paper-box").forEach((box) => {
      box.onclick = async () => {
        const paperId = Number(box.dataset.paper);
        const paper = poller.lastGood?.papers.find((p) => p.paper_id === paperId);
        if (!paper) return;
        const others = paper.own_review_submitted
          ? await api.paperReviews(paperId)
          : null;
        el("detail").innerHTML = renderPaperDetail(paper, others);
      };
    });
  }

  poller.start();
}

function pollSeconds(): number {
  const fromHash = new URLSearchParams(location.hash.split("?")[1] ?? "");
  return Number(fromHash.get("poll") ?? "300");
}

async function showChair(): Promise<void> {
  const console_ = new ChairConsole(api);
  const tabs = OVERVIEW_TABS.map(
    (kind) => `<button class="tab" data-kind="${kind}">${kind}</button>`,
  ).join("");
  el("main").innerHTML = `
    <h1>Chair console</h1>
    <nav>${tabs}<button class="tab" data-kind="report">distribution report</button></nav>
    <div id="tab-body"></div>
    <h2>Decisions</h2>
    <input id="accept-ids" placeholder="accept ids, comma separated">
    <button id="decide">Record decisions</button>
    <div id="decision-result"></div>`;
  document.querySelectorAll<HTMLButtonElement>(".tab").forEach((tab) => {
    tab.onclick = async () => {
      const kind = tab.dataset.kind!;
      if (kind === "report") {
        const report = await console_.loadDistributionReport();
        el("tab-body").innerHTML = `<pre>${escapeHtml(JSON.stringify(report, null, 2))}</pre>`;
        return;
      }
      const rows = await console_.loadTab(kind as (typeof OVERVIEW_TABS)[number]);
      el("tab-body").innerHTML = renderOverviewTable(kind, rows);
    };
  });
  el("decide").onclick = async () => {
    console_.acceptSet = new Set(
      (el("accept-ids") as HTMLInputElement).value
        .split(",")
        .map((chunk) => Number(chunk.trim()))
        .filter((n) => Number.isFinite(n) && n > 0),
    );
    try {
      const record = await console_.recordDecisions();
      el("decision-result").textContent =
        `accepted ${record.accepted.join(", ") || "none"}; rejected ${record.rejected.join(", ") || "none"}`;
    } catch (error) {
      el("decision-result").textContent = `error (nothing applied): ${String(error)}`;
    }
  };
}

async function route(): Promise<void> {
  const hash = location.hash.split("?")[0];
  if (hash === "#bidding") return showBidding();
  if (hash === "#dashboard") return showDashboard();
  if (hash === "#chair") return showChair();
  return showSubmission();
}

async function boot(): Promise<void> {
  topics = await api.topics();
  el("login-go").onclick = () => {
    login = (el("login-user") as HTMLInputElement).value;
    api.setAuth(login, (el("login-pass") as HTMLInputElement).value);
    void route();
  };
  window.addEventListener("hashchange", () => void route());
  void route();
}

void boot();
