/**
 * Typed client for the review service's JSON API.
 *
 * The fetch implementation is injectable so models can be tested with a
 * scripted transport; everything else is a thin translation layer and the
 * client never interprets review data beyond the documented wire shapes.
 */

export interface Topic {
  id: number;
  name: string;
}

export interface ContactInfo {
  name: string;
  email: string;
  phone?: string;
  fax?: string;
  address?: string;
}

export interface AuthorName {
  first_name: string;
  last_name: string;
  affiliation?: string;
}

export interface PaperForm {
  title: string;
  abstract: string;
  contact: ContactInfo;
  authors: AuthorName[];
  topics: number[];
  remarks?: string;
}

export interface SubmissionReply {
  id: number;
  login: string;
  warnings: string[];
}

export type BidPriority = "high" | "low";

export interface Bid {
  reviewer_id: string;
  paper_id: number;
  priority: BidPriority;
  sequence: number;
}

export interface BidOutcome {
  applied: Bid[];
  rejected: { paper_id: number; reason: string }[];
  effective: Bid[];
}

export interface DashboardPaper {
  paper_id: number;
  title: string;
  abstract: string;
  state: string;
  own_review_submitted: boolean;
  file_link: string;
  reviews_link: string;
  messages_link: string;
}

export interface DashboardData {
  reviewer_id: string;
  papers: DashboardPaper[];
}

export interface Review {
  paper_id: number;
  reviewer_id: string;
  classification: string;
  expertise: string;
  comments_for_authors: string;
  comments_for_pc?: string;
  submitted_at: number;
  updated_at: number;
}

export interface AbstractListing {
  topic_id: number;
  topic_name: string;
  papers: { paper_id: number; title: string; abstract: string }[];
}

export type Fetcher = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown,
    public rule?: string,
  ) {
    super(typeof detail === "string" ? detail : JSON.stringify(detail));
  }
}

function toBase64(text: string): string {
  if (typeof btoa === "function") return btoa(text);
  // node fallback for tests on runtimes without btoa
  const buffer = (globalThis as Record<string, any>).Buffer;
  return buffer.from(text, "utf-8").toString("base64");
}

export class ApiClient {
  private auth: { login: string; password: string } | null = null;

  constructor(
    private baseUrl: string,
    private fetchImpl: Fetcher = (...args) => fetch(...args),
  ) {}

  setAuth(login: string, password: string): void {
    this.auth = { login, password };
  }

  clearAuth(): void {
    this.auth = null;
  }

  get hasAuth(): boolean {
    return this.auth !== null;
  }

  private headers(extra?: Record<string, string>): Record<string, string> {
    const headers: Record<string, string> = { ...extra };
    if (this.auth) {
      headers["Authorization"] =
        "Basic " + toBase64(`${this.auth.login}:${this.auth.password}`);
    }
    return headers;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method, headers: this.headers() };
    if (body !== undefined) {
      (init.headers as Record<string, string>)["Content-Type"] =
        "application/json";
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    return this.decode<T>(resp);
  }

  private async decode<T>(resp: Response): Promise<T> {
    if (resp.ok) {
      return (await resp.json()) as T;
    }
    let payload: { detail?: unknown; rule?: string } = {};
    try {
      payload = await resp.json();
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(resp.status, payload.detail ?? resp.statusText, payload.rule);
  }

  // -- public --------------------------------------------------------------

  health(): Promise<{ ok: boolean; version: number }> {
    return this.request("GET", "/health");
  }

  topics(): Promise<Topic[]> {
    return this.request("GET", "/topics");
  }

  submitPaper(form: PaperForm): Promise<SubmissionReply> {
    return this.request("POST", "/papers", form);
  }

  // -- authors ---------------------------------------------------------------

  updatePaper(paperId: number, form: PaperForm): Promise<unknown> {
    return this.request("PUT", `/papers/${paperId}`, form);
  }

  async uploadFile(
    paperId: number,
    data: Blob | Uint8Array,
    filename: string,
  ): Promise<unknown> {
    return this.uploadMultipart(`/papers/${paperId}/file`, data, filename);
  }

  async uploadCameraReady(
    paperId: number,
    data: Blob | Uint8Array,
    filename: string,
    pageCount: number,
  ): Promise<unknown> {
    return this.uploadMultipart(
      `/papers/${paperId}/camera-ready`,
      data,
      filename,
      { page_count: String(pageCount) },
    );
  }

  private async uploadMultipart(
    path: string,
    data: Blob | Uint8Array,
    filename: string,
    fields?: Record<string, string>,
  ): Promise<unknown> {
    const form = new FormData();
    const pristine = data instanceof Blob
      ? data
      : new Blob([data.buffer instanceof ArrayBuffer ? data.buffer : new Uint8Array(data).buffer]);
    form.append("file", pristine, filename);
    for (const [key, value] of Object.entries(fields ?? {})) {
      form.append(key, value);
    }
    const resp = await this.fetchImpl(this.baseUrl + path, {
      method: "PUT",
      headers: this.headers(),
      body: form,
    });
    return this.decode(resp);
  }

  // -- bidding ------------------------------------------------------------------

  topicAbstracts(topicId: number): Promise<AbstractListing> {
    return this.request("GET", `/topics/${topicId}/abstracts`);
  }

  submitBids(
    selections: { paper_id: number; priority: BidPriority }[],
  ): Promise<BidOutcome> {
    return this.request("POST", "/bids", { selections });
  }

  myBids(): Promise<{ effective: Bid[] }> {
    return this.request("GET", "/bids");
  }

  declareCoi(paperId: number): Promise<{ coi_papers: number[] }> {
    return this.request("POST", "/coi", { paper_id: paperId });
  }

  // -- reviewing --------------------------------------------------------------------

  /** Conditional GET: resolves to {status: 304} untouched when the server
   *  says nothing visible to this reviewer changed. */
  async dashboard(
    reviewerId: string,
    etag: string | null,
  ): Promise<
    | { status: 200; etag: string | null; data: DashboardData }
    | { status: 304; etag: string | null }
  > {
    const headers = this.headers();
    if (etag) headers["If-None-Match"] = etag;
    const resp = await this.fetchImpl(
      `${this.baseUrl}/reviewers/${reviewerId}/dashboard`,
      { method: "GET", headers },
    );
    if (resp.status === 304) {
      return { status: 304, etag: resp.headers.get("etag") ?? etag };
    }
    const data = await this.decode<DashboardData>(resp);
    return { status: 200, etag: resp.headers.get("etag"), data };
  }

  submitReview(body: {
    paper_id: number;
    classification: string;
    expertise: string;
    comments_for_authors?: string;
    comments_for_pc?: string;
  }): Promise<Review> {
    return this.request("POST", "/reviews", body);
  }

  paperReviews(paperId: number): Promise<Review[]> {
    return this.request("GET", `/papers/${paperId}/reviews`);
  }

  sendMessage(paperId: number, text: string): Promise<unknown> {
    return this.request("POST", `/papers/${paperId}/messages`, { text });
  }

  volunteer(paperId: number): Promise<{ paper_id: number; reviewers: string[] }> {
    return this.request("POST", `/papers/${paperId}/volunteer`);
  }

  // -- chair --------------------------------------------------------------------------

  overview(kind: string): Promise<unknown[]> {
    return this.request("GET", `/overviews/${kind}`);
  }

  distributionReport(): Promise<unknown> {
    return this.request("GET", "/distribution/report");
  }

  recordDecisions(accept: number[]): Promise<{ accepted: number[]; rejected: number[] }> {
    return this.request("POST", "/decisions", { accept });
  }
}
