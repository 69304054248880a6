/**
 * Two-step submission wizard.
 *
 * Step 1 posts the metadata and shows the assigned id and login (the
 * password travels by email only). Step 2 uploads the full paper with
 * those credentials; starting step 2 without captured credentials yields
 * an auth prompt instead of a doomed request. The same upload path with
 * a page count serves the camera-ready round after acceptance.
 */

import { ApiClient, ApiError, type PaperForm } from "./api.js";
import { validatePaperForm } from "./validation.js";

export type WizardStep =
  | { step: "metadata"; errors: string[] }
  | { step: "credentials"; paperId: number; login: string; warnings: string[] }
  | { step: "auth-prompt"; paperId: number; login: string }
  | { step: "upload"; paperId: number; login: string }
  | { step: "uploaded"; paperId: number };

export class SubmissionWizard {
  state: WizardStep = { step: "metadata", errors: [] };
  requestsSent = 0;

  constructor(
    private api: ApiClient,
    private knownTopicIds: number[],
  ) {}

  /** Phase 1. Client-side findings block the request entirely. */
  async submitMetadata(form: PaperForm): Promise<WizardStep> {
    const errors = validatePaperForm(form, this.knownTopicIds);
    if (errors.length > 0) {
      this.state = { step: "metadata", errors };
      return this.state;
    }
    try {
      this.requestsSent += 1;
      const reply = await this.api.submitPaper(form);
      this.state = {
        step: "credentials",
        paperId: reply.id,
        login: reply.login,
        warnings: reply.warnings,
      };
    } catch (error) {
      if (error instanceof ApiError) {
        const detail = Array.isArray(error.detail)
          ? error.detail.map(String)
          : [String(error.detail)];
        this.state = { step: "metadata", errors: detail };
      } else {
        throw error;
      }
    }
    return this.state;
  }

  /** The author typed in the mailed password; arm the client for step 2. */
  enterCredentials(password: string): WizardStep {
    if (this.state.step !== "credentials" && this.state.step !== "auth-prompt") {
      throw new Error(`cannot enter credentials at step ${this.state.step}`);
    }
    this.api.setAuth(this.state.login, password);
    this.state = {
      step: "upload",
      paperId: this.state.paperId,
      login: this.state.login,
    };
    return this.state;
  }

  /** Phase 2. Without credentials this degrades to an auth prompt. */
  async uploadPaper(data: Blob | Uint8Array, filename: string): Promise<WizardStep> {
    if (this.state.step === "credentials" || this.state.step === "auth-prompt") {
      this.state = {
        step: "auth-prompt",
        paperId: this.state.paperId,
        login: this.state.login,
      };
      return this.state;
    }
    if (this.state.step !== "upload") {
      throw new Error(`cannot upload at step ${this.state.step}`);
    }
    if (!this.api.hasAuth) {
      this.state = {
        step: "auth-prompt",
        paperId: this.state.paperId,
        login: this.state.login,
      };
      return this.state;
    }
    this.requestsSent += 1;
    try {
      await this.api.uploadFile(this.state.paperId, data, filename);
    } catch (error) {
      if (error instanceof ApiError && error.status === 401) {
        this.state = {
          step: "auth-prompt",
          paperId: this.state.paperId,
          login: this.state.login,
        };
        return this.state;
      }
      throw error;
    }
    this.state = { step: "uploaded", paperId: this.state.paperId };
    return this.state;
  }
}
