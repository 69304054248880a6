import { describe, expect, it } from "vitest";

import { ApiClient, type PaperForm } from "../src/api.js";
import { SubmissionWizard } from "../src/wizard.js";
import { ScriptedFetch, jsonResponse } from "./fake.js";

function form(overrides: Partial<PaperForm> = {}): PaperForm {
  return {
    title: "A Study",
    abstract: "We study.",
    contact: { name: "Ann", email: "ann@example.org" },
    authors: [{ first_name: "Ann", last_name: "Smith" }],
    topics: [1],
    ...overrides,
  };
}

function wizardWith(fetcher: ScriptedFetch) {
  const api = new ApiClient("http://test", fetcher.fetch);
  return new SubmissionWizard(api, [1, 2]);
}

describe("SubmissionWizard", () => {
  it("blocks locally invalid forms without sending a request", async () => {
    const fetcher = new ScriptedFetch();
    const wizard = wizardWith(fetcher);
    const state = await wizard.submitMetadata(form({ topics: [] }));
    expect(state).toEqual({ step: "metadata", errors: ["topics empty"] });
    expect(fetcher.requests).toHaveLength(0);
  });

  it("shows id and login after a successful phase 1", async () => {
    const fetcher = new ScriptedFetch().on("POST", "/papers", () =>
      jsonResponse(201, { id: 7, login: "paper7", warnings: [] }),
    );
    const wizard = wizardWith(fetcher);
    const state = await wizard.submitMetadata(form());
    expect(state).toEqual({
      step: "credentials",
      paperId: 7,
      login: "paper7",
      warnings: [],
    });
  });

  it("surfaces server 422 findings inline", async () => {
    const fetcher = new ScriptedFetch().on("POST", "/papers", () =>
      jsonResponse(422, { detail: ["abstract empty"] }),
    );
    const wizard = wizardWith(fetcher);
    const state = await wizard.submitMetadata(form());
    expect(state).toEqual({ step: "metadata", errors: ["abstract empty"] });
  });

  it("prompts for auth when phase 2 starts without credentials", async () => {
    const fetcher = new ScriptedFetch().on("POST", "/papers", () =>
      jsonResponse(201, { id: 7, login: "paper7", warnings: [] }),
    );
    const wizard = wizardWith(fetcher);
    await wizard.submitMetadata(form());
    const state = await wizard.uploadPaper(new Uint8Array([1]), "p.pdf");
    expect(state.step).toBe("auth-prompt");
    expect(fetcher.requests).toHaveLength(1); // only the metadata POST
  });

  it("uploads once credentials are entered", async () => {
    const fetcher = new ScriptedFetch()
      .on("POST", "/papers", () =>
        jsonResponse(201, { id: 7, login: "paper7", warnings: [] }),
      )
      .on("PUT", "/papers/7/file", (req) => {
        expect(req.headers["authorization"]).toMatch(/^Basic /);
        return jsonResponse(200, { id: 7, status: "full-paper-uploaded" });
      });
    const wizard = wizardWith(fetcher);
    await wizard.submitMetadata(form());
    wizard.enterCredentials("mailed-password");
    const state = await wizard.uploadPaper(new Uint8Array([1, 2, 3]), "p.pdf");
    expect(state).toEqual({ step: "uploaded", paperId: 7 });
  });

  it("returns to the auth prompt on a 401 upload", async () => {
    const fetcher = new ScriptedFetch()
      .on("POST", "/papers", () =>
        jsonResponse(201, { id: 7, login: "paper7", warnings: [] }),
      )
      .on("PUT", "/papers/7/file", () =>
        jsonResponse(401, { detail: "invalid credentials" }),
      );
    const wizard = wizardWith(fetcher);
    await wizard.submitMetadata(form());
    wizard.enterCredentials("wrong");
    const state = await wizard.uploadPaper(new Uint8Array([1]), "p.pdf");
    expect(state.step).toBe("auth-prompt");
  });
});
