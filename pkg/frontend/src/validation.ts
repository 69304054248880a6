/**
 * Client-side checks for the phase-1 submission form. Mirrors the
 * service's validation so obviously broken forms never leave the browser;
 * the server remains the authority and its 422 findings are shown as-is.
 */

import type { PaperForm } from "./api.js";

export function validatePaperForm(
  form: PaperForm,
  knownTopicIds: number[],
): string[] {
  const findings: string[] = [];
  if (!form.title.trim()) {
    findings.push("title empty");
  }
  if (!form.abstract.trim()) {
    findings.push("abstract empty");
  }
  if (form.topics.length === 0) {
    findings.push("topics empty");
  }
  const known = new Set(knownTopicIds);
  for (const tid of [...form.topics].sort((a, b) => a - b)) {
    if (!known.has(tid)) {
      findings.push(`unknown topic ${tid}`);
    }
  }
  if (form.authors.length === 0) {
    findings.push("no authors");
  }
  for (const [i, author] of form.authors.entries()) {
    if (!author.first_name.trim() || !author.last_name.trim()) {
      findings.push(`author ${i + 1} name incomplete`);
    }
  }
  if (!form.contact.email.trim()) {
    findings.push("contact email empty");
  }
  return findings;
}
