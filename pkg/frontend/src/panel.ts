/**
 * Claim detail panel: text and scores for the selected node, its matched
 * source claims (with per-edge similarity and NLI components), the reverse
 * index for source nodes, and the feedback form.
 */

import { FeedbackInfo } from "./api.js";
import { GraphDocument } from "./schema.js";
import { MatchDetail, formatScore, nodeDetail } from "./viewmodel.js";

export interface FeedbackDraft {
  claimId: string;
  verdictOverride: "confirm_reliable" | "confirm_hallucination" | "dispute";
  comment: string;
}

export interface PanelCallbacks {
  onFeedback?: (draft: FeedbackDraft) => void;
}

function row(label: string, value: string): HTMLElement {
  const div = document.createElement("div");
  div.className = "detail-row";
  const key = document.createElement("span");
  key.className = "detail-key";
  key.textContent = label;
  const val = document.createElement("span");
  val.className = "detail-value";
  val.textContent = value;
  div.append(key, val);
  return div;
}

function matchList(title: string, matches: MatchDetail[]): HTMLElement {
  const section = document.createElement("section");
  section.className = "match-list";
  const heading = document.createElement("h3");
  heading.textContent = title;
  section.appendChild(heading);
  const list = document.createElement("ol");
  for (const match of matches) {
    const item = document.createElement("li");
    item.className = "match-item";
    item.dataset.nodeId = match.node.id;
    const text = document.createElement("p");
    text.textContent = match.node.text;
    item.appendChild(text);
    const stats = document.createElement("small");
    const nli = match.edge.nli;
    const verdict = nli
      ? ` | entail ${nli.entail.toFixed(3)}, neutral ${nli.neutral.toFixed(3)}, ` +
        `contradict ${nli.contradict.toFixed(3)}`
      : "";
    stats.textContent = `similarity ${match.edge.similarity.toFixed(3)}${verdict}`;
    item.appendChild(stats);
    list.appendChild(item);
  }
  section.appendChild(list);
  return section;
}

export function clearPanel(container: HTMLElement): void {
  container.replaceChildren();
  const hint = document.createElement("p");
  hint.className = "panel-hint";
  hint.textContent = "Select a claim to inspect it.";
  container.appendChild(hint);
}

export function renderPanel(
  container: HTMLElement,
  doc: GraphDocument,
  nodeId: string,
  feedback: FeedbackInfo[],
  revisionId: number,
  callbacks: PanelCallbacks = {},
): void {
  container.replaceChildren();
  const detail = nodeDetail(doc, nodeId);
  const node = detail.node;

  const heading = document.createElement("h2");
  heading.textContent = node.origin === "output" ? "Output claim" : "Source claim";
  container.appendChild(heading);

  const text = document.createElement("blockquote");
  text.className = "claim-text";
  text.textContent = node.text;
  container.appendChild(text);

  if (node.origin === "output") {
    container.appendChild(row("NLI score", formatScore(node.nli)));
    container.appendChild(row("avg similarity", formatScore(node.avg_sim)));
    container.appendChild(row("confidence", formatScore(node.confidence)));
    container.appendChild(row("quadrant", node.quadrant ?? "-"));
    container.appendChild(row("color", node.color ?? "-"));
  }

  if (detail.kind === "output") {
    container.appendChild(matchList("Matched source claims", detail.matches));
  } else {
    container.appendChild(matchList("Referenced by output claims", detail.referencedBy));
  }

  const existing = feedback.filter((f) => f.claim_id === nodeId);
  if (existing.length > 0) {
    const section = document.createElement("section");
    section.className = "feedback-list";
    const heading3 = document.createElement("h3");
    heading3.textContent = "Reviewer feedback";
    section.appendChild(heading3);
    for (const entry of existing) {
      const p = document.createElement("p");
      p.className = "feedback-entry";
      p.textContent =
        `[rev ${entry.revision_id}] ${entry.verdict_override}` +
        (entry.comment ? `: ${entry.comment}` : "");
      section.appendChild(p);
    }
    container.appendChild(section);
  }

  container.appendChild(feedbackForm(node.id, revisionId, callbacks));
}

function feedbackForm(
  claimId: string,
  revisionId: number,
  callbacks: PanelCallbacks,
): HTMLElement {
  const form = document.createElement("form");
  form.className = "feedback-form";
  form.dataset.claimId = claimId;

  const select = document.createElement("select");
  select.name = "verdict_override";
  for (const value of ["confirm_reliable", "confirm_hallucination", "dispute"]) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = value.replace(/_/g, " ");
    select.appendChild(option);
  }
  form.appendChild(select);

  const comment = document.createElement("textarea");
  comment.name = "comment";
  comment.placeholder = "optional comment";
  form.appendChild(comment);

  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = `Submit feedback (revision ${revisionId})`;
  form.appendChild(submit);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    callbacks.onFeedback?.({
      claimId,
      verdictOverride: select.value as FeedbackDraft["verdictOverride"],
      comment: comment.value,
    });
  });
  return form;
}
