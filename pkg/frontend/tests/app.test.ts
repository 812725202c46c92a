/** Application-level tests over an in-memory audit service, using the real
 * graph documents emitted by the evaluation pipeline as fixtures. */

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { AuditApp } from "../src/main.js";
import { FakeServer, buildElements, loadFixture } from "./helpers.js";

function makeApp(server: FakeServer): { app: AuditApp; el: ReturnType<typeof buildElements> } {
  document.body.innerHTML = "";
  const el = buildElements();
  const app = new AuditApp(new ApiClient("http://fake", server.fetch), el);
  return { app, el };
}

function clickNode(el: ReturnType<typeof buildElements>, nodeId: string): void {
  const node = el.graph.querySelector<SVGElement>(`[data-node-id='${nodeId}']`);
  expect(node, `node ${nodeId} should be rendered`).toBeTruthy();
  node!.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

describe("AuditApp", () => {
  let server: FakeServer;

  beforeEach(() => {
    server = new FakeServer();
    server.addRevision(loadFixture("revision1.json"), "contradicted output");
  });

  it("loads a session and renders the latest revision", async () => {
    const { app, el } = makeApp(server);
    await app.loadSession(server.sessionId);
    expect(app.revision).toBe(1);
    expect(el.graph.querySelectorAll(".node").length).toBeGreaterThan(0);
    expect(el.status.textContent).toContain("verdict hallucinated");
    expect(el.editor.value).toBe("contradicted output");
  });

  it("clicking an output node shows its matched source claims", async () => {
    const { app, el } = makeApp(server);
    await app.loadSession(server.sessionId);
    const doc = loadFixture("revision1.json");
    const red = doc.nodes.find((n) => n.color === "red")!;
    clickNode(el, red.id);
    expect(el.panel.textContent).toContain(red.text);
    const matches = el.panel.querySelectorAll(".match-item");
    const expected = doc.edges.filter((e) => e.source === red.id).length;
    expect(matches).toHaveLength(expected);
    expect(el.panel.textContent).toContain("similarity");
    expect(el.panel.textContent).toContain("contradict");
  });

  it("clicking a source node lists the output claims referencing it", async () => {
    const { app, el } = makeApp(server);
    await app.loadSession(server.sessionId);
    const doc = loadFixture("revision1.json");
    const source = doc.nodes.find((n) => n.origin === "source")!;
    clickNode(el, source.id);
    expect(el.panel.textContent).toContain("Referenced by output claims");
  });

  it("feedback round-trips and persists across a page reload", async () => {
    const { app, el } = makeApp(server);
    await app.loadSession(server.sessionId);
    const doc = loadFixture("revision1.json");
    const red = doc.nodes.find((n) => n.color === "red")!;
    clickNode(el, red.id);
    const select = el.panel.querySelector<HTMLSelectElement>("select")!;
    select.value = "confirm_hallucination";
    const comment = el.panel.querySelector<HTMLTextAreaElement>("textarea")!;
    comment.value = "checked against the source";
    el.panel.querySelector("form")!.dispatchEvent(new Event("submit", { bubbles: true }));
    await Promise.resolve();
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(server.feedback).toHaveLength(1);
    expect(server.feedback[0]!.claim_id).toBe(red.id);

    // "Reload": a fresh app instance over the same server state.
    const reloaded = makeApp(server);
    await reloaded.app.loadSession(server.sessionId);
    clickNode(reloaded.el, red.id);
    expect(reloaded.el.panel.textContent).toContain("confirm_hallucination");
    expect(reloaded.el.panel.textContent).toContain("checked against the source");
  });

  it("failed feedback POST keeps the draft and flags a retry", async () => {
    const { app, el } = makeApp(server);
    await app.loadSession(server.sessionId);
    const doc = loadFixture("revision1.json");
    const red = doc.nodes.find((n) => n.color === "red")!;
    clickNode(el, red.id);
    const comment = el.panel.querySelector<HTMLTextAreaElement>("textarea")!;
    comment.value = "draft to keep";
    server.failNextFeedback = true;
    el.panel.querySelector("form")!.dispatchEvent(new Event("submit", { bubbles: true }));
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(server.feedback).toHaveLength(0);
    expect(el.status.textContent).toContain("retry");
    // The panel was not re-rendered; the draft comment survives.
    expect(el.panel.querySelector<HTMLTextAreaElement>("textarea")!.value)
      .toBe("draft to keep");
  });

  it("re-evaluating the edited output turns the red node green in revision 2", async () => {
    const { app, el } = makeApp(server);
    await app.loadSession(server.sessionId);
    const rev1 = loadFixture("revision1.json");
    const redId = rev1.nodes.find((n) => n.color === "red")!.id;
    const redFill = el.graph
      .querySelector<SVGElement>(`[data-node-id='${redId}']`)!
      .getAttribute("fill");
    expect(redFill).toBe("#d23f3f");

    server.nextDocument = loadFixture("revision2.json");
    el.editor.value = "corrected output";
    el.reevaluateButton.dispatchEvent(new Event("click"));
    await new Promise((resolve) => setTimeout(resolve, 0));

    expect(app.revision).toBe(2);
    const rev2 = loadFixture("revision2.json");
    const fills = [...el.graph.querySelectorAll<SVGElement>("circle.node")]
      .map((n) => n.getAttribute("fill"));
    expect(fills.every((f) => f === "#2e9e4f")).toBe(true);
    expect(el.status.textContent).toContain("verdict consistent");
    expect(rev2.response.label).toBe("consistent");
  });

  it("revision selector flips between both graphs of a 2-revision session", async () => {
    server.nextDocument = loadFixture("revision2.json");
    const { app, el } = makeApp(server);
    await app.loadSession(server.sessionId);
    await app.reevaluate();
    expect(el.revisionSelect.options).toHaveLength(2);

    el.revisionSelect.value = "1";
    el.revisionSelect.dispatchEvent(new Event("change"));
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(app.revision).toBe(1);
    expect(el.status.textContent).toContain("verdict hallucinated");

    el.revisionSelect.value = "2";
    el.revisionSelect.dispatchEvent(new Event("change"));
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(app.revision).toBe(2);
    expect(el.status.textContent).toContain("verdict consistent");
  });

  it("renders an error panel for unsupported schema versions", async () => {
    const doc = loadFixture("revision1.json") as unknown as { schema_version: number };
    doc.schema_version = 99;
    server.revisions = [];
    server.addRevision(doc as never, "whatever");
    const { app, el } = makeApp(server);
    await app.loadSession(server.sessionId);
    expect(el.graph.querySelector(".error-panel")).toBeTruthy();
    expect(el.graph.querySelectorAll(".node")).toHaveLength(0);
  });
});
