import { describe, expect, it } from "vitest";

import type { ApiClient } from "../../src/api.js";
import { EXPECTED_SECTIONS, packageSections, PackageView } from "../../src/packageview.js";

const GOOD_HTML = [
  "<!doctype html><html><body>",
  '<section id="context"><h2>a</h2></section>',
  '<section id="feedback"><h2>b</h2></section>',
  '<section id="benefits"><h2>c</h2></section>',
  '<section id="tips"><h2>d</h2></section>',
  "</body></html>",
].join("\n");

function view(html: string) {
  const api = { getPackageHtml: async () => html };
  const frame = document.createElement("iframe");
  document.body.appendChild(frame);
  return { view: new PackageView(api as unknown as ApiClient, frame), frame };
}

describe("package view", () => {
  it("extracts section ids in document order", () => {
    expect(packageSections(GOOD_HTML)).toEqual([...EXPECTED_SECTIONS]);
  });

  it("shows a well-formed package inline", async () => {
    const { view: v, frame } = view(GOOD_HTML);
    const sections = await v.show("k:v1");
    expect(sections).toEqual(["context", "feedback", "benefits", "tips"]);
    expect(frame.srcdoc).toContain('<section id="benefits">');
    expect(frame.getAttribute("sandbox")).toBe("");
  });

  it("rejects documents with missing or reordered sections", async () => {
    const { view: v } = view(GOOD_HTML.replace('<section id="benefits"><h2>c</h2></section>', ""));
    await expect(v.show("k:v1")).rejects.toThrow(/unexpected sections/);
  });
});
