import type { ApiClient } from "./api.js";

export const EXPECTED_SECTIONS = ["context", "feedback", "benefits", "tips"] as const;

/** Section ids of an information-package document, in document order. */
export function packageSections(html: string): string[] {
  const ids: string[] = [];
  const re = /<section id="([a-z]+)">/g;
  let match: RegExpExecArray | null;
  while ((match = re.exec(html)) !== null) ids.push(match[1]!);
  return ids;
}

/** Inline viewer for the hypertext information package.
 *
 *  The document is self-contained (inline styles and SVG map, no external
 *  fetches), so it goes into a sandboxed iframe verbatim.
 */
export class PackageView {
  html: string | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly frame: HTMLIFrameElement,
  ) {
    frame.setAttribute("sandbox", "");
  }

  async show(packageId: string): Promise<string[]> {
    const html = await this.api.getPackageHtml(packageId);
    const sections = packageSections(html);
    if (sections.join(",") !== EXPECTED_SECTIONS.join(",")) {
      throw new Error(`package document has unexpected sections: ${sections.join(", ")}`);
    }
    this.html = html;
    this.frame.srcdoc = html;
    return sections;
  }
}
