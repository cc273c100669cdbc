import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import { categoryColor } from "./colors.js";
import type { MapView } from "./mapview.js";
import type { AnalysisPayload } from "./types.js";

function fmt(value: number, digits = 1): string {
  return value.toFixed(digits);
}

/** Ranked alternatives on the map plus a what-if comparison panel.
 *
 *  Every number shown comes straight from the analysis payload: delta badges
 *  are the per-alternative delta_ugm3 fields, risk factors the benefit
 *  entries the server computed for the best-ranked route. Nothing is
 *  recomputed client-side.
 */
export class AlternativesView {
  analysis: AnalysisPayload | null = null;
  selected: number | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly map: MapView,
    private readonly listEl: HTMLElement,
    private readonly panelEl: HTMLElement,
  ) {}

  /** Fetch and render the stored analysis; a 409 becomes a call-to-action. */
  async load(routeKey: string): Promise<void> {
    try {
      this.render(await this.api.getAnalysis(routeKey));
    } catch (err) {
      if (err instanceof ApiError && (err.status === 409 || err.status === 404)) {
        this.analysis = null;
        this.listEl.innerHTML = "";
        this.panelEl.innerHTML = "";
        const note = this.listEl.ownerDocument.createElement("p");
        note.className = "cta";
        note.textContent =
          err.status === 409
            ? "No analysis yet for this route. Request one to see alternatives."
            : "Unknown route.";
        this.listEl.appendChild(note);
        return;
      }
      throw err;
    }
  }

  /** Run the analysis server-side, then render it. */
  async request(routeKey: string, k?: number, hour?: number): Promise<void> {
    this.render(await this.api.requestAnalysis(routeKey, k, hour));
  }

  render(analysis: AnalysisPayload): void {
    this.analysis = analysis;
    this.selected = null;
    const doc = this.listEl.ownerDocument;
    this.map.clearRoutes("alt-");
    this.map.removeRoute("current");
    this.listEl.innerHTML = "";
    this.panelEl.innerHTML = "";

    this.map.drawRoute("current", analysis.current.geometry, {
      color: categoryColor(analysis.current.exposure.category),
      width: 4,
    });
    const currentItem = doc.createElement("li");
    currentItem.className = "route-entry current";
    currentItem.textContent =
      `current (${analysis.current.mode}): ${fmt(analysis.current.length_m, 0)} m, ` +
      `${fmt(analysis.current.exposure.mean_ugm3)} ug/m3 [${analysis.current.exposure.category}]`;
    this.listEl.appendChild(currentItem);

    if (!analysis.alternatives.length) {
      const empty = doc.createElement("p");
      empty.className = "empty-state";
      empty.textContent = "No feasible cleaner route was found for this trip.";
      this.listEl.appendChild(empty);
      return;
    }

    analysis.alternatives.forEach((alt, i) => {
      this.map.drawRoute(`alt-${i}`, alt.route.geometry, {
        color: categoryColor(alt.exposure.category),
        dashed: true,
      });
      const item = doc.createElement("li");
      item.className = "route-entry";
      item.setAttribute("data-alt", String(i));
      const badge = doc.createElement("span");
      badge.className = "delta-badge";
      badge.textContent = `${fmt(alt.delta_ugm3)} ug/m3`;
      item.textContent =
        `alternative ${i + 1} (${alt.route.mode}): ${fmt(alt.route.length_m, 0)} m, ` +
        `${fmt(alt.exposure.mean_ugm3)} ug/m3 [${alt.exposure.category}] `;
      item.appendChild(badge);
      item.addEventListener("click", () => this.select(i));
      this.listEl.appendChild(item);
    });
  }

  /** What-if comparison for one alternative, from payload fields only. */
  select(index: number): void {
    if (!this.analysis) return;
    const alt = this.analysis.alternatives[index];
    if (!alt) return;
    this.selected = index;
    const doc = this.panelEl.ownerDocument;
    this.panelEl.innerHTML = "";

    const title = doc.createElement("h3");
    title.textContent = `alternative ${index + 1}`;
    this.panelEl.appendChild(title);

    const rows: Array<[string, string]> = [
      ["reduction", `${fmt(alt.delta_ugm3)} ug/m3`],
      ["category shift", `${this.analysis.current.exposure.category} → ${alt.exposure.category}`],
      ["length", `${fmt(alt.route.length_m, 0)} m`],
      ["mean exposure", `${fmt(alt.exposure.mean_ugm3)} ug/m3`],
    ];
    const dl = doc.createElement("dl");
    for (const [label, value] of rows) {
      const dt = doc.createElement("dt");
      dt.textContent = label;
      const dd = doc.createElement("dd");
      dd.textContent = value;
      dd.setAttribute("data-field", label.replace(/ /g, "-"));
      dl.appendChild(dt);
      dl.appendChild(dd);
    }
    this.panelEl.appendChild(dl);

    if (index === 0 && this.analysis.benefit.risk_ratios.length) {
      const list = doc.createElement("ul");
      list.className = "risk-ratios";
      for (const [modelId, factor] of this.analysis.benefit.risk_ratios) {
        const li = doc.createElement("li");
        li.textContent = `${modelId}: ${factor.toFixed(4)}`;
        li.setAttribute("data-model", modelId);
        list.appendChild(li);
      }
      this.panelEl.appendChild(list);
    } else if (index > 0) {
      const note = doc.createElement("p");
      note.className = "note";
      note.textContent = "Risk factors are reported for the best-ranked alternative.";
      this.panelEl.appendChild(note);
    }
  }
}
