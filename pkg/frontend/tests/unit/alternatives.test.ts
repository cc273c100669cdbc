import { beforeEach, describe, expect, it } from "vitest";

import { AlternativesView } from "../../src/alternatives.js";
import { ApiError } from "../../src/api.js";
import type { ApiClient } from "../../src/api.js";
import { MapView } from "../../src/mapview.js";
import type { AnalysisPayload } from "../../src/types.js";

function analysisFixture(): AnalysisPayload {
  return {
    route_key: "web:r1",
    participant_id: "parent-1",
    project_id: "web",
    k: 10,
    hour: 8,
    current: {
      mode: "walk",
      length_m: 600,
      exposure: { mean_ugm3: 55.0, category: "high", sample_count: 61, missing_count: 0 },
      geometry: [
        [0, 100],
        [600, 100],
      ],
    },
    alternatives: [
      {
        route: {
          mode: "walk",
          edge_ids: ["a", "b"],
          node_ids: ["n1", "n2", "n3"],
          length_m: 800,
          geometry: [
            [0, 100],
            [0, 200],
            [600, 200],
            [600, 100],
          ],
        },
        metrics: {
          length_m: 800,
          mean_gradient_pct: 0,
          total_crossings: 0,
          footpath_fraction: 1,
          bike_lane_fraction: 1,
        },
        feasibility: { R3: "pass" },
        exposure: { mean_ugm3: 31.2, category: "low", sample_count: 81, missing_count: 0 },
        delta_ugm3: 23.8,
      },
      {
        route: {
          mode: "walk",
          edge_ids: ["c"],
          node_ids: ["n1", "n3"],
          length_m: 800,
          geometry: [
            [0, 100],
            [300, 0],
            [600, 100],
          ],
        },
        metrics: {
          length_m: 800,
          mean_gradient_pct: 0,
          total_crossings: 1,
          footpath_fraction: 1,
          bike_lane_fraction: 1,
        },
        feasibility: { R3: "pass" },
        exposure: { mean_ugm3: 44.5, category: "moderate", sample_count: 81, missing_count: 0 },
        delta_ugm3: 10.5,
      },
    ],
    benefit: {
      delta_ugm3: 23.8,
      category_shift: ["high", "low"],
      risk_ratios: [
        ["hrapie-mortality", 1.1362],
        ["atkinson-all-cause", 1.0482],
      ],
    },
    snap: { home_node: "n1", home_distance_m: 0, school_node: "n3", school_distance_m: 0 },
  };
}

function build(api: unknown = {}) {
  document.body.innerHTML = '<svg id="m" xmlns="http://www.w3.org/2000/svg"></svg><ul id="l"></ul><div id="p"></div>';
  const map = new MapView(document.getElementById("m") as unknown as SVGSVGElement);
  const view = new AlternativesView(
    api as ApiClient,
    map,
    document.getElementById("l")!,
    document.getElementById("p")!,
  );
  return { map, view };
}

describe("alternatives view", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("draws one polyline per route with payload-matching color tokens", () => {
    const { map, view } = build();
    view.render(analysisFixture());
    const routes = map.routeElements();
    expect(routes.size).toBe(3); // current + 2 alternatives
    expect(routes.get("current")!.getAttribute("data-color")).toBe("red");
    expect(routes.get("alt-0")!.getAttribute("data-color")).toBe("green");
    expect(routes.get("alt-1")!.getAttribute("data-color")).toBe("yellow");
    expect(routes.get("alt-0")!.getAttribute("stroke-dasharray")).toBe("6 4");
    const entries = document.querySelectorAll("#l .route-entry");
    expect(entries).toHaveLength(3);
    expect(entries[1]!.textContent).toContain("alternative 1");
  });

  it("selection panel shows the payload delta, not a recomputation", () => {
    const { view } = build();
    const analysis = analysisFixture();
    // make the payload delta deliberately disagree with mean arithmetic: the
    // panel must show the payload value verbatim
    analysis.alternatives[1]!.delta_ugm3 = 99.9;
    view.render(analysis);
    view.select(1);
    const delta = document.querySelector('#p dd[data-field="reduction"]')!;
    expect(delta.textContent).toBe("99.9 ug/m3");
    const shift = document.querySelector('#p dd[data-field="category-shift"]')!;
    expect(shift.textContent).toBe("high → moderate");
  });

  it("risk factors appear only for the best-ranked alternative", () => {
    const { view } = build();
    view.render(analysisFixture());
    view.select(0);
    expect(document.querySelectorAll("#p .risk-ratios li")).toHaveLength(2);
    expect(document.querySelector('#p li[data-model="hrapie-mortality"]')!.textContent).toContain("1.1362");
    view.select(1);
    expect(document.querySelectorAll("#p .risk-ratios li")).toHaveLength(0);
    expect(document.querySelector("#p .note")).not.toBeNull();
  });

  it("shows the no-cleaner-route state when alternatives are empty", () => {
    const { map, view } = build();
    const analysis = analysisFixture();
    analysis.alternatives = [];
    analysis.benefit = { delta_ugm3: null, category_shift: null, risk_ratios: [] };
    view.render(analysis);
    expect(document.querySelector("#l .empty-state")!.textContent).toMatch(/no feasible cleaner route/i);
    expect(map.routeElements().size).toBe(1); // just the current route
  });

  it("turns a missing analysis into a call-to-action", async () => {
    const api = {
      getAnalysis: async () => {
        throw new ApiError(409, "ConflictError", "route web:r1 has no analysis yet");
      },
    };
    const { view } = build(api);
    await view.load("web:r1");
    expect(document.querySelector("#l .cta")!.textContent).toMatch(/request one/i);
  });
});
