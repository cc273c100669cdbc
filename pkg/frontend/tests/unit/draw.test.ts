import { beforeEach, describe, expect, it } from "vitest";

import type { ApiClient } from "../../src/api.js";
import { DraftController } from "../../src/draw.js";
import { MapView } from "../../src/mapview.js";
import type { PreviewPayload, XY } from "../../src/types.js";

function makeMap(): MapView {
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg") as SVGSVGElement;
  document.body.appendChild(svg);
  return new MapView(svg);
}

class FakeApi {
  previewCalls: Array<{ waypoints: XY[]; mode: string }> = [];
  submitted: unknown[] = [];

  async preview(waypoints: XY[], mode: string): Promise<PreviewPayload> {
    this.previewCalls.push({ waypoints: waypoints.map((p) => [...p] as XY), mode });
    const geometry = waypoints.map((p, i) => [Math.round(p[0] / 100) * 100, Math.round(p[1] / 100) * 100] as XY);
    return { geometry, length_m: 100 * (waypoints.length - 1), node_ids: geometry.map((g) => `n-${g[0]}-${g[1]}`) };
  }

  async submitRoute(record: unknown): Promise<{ id: string }> {
    this.submitted.push(record);
    return { id: "web:r1" };
  }
}

describe("draft route controller", () => {
  let api: FakeApi;
  let map: MapView;
  let draft: DraftController;

  beforeEach(() => {
    document.body.innerHTML = "";
    api = new FakeApi();
    map = makeMap();
    draft = new DraftController(api as unknown as ApiClient, map);
  });

  it("requires two waypoints before any preview or submission", async () => {
    await draft.addWaypoint([10, 10]);
    expect(api.previewCalls).toHaveLength(0);
    expect(draft.canSubmit()).toBe(false);
    expect(() => draft.buildRecord({ projectId: "p", routeId: "r", participantId: "x" })).toThrow(/2 waypoints/);
  });

  it("refreshes the preview after every edit", async () => {
    await draft.addWaypoint([10, 10]);
    await draft.addWaypoint([190, 10]);
    expect(api.previewCalls).toHaveLength(1);
    await draft.addWaypoint([290, 10]);
    expect(api.previewCalls).toHaveLength(2);
    await draft.moveWaypoint(1, [190, 110]);
    expect(api.previewCalls).toHaveLength(3);
    expect(api.previewCalls[2]!.waypoints[1]).toEqual([190, 110]);
    await draft.removeLastWaypoint();
    expect(api.previewCalls).toHaveLength(4);
  });

  it("dragging a marker re-requests the preview and changes the submitted geometry", async () => {
    await draft.addWaypoint([10, 10]);
    await draft.addWaypoint([190, 10]);
    const before = draft.state.preview!.geometry;
    map.dragTo("wp-1", 190, 210);
    await new Promise((r) => setTimeout(r, 0));
    expect(api.previewCalls).toHaveLength(2);
    const record = draft.buildRecord({ projectId: "p", routeId: "r", participantId: "x" });
    expect(record.geometry).not.toEqual(before);
    expect(record.geometry).toEqual(draft.state.preview!.geometry);
  });

  it("map clicks add waypoints and draw the dashed preview", async () => {
    map.clickAt(10, 10);
    map.clickAt(210, 10);
    await new Promise((r) => setTimeout(r, 0));
    expect(draft.state.waypoints).toHaveLength(2);
    const line = map.routeElements().get("draft")!;
    expect(line.getAttribute("stroke-dasharray")).toBe("6 4");
  });

  it("submits the snapped preview geometry with home and school from the endpoints", async () => {
    await draft.addWaypoint([12, 8]);
    await draft.addWaypoint([188, 12]);
    draft.setMode("cycle");
    await new Promise((r) => setTimeout(r, 0));
    const id = await draft.submit({ projectId: "web", routeId: "r9", participantId: "parent-1" });
    expect(id).toBe("web:r1");
    const record = api.submitted[0] as Record<string, unknown>;
    expect(record.project_id).toBe("web");
    expect(record.mode).toBe("cycle");
    expect(record.home).toEqual([12, 8]);
    expect(record.school).toEqual([188, 12]);
    expect(record.geometry).toEqual(draft.state.preview!.geometry);
  });
});
