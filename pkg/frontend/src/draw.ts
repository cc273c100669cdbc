import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import type { MapView } from "./mapview.js";
import type { PreviewPayload, RecordMode, RouteRecordPayload, TravelMode, XY } from "./types.js";

export interface DraftState {
  waypoints: XY[];
  mode: RecordMode;
  preview: PreviewPayload | null;
}

export interface SubmitMeta {
  projectId: string;
  routeId: string;
  participantId: string;
}

/** The current-route drawing loop: click to add waypoints, drag to adjust,
 *  every edit re-requests the snapped preview, submit posts the record.
 *
 *  The first waypoint is the home marker, the last the school marker; the
 *  submitted geometry is the snapped preview from the server.
 */
export class DraftController {
  readonly state: DraftState = { waypoints: [], mode: "walk", preview: null };
  /** Incremented per preview request; stale responses are dropped. */
  private previewSeq = 0;
  previewCount = 0;
  onStatus: (message: string, isError: boolean) => void = () => {};

  constructor(
    private readonly api: ApiClient,
    private readonly map: MapView,
  ) {
    map.onClick((p) => {
      void this.addWaypoint(p);
    });
    map.onMarkerDrag((id, p) => {
      const match = /^wp-(\d+)$/.exec(id);
      if (match) void this.moveWaypoint(Number(match[1]), p);
    });
  }

  setMode(mode: RecordMode): void {
    this.state.mode = mode;
    void this.refreshPreview();
  }

  async addWaypoint(p: XY): Promise<void> {
    this.state.waypoints.push(p);
    this.renderMarkers();
    await this.refreshPreview();
  }

  async moveWaypoint(index: number, p: XY): Promise<void> {
    if (index < 0 || index >= this.state.waypoints.length) return;
    this.state.waypoints[index] = p;
    this.renderMarkers();
    await this.refreshPreview();
  }

  async removeLastWaypoint(): Promise<void> {
    this.state.waypoints.pop();
    this.map.removeMarkers("wp-");
    this.renderMarkers();
    await this.refreshPreview();
  }

  async clear(): Promise<void> {
    this.state.waypoints = [];
    this.state.preview = null;
    this.map.removeMarkers("wp-");
    this.map.removeRoute("draft");
  }

  private renderMarkers(): void {
    this.state.waypoints.forEach((p, i) => {
      const role = i === 0 ? "home" : i === this.state.waypoints.length - 1 ? "school" : "waypoint";
      this.map.setMarker(`wp-${i}`, p, role);
    });
  }

  /** Ask the server for the snapped geometry; called after every edit. */
  async refreshPreview(): Promise<void> {
    if (this.state.waypoints.length < 2) {
      this.state.preview = null;
      this.map.removeRoute("draft");
      return;
    }
    const seq = ++this.previewSeq;
    const mode: TravelMode = this.state.mode === "cycle" ? "cycle" : "walk";
    try {
      const preview = await this.api.preview(this.state.waypoints, mode);
      if (seq !== this.previewSeq) return; // a newer edit superseded this one
      this.previewCount += 1;
      this.state.preview = preview;
      this.map.drawRoute("draft", preview.geometry, { color: "preview", dashed: true });
      this.onStatus(`preview: ${preview.length_m.toFixed(0)} m along the network`, false);
    } catch (err) {
      if (seq !== this.previewSeq) return;
      this.state.preview = null;
      this.map.removeRoute("draft");
      this.onStatus(err instanceof ApiError ? err.detail : String(err), true);
    }
  }

  canSubmit(): boolean {
    return this.state.waypoints.length >= 2 && this.state.preview !== null;
  }

  buildRecord(meta: SubmitMeta): RouteRecordPayload {
    if (this.state.waypoints.length < 2) throw new Error("a route needs at least 2 waypoints");
    if (!this.state.preview) throw new Error("no snapped preview available yet");
    const home = this.state.waypoints[0]!;
    const school = this.state.waypoints[this.state.waypoints.length - 1]!;
    return {
      project_id: meta.projectId,
      route_id: meta.routeId,
      participant_id: meta.participantId,
      home,
      school,
      mode: this.state.mode,
      geometry: this.state.preview.geometry,
      timestamp: new Date().toISOString(),
    };
  }

  /** Post the drafted record; resolves to the server-assigned route key. */
  async submit(meta: SubmitMeta): Promise<string> {
    const record = this.buildRecord(meta);
    try {
      const { id } = await this.api.submitRoute(record);
      this.onStatus(`stored as ${id}`, false);
      return id;
    } catch (err) {
      if (err instanceof ApiError) this.onStatus(err.detail, true);
      throw err;
    }
  }
}
