import type {
  AnalysisPayload,
  FeedbackPayload,
  NetworkPayload,
  PreviewPayload,
  RouteRecordPayload,
  TravelMode,
  XY,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly errorType: string,
    readonly detail: string,
  ) {
    super(`${status} ${errorType}: ${detail}`);
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  let errorType = "HttpError";
  let detail = resp.statusText;
  try {
    const body = await resp.json();
    if (typeof body.error === "string") errorType = body.error;
    if (typeof body.detail === "string") detail = body.detail;
    else if (body.detail) detail = JSON.stringify(body.detail);
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(resp.status, errorType, detail);
}

/** Thin typed client for the cleanroutes service; the only way the UI talks
 *  to the backend. */
export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as T;
  }

  registerParticipant(id: string, consent: boolean, answers: Record<string, string> = {}) {
    return this.request<{ id: string }>("POST", "/participants", { id, consent, answers });
  }

  submitRoute(record: RouteRecordPayload) {
    return this.request<{ id: string }>("POST", "/routes", record);
  }

  getRoute(routeKey: string) {
    return this.request<RouteRecordPayload>("GET", `/routes/${encodeURIComponent(routeKey)}`);
  }

  preview(waypoints: XY[], mode: TravelMode) {
    return this.request<PreviewPayload>("POST", "/routes/preview", { waypoints, mode });
  }

  requestAnalysis(routeKey: string, k?: number, hour?: number) {
    const params = new URLSearchParams();
    if (k !== undefined) params.set("k", String(k));
    if (hour !== undefined) params.set("hour", String(hour));
    const query = params.size ? `?${params}` : "";
    return this.request<AnalysisPayload>("POST", `/routes/${encodeURIComponent(routeKey)}/analysis${query}`);
  }

  getAnalysis(routeKey: string) {
    return this.request<AnalysisPayload>("GET", `/routes/${encodeURIComponent(routeKey)}/analysis`);
  }

  issuePackage(routeKey: string) {
    return this.request<{ package_id: string; version: number }>(
      "POST",
      `/routes/${encodeURIComponent(routeKey)}/package`,
    );
  }

  async getPackageHtml(packageId: string): Promise<string> {
    const resp = await fetch(`${this.baseUrl}/packages/${encodeURIComponent(packageId)}?format=hypertext`);
    if (!resp.ok) throw await parseError(resp);
    return await resp.text();
  }

  submitFeedback(record: FeedbackPayload) {
    return this.request<{ status: string }>("POST", "/feedback", record);
  }

  getNetwork() {
    return this.request<NetworkPayload>("GET", "/network");
  }

  getEffectiveness(projectId: string) {
    return this.request<Record<string, number | null>>(
      "GET",
      `/projects/${encodeURIComponent(projectId)}/effectiveness`,
    );
  }
}
