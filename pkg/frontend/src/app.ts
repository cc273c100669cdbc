import { AlternativesView } from "./alternatives.js";
import { ApiClient, ApiError } from "./api.js";
import { loadConfig } from "./config.js";
import { DraftController } from "./draw.js";
import { FeedbackForm, RATING_MAX, RATING_MIN } from "./feedback.js";
import { MapView } from "./mapview.js";
import { PackageView } from "./packageview.js";
import type { RecordMode } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(target: HTMLElement) {
  return (message: string, isError: boolean) => {
    target.textContent = message;
    target.className = isError ? "status error" : "status";
  };
}

async function boot(): Promise<void> {
  const config = await loadConfig();
  const api = new ApiClient(config.apiBaseUrl);
  const map = new MapView(el<HTMLElement>("map") as unknown as SVGSVGElement, config.tileSource);
  try {
    map.setNetwork(await api.getNetwork());
  } catch (err) {
    setStatus(el("draw-status"))(
      err instanceof ApiError ? `no network loaded yet: ${err.detail}` : String(err),
      true,
    );
  }

  const draft = new DraftController(api, map);
  draft.onStatus = setStatus(el("draw-status"));
  const alternatives = new AlternativesView(api, map, el("alt-list"), el("alt-panel"));
  const packageView = new PackageView(api, el<HTMLIFrameElement>("package-frame"));
  const feedback = new FeedbackForm(api);
  feedback.onStatus = setStatus(el("feedback-status"));

  let routeKey: string | null = null;
  let packageId: string | null = null;

  el<HTMLSelectElement>("mode").addEventListener("change", (ev) => {
    draft.setMode((ev.target as HTMLSelectElement).value as RecordMode);
  });
  el("undo-waypoint").addEventListener("click", () => void draft.removeLastWaypoint());
  el("clear-draft").addEventListener("click", () => void draft.clear());

  el("register").addEventListener("click", async () => {
    const id = el<HTMLInputElement>("participant-id").value.trim();
    const consent = el<HTMLInputElement>("consent").checked;
    if (!id) return setStatus(el("draw-status"))("enter a participant id first", true);
    try {
      await api.registerParticipant(id, consent);
      setStatus(el("draw-status"))(`participant ${id} registered`, false);
    } catch (err) {
      setStatus(el("draw-status"))(err instanceof ApiError ? err.detail : String(err), true);
    }
  });

  el("submit-route").addEventListener("click", async () => {
    if (!draft.canSubmit()) {
      return setStatus(el("draw-status"))("draw at least two waypoints and wait for the preview", true);
    }
    try {
      routeKey = await draft.submit({
        projectId: el<HTMLInputElement>("project-id").value.trim() || "web",
        routeId: el<HTMLInputElement>("route-id").value.trim() || `r${Date.now()}`,
        participantId: el<HTMLInputElement>("participant-id").value.trim(),
      });
      el("route-key").textContent = routeKey;
    } catch {
      // status line already shows the server's validation message
    }
  });

  el("load-analysis").addEventListener("click", async () => {
    if (!routeKey) return setStatus(el("draw-status"))("submit a route first", true);
    await alternatives.load(routeKey);
  });
  el("request-analysis").addEventListener("click", async () => {
    if (!routeKey) return setStatus(el("draw-status"))("submit a route first", true);
    await alternatives.request(routeKey);
  });

  el("issue-package").addEventListener("click", async () => {
    if (!routeKey) return setStatus(el("feedback-status"))("submit and analyze a route first", true);
    try {
      const issued = await api.issuePackage(routeKey);
      packageId = issued.package_id;
      await packageView.show(packageId);
    } catch (err) {
      setStatus(el("feedback-status"))(err instanceof ApiError ? err.detail : String(err), true);
    }
  });

  const ratingBox = el("rating");
  for (let value = RATING_MIN; value <= RATING_MAX; value += 1) {
    const btn = document.createElement("button");
    btn.type = "button";
    btn.textContent = String(value);
    btn.setAttribute("data-rating", String(value));
    btn.addEventListener("click", () => {
      if (feedback.setRating(value)) {
        for (const other of ratingBox.querySelectorAll("button")) other.classList.remove("picked");
        btn.classList.add("picked");
      }
    });
    ratingBox.appendChild(btn);
  }
  for (const q of ["q1_learned", "q2_will_change", "q3_can_act"] as const) {
    for (const value of [true, false]) {
      el(`${q}-${value ? "yes" : "no"}`).addEventListener("click", () => feedback.setAnswer(q, value));
    }
  }
  for (const q of ["q1_text", "q2_text", "q3_text"] as const) {
    el<HTMLTextAreaElement>(q).addEventListener("input", (ev) => {
      feedback.setText(q, (ev.target as HTMLTextAreaElement).value);
    });
  }
  el("submit-feedback").addEventListener("click", async () => {
    const missing = feedback.missingFields();
    if (missing.length) {
      return setStatus(el("feedback-status"))(`please answer: ${missing.join(", ")}`, true);
    }
    await feedback.submit(el<HTMLInputElement>("participant-id").value.trim()).catch(() => {});
  });
}

void boot();
