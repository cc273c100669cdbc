import { TOKEN_STROKES } from "./colors.js";
import type { NetworkPayload, XY } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface RouteStyle {
  color: string; // color token (green/yellow/red) or "preview"/"base"
  dashed?: boolean;
  width?: number;
}

const EXTRA_STROKES: Record<string, string> = {
  preview: "#1967d2",
  muted: "#9aa4ad",
};

function strokeFor(token: string): string {
  return TOKEN_STROKES[token] ?? EXTRA_STROKES[token] ?? token;
}

/** SVG map over the planar network CRS (y up; the view flips it).
 *
 *  Pointer handling is split so tests can drive interactions in map
 *  coordinates: the DOM listeners only translate screen points and then call
 *  `clickAt` / `dragTo`, which are public.
 */
export class MapView {
  private world: { x0: number; y0: number; x1: number; y1: number } = { x0: 0, y0: 0, x1: 1, y1: 1 };
  private baseLayer: SVGGElement;
  private routeLayer: SVGGElement;
  private markerLayer: SVGGElement;
  private routes = new Map<string, SVGPolylineElement>();
  private markers = new Map<string, SVGCircleElement>();
  private clickHandlers: Array<(p: XY) => void> = [];
  private dragHandlers: Array<(id: string, p: XY) => void> = [];
  private draggingMarker: string | null = null;

  constructor(readonly svg: SVGSVGElement, tileSource: string | null = null) {
    const doc = svg.ownerDocument;
    this.baseLayer = doc.createElementNS(SVG_NS, "g");
    this.routeLayer = doc.createElementNS(SVG_NS, "g");
    this.markerLayer = doc.createElementNS(SVG_NS, "g");
    this.baseLayer.setAttribute("data-layer", "base");
    this.routeLayer.setAttribute("data-layer", "routes");
    this.markerLayer.setAttribute("data-layer", "markers");
    svg.appendChild(this.baseLayer);
    svg.appendChild(this.routeLayer);
    svg.appendChild(this.markerLayer);
    if (tileSource) {
      const img = doc.createElementNS(SVG_NS, "image");
      img.setAttribute("href", tileSource);
      img.setAttribute("data-role", "tiles");
      this.baseLayer.appendChild(img);
    }
    svg.addEventListener("click", (ev) => {
      if (this.draggingMarker) return;
      this.clickAt(...this.toMapPoint(ev as MouseEvent));
    });
    svg.addEventListener("pointermove", (ev) => {
      if (this.draggingMarker) this.dragTo(this.draggingMarker, ...this.toMapPoint(ev as MouseEvent));
    });
    svg.addEventListener("pointerup", () => {
      this.draggingMarker = null;
    });
  }

  /** Screen -> map coordinates (browser only; jsdom has no CTM support). */
  private toMapPoint(ev: MouseEvent): XY {
    const ctm = this.svg.getScreenCTM?.();
    if (!ctm) return [ev.clientX, ev.clientY];
    const pt = new DOMPoint(ev.clientX, ev.clientY).matrixTransform(ctm.inverse());
    return [pt.x + this.world.x0, this.world.y1 - pt.y];
  }

  /** Programmatic click in map coordinates. */
  clickAt(x: number, y: number): void {
    for (const handler of this.clickHandlers) handler([x, y]);
  }

  /** Programmatic marker drag in map coordinates. */
  dragTo(markerId: string, x: number, y: number): void {
    this.setMarker(markerId, [x, y]);
    for (const handler of this.dragHandlers) handler(markerId, [x, y]);
  }

  onClick(handler: (p: XY) => void): void {
    this.clickHandlers.push(handler);
  }

  onMarkerDrag(handler: (id: string, p: XY) => void): void {
    this.dragHandlers.push(handler);
  }

  setNetwork(network: NetworkPayload): void {
    const xs: number[] = [];
    const ys: number[] = [];
    for (const node of network.nodes) {
      xs.push(node.x);
      ys.push(node.y);
    }
    for (const edge of network.edges) {
      for (const [x, y] of edge.geometry) {
        xs.push(x);
        ys.push(y);
      }
    }
    if (!xs.length) return;
    const pad = 0.06 * Math.max(Math.max(...xs) - Math.min(...xs), Math.max(...ys) - Math.min(...ys), 1);
    this.world = {
      x0: Math.min(...xs) - pad,
      y0: Math.min(...ys) - pad,
      x1: Math.max(...xs) + pad,
      y1: Math.max(...ys) + pad,
    };
    this.svg.setAttribute(
      "viewBox",
      `0 0 ${(this.world.x1 - this.world.x0).toFixed(1)} ${(this.world.y1 - this.world.y0).toFixed(1)}`,
    );
    for (const edge of network.edges) {
      const line = this.svg.ownerDocument.createElementNS(SVG_NS, "polyline");
      line.setAttribute("points", this.toPoints(edge.geometry));
      line.setAttribute("fill", "none");
      line.setAttribute("stroke", strokeFor("muted"));
      line.setAttribute("stroke-width", "1.5");
      line.setAttribute("data-edge", edge.id);
      this.baseLayer.appendChild(line);
    }
  }

  private toPoints(geometry: XY[]): string {
    return geometry.map(([x, y]) => `${(x - this.world.x0).toFixed(1)},${(this.world.y1 - y).toFixed(1)}`).join(" ");
  }

  drawRoute(id: string, geometry: XY[], style: RouteStyle): SVGPolylineElement {
    let line = this.routes.get(id);
    if (!line) {
      line = this.svg.ownerDocument.createElementNS(SVG_NS, "polyline");
      line.setAttribute("fill", "none");
      line.setAttribute("data-route", id);
      this.routeLayer.appendChild(line);
      this.routes.set(id, line);
    }
    line.setAttribute("points", this.toPoints(geometry));
    line.setAttribute("stroke", strokeFor(style.color));
    line.setAttribute("stroke-width", String(style.width ?? 3));
    line.setAttribute("data-color", style.color);
    if (style.dashed) line.setAttribute("stroke-dasharray", "6 4");
    else line.removeAttribute("stroke-dasharray");
    return line;
  }

  removeRoute(id: string): void {
    const line = this.routes.get(id);
    if (line) {
      line.remove();
      this.routes.delete(id);
    }
  }

  clearRoutes(prefix = ""): void {
    for (const [id, line] of [...this.routes]) {
      if (id.startsWith(prefix)) {
        line.remove();
        this.routes.delete(id);
      }
    }
  }

  routeElements(): Map<string, SVGPolylineElement> {
    return new Map(this.routes);
  }

  setMarker(id: string, p: XY, role = "waypoint"): SVGCircleElement {
    let dot = this.markers.get(id);
    if (!dot) {
      dot = this.svg.ownerDocument.createElementNS(SVG_NS, "circle");
      dot.setAttribute("r", "6");
      dot.setAttribute("data-marker", id);
      dot.setAttribute("data-role", role);
      dot.addEventListener("pointerdown", (ev) => {
        ev.stopPropagation();
        this.draggingMarker = id;
      });
      this.markerLayer.appendChild(dot);
      this.markers.set(id, dot);
    }
    dot.setAttribute("cx", (p[0] - this.world.x0).toFixed(1));
    dot.setAttribute("cy", (this.world.y1 - p[1]).toFixed(1));
    dot.setAttribute("data-x", String(p[0]));
    dot.setAttribute("data-y", String(p[1]));
    return dot;
  }

  removeMarkers(prefix = ""): void {
    for (const [id, dot] of [...this.markers]) {
      if (id.startsWith(prefix)) {
        dot.remove();
        this.markers.delete(id);
      }
    }
  }
}
