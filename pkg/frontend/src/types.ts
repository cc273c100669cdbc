/** Payload shapes of the cleanroutes HTTP API. The client renders these
 *  verbatim; it never recomputes exposure, categories, deltas, or risk
 *  factors on its own. */

export type XY = [number, number];

export type TravelMode = "walk" | "cycle";
export type RecordMode = TravelMode | "car";
export type Category = "low" | "moderate" | "high";

export interface RouteRecordPayload {
  project_id: string;
  route_id: string;
  participant_id: string;
  home: XY;
  school: XY;
  mode: RecordMode;
  geometry: XY[];
  timestamp: string;
}

export interface PreviewPayload {
  geometry: XY[];
  length_m: number;
  node_ids: string[];
}

export interface ExposurePayload {
  mean_ugm3: number;
  category: Category;
  sample_count: number;
  missing_count: number;
}

export interface AlternativePayload {
  route: {
    mode: TravelMode;
    edge_ids: string[];
    node_ids: string[];
    length_m: number;
    geometry: XY[];
  };
  metrics: {
    length_m: number;
    mean_gradient_pct: number;
    total_crossings: number;
    footpath_fraction: number;
    bike_lane_fraction: number;
  };
  feasibility: Record<string, string>;
  exposure: ExposurePayload;
  delta_ugm3: number;
}

export interface AnalysisPayload {
  route_key: string;
  participant_id: string;
  project_id: string;
  k: number;
  hour: number;
  current: {
    mode: RecordMode;
    length_m: number;
    exposure: ExposurePayload;
    geometry: XY[];
  };
  alternatives: AlternativePayload[];
  benefit: {
    delta_ugm3: number | null;
    category_shift: [Category, Category] | null;
    risk_ratios: [string, number][];
  };
  snap: {
    home_node: string;
    home_distance_m: number;
    school_node: string;
    school_distance_m: number;
  };
}

export interface FeedbackPayload {
  participant_id: string;
  q1_learned: boolean;
  q1_text: string;
  q2_will_change: boolean;
  q2_text: string;
  q3_can_act: boolean;
  q3_text: string;
  q4_rating: number;
  timestamp: string;
}

export interface NetworkNode {
  id: string;
  x: number;
  y: number;
}

export interface NetworkEdge {
  id: string;
  from: string;
  to: string;
  length_m: number;
  geometry: XY[];
}

export interface NetworkPayload {
  crs: string;
  nodes: NetworkNode[];
  edges: NetworkEdge[];
}
