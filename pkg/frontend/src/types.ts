/** Wire types for the routewatch HTTP API (all numbers are server-computed). */

export interface ServerVector {
  S: number;
  D: number;
  T: number;
  C: number;
  quality: number;
}

export interface AcceptabilityInfo {
  acceptable: boolean;
  reasons: string[];
}

export interface HistoryEntry {
  cursor: number;
  vector: ServerVector;
}

export interface StateResponse {
  cursor: number;
  planned_vector: ServerVector;
  composite_vector: ServerVector;
  acceptability: AcceptabilityInfo;
  first_unsafe_leg: number | null;
  classification: string | null;
  history: HistoryEntry[];
}

export interface GeoJsonFeature {
  type: "Feature";
  properties: Record<string, unknown> & { label?: string; kind?: string };
  geometry: {
    type: "LineString" | "Polygon";
    coordinates: number[][] | number[][][];
  };
}

export interface FeatureCollection {
  type: "FeatureCollection";
  features: GeoJsonFeature[];
}

export interface PredictionResponse {
  route: FeatureCollection;
  vector: ServerVector;
  acceptability: AcceptabilityInfo;
  first_unsafe_leg: number | null;
  split_index: number;
}

export interface WhatifCandidate {
  turn_point: number | null;
  route_id: string;
  waypoints: number;
  vector: ServerVector;
  route: GeoJsonFeature;
}

export interface WhatifResponse {
  planned: { route_id: string; vector: ServerVector; route: GeoJsonFeature };
  candidates: WhatifCandidate[];
  classification: string;
  winner: string;
}

export interface Deviation {
  offset_nmi: number;
  bearing_deg: number;
}
