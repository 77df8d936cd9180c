/** Chart rendering: server GeoJSON to a plain projected SVG string.
 *
 * No map tiles; an equirectangular degree projection fitted to the data
 * bounding box keeps the console fully offline on fixtures.
 */

import type { FeatureCollection, GeoJsonFeature } from "./types.js";

export interface ChartOptions {
  width: number;
  height: number;
  padding: number;
  /** Forecast routes are split at this waypoint: sailed solid, rest dotted. */
  splitIndex?: number;
  /** Extra overlays, e.g. return-route candidates from a what-if. */
  extraRoutes?: { feature: GeoJsonFeature; cssClass: string }[];
}

const DEFAULTS: ChartOptions = { width: 520, height: 360, padding: 24 };

interface Bounds {
  minLon: number;
  maxLon: number;
  minLat: number;
  maxLat: number;
}

function* coordsOf(feature: GeoJsonFeature): Generator<number[]> {
  if (feature.geometry.type === "LineString") {
    yield* feature.geometry.coordinates as number[][];
  } else {
    for (const ring of feature.geometry.coordinates as number[][][]) {
      yield* ring;
    }
  }
}

export function dataBounds(collections: FeatureCollection[]): Bounds {
  let minLon = Infinity;
  let maxLon = -Infinity;
  let minLat = Infinity;
  let maxLat = -Infinity;
  for (const fc of collections) {
    for (const feature of fc.features) {
      for (const [lon, lat] of coordsOf(feature)) {
        minLon = Math.min(minLon, lon);
        maxLon = Math.max(maxLon, lon);
        minLat = Math.min(minLat, lat);
        maxLat = Math.max(maxLat, lat);
      }
    }
  }
  if (!Number.isFinite(minLon)) {
    throw new Error("no coordinates to fit the chart to");
  }
  return { minLon, maxLon, minLat, maxLat };
}

export function makeProjector(bounds: Bounds, options: ChartOptions) {
  const spanLon = Math.max(bounds.maxLon - bounds.minLon, 1e-9);
  const spanLat = Math.max(bounds.maxLat - bounds.minLat, 1e-9);
  const innerW = options.width - 2 * options.padding;
  const innerH = options.height - 2 * options.padding;
  const scale = Math.min(innerW / spanLon, innerH / spanLat);
  const offsetX = options.padding + (innerW - spanLon * scale) / 2;
  const offsetY = options.padding + (innerH - spanLat * scale) / 2;
  return (lon: number, lat: number): [number, number] => [
    offsetX + (lon - bounds.minLon) * scale,
    // SVG y grows downward, latitude grows upward.
    offsetY + (bounds.maxLat - lat) * scale,
  ];
}

function fmt(value: number): string {
  return value.toFixed(2);
}

function polyline(points: [number, number][], cssClass: string): string {
  const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return `<polyline class="${cssClass}" fill="none" points="${path}"/>`;
}

function polygon(points: [number, number][], cssClass: string): string {
  const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return `<polygon class="${cssClass}" points="${path}"/>`;
}

function markers(points: [number, number][], cssClass: string): string {
  return points
    .map(([x, y]) => `<circle class="${cssClass}" cx="${fmt(x)}" cy="${fmt(y)}" r="2.2"/>`)
    .join("");
}

/** Render the prediction chart: planned, sailed+forecast, obstacles. */
export function renderChart(prediction: FeatureCollection, options?: Partial<ChartOptions>): string {
  const opts = { ...DEFAULTS, ...options };
  const collections: FeatureCollection[] = [prediction];
  if (opts.extraRoutes) {
    collections.push({
      type: "FeatureCollection",
      features: opts.extraRoutes.map((r) => r.feature),
    });
  }
  const project = makeProjector(dataBounds(collections), opts);
  const parts: string[] = [];

  for (const feature of prediction.features) {
    const label = feature.properties.label ?? "route";
    if (feature.geometry.type === "Polygon") {
      const ring = (feature.geometry.coordinates as number[][][])[0];
      parts.push(polygon(ring.map(([lon, lat]) => project(lon, lat)), `obstacle obstacle-${feature.properties.kind ?? "land"}`));
      continue;
    }
    const pts = (feature.geometry.coordinates as number[][]).map(([lon, lat]) => project(lon, lat));
    if (label === "predicted" && opts.splitIndex !== undefined) {
      const sailed = pts.slice(0, opts.splitIndex + 1);
      const forecast = pts.slice(opts.splitIndex);
      parts.push(polyline(sailed, "route-actual"));
      parts.push(polyline(forecast, "route-predicted"));
      parts.push(markers(sailed, "wp-actual"));
      parts.push(markers(forecast.slice(1), "wp-predicted"));
    } else {
      parts.push(polyline(pts, `route-${label}`));
      parts.push(markers(pts, `wp-${label}`));
    }
  }
  for (const extra of opts.extraRoutes ?? []) {
    const pts = (extra.feature.geometry.coordinates as number[][]).map(([lon, lat]) => project(lon, lat));
    parts.push(polyline(pts, extra.cssClass));
  }

  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${opts.width} ${opts.height}" ` +
    `width="${opts.width}" height="${opts.height}" class="chart">` +
    parts.join("") +
    `</svg>`
  );
}
