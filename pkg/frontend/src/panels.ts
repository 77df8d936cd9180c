/** Panel renderers (pure HTML-string functions; main.ts injects them).
 *
 * Every displayed number is copied from a server payload; the console does
 * no coefficient arithmetic of its own.
 */

import type { HistoryEntry, ServerVector, StateResponse, WhatifResponse } from "./types.js";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function show(value: number): string {
  return String(value);
}

const GAUGES: { key: keyof ServerVector; label: string }[] = [
  { key: "S", label: "safety" },
  { key: "D", label: "distance" },
  { key: "T", label: "time" },
  { key: "C", label: "simplicity" },
];

export function renderGauges(vector: ServerVector): string {
  const rows = GAUGES.map(({ key, label }) => {
    const value = vector[key];
    const widthPct = Math.max(0, Math.min(1, value)) * 100;
    const over = value > 1 ? " gauge-over" : "";
    return (
      `<div class="gauge${over}" data-coefficient="${key}">` +
      `<span class="gauge-label">${key} (${label})</span>` +
      `<span class="gauge-bar"><span class="gauge-fill" style="width:${widthPct.toFixed(1)}%"></span></span>` +
      `<span class="gauge-value">${show(value)}</span>` +
      `</div>`
    );
  });
  return (
    `<div class="gauges">` +
    rows.join("") +
    `<div class="gauge-quality">quality <strong>${show(vector.quality)}</strong></div>` +
    `</div>`
  );
}

export function renderSparkline(history: HistoryEntry[], width = 180, height = 42): string {
  if (history.length === 0) {
    return `<svg class="sparkline" width="${width}" height="${height}"></svg>`;
  }
  const qualities = history.map((h) => h.vector.quality);
  const min = Math.min(...qualities);
  const max = Math.max(...qualities);
  const span = Math.max(max - min, 1e-9);
  const step = history.length > 1 ? width / (history.length - 1) : 0;
  const points = qualities
    .map((q, i) => `${(i * step).toFixed(1)},${(height - 4 - ((q - min) / span) * (height - 8)).toFixed(1)}`)
    .join(" ");
  return (
    `<svg class="sparkline" width="${width}" height="${height}">` +
    `<polyline fill="none" points="${points}"/>` +
    `</svg>`
  );
}

export function renderBanner(state: StateResponse): string {
  if (state.acceptability.acceptable) {
    return "";
  }
  const reasons = state.acceptability.reasons.map(esc).join(", ");
  const leg = state.first_unsafe_leg;
  const legNote = leg === null ? "" : ` (first unsafe leg: ${leg})`;
  return (
    `<div class="banner banner-replan" role="alert">` +
    `Replan advised: ${reasons}${legNote}` +
    `</div>`
  );
}

export function renderTrend(state: StateResponse): string {
  const label = state.classification ?? "gathering history";
  return `<div class="trend trend-${state.classification ?? "none"}">trend: ${esc(label)}</div>`;
}

/** Candidate table sorted by server quality, winner row highlighted. */
export function renderCandidateTable(whatif: WhatifResponse): string {
  const rows = [
    {
      id: whatif.planned.route_id,
      label: "planned route",
      turn: "",
      waypoints: null as number | null,
      vector: whatif.planned.vector,
    },
    ...whatif.candidates.map((c) => ({
      id: c.route_id,
      label: c.route_id,
      turn: c.turn_point === null ? "" : String(c.turn_point),
      waypoints: c.waypoints as number | null,
      vector: c.vector,
    })),
  ];
  rows.sort((a, b) => b.vector.quality - a.vector.quality);
  const body = rows
    .map((row) => {
      const winner = row.id === whatif.winner ? ' class="winner"' : "";
      const cells = [
        esc(row.label),
        row.turn,
        row.waypoints === null ? "" : String(row.waypoints),
        show(row.vector.S),
        show(row.vector.D),
        show(row.vector.T),
        show(row.vector.C),
        show(row.vector.quality),
      ];
      return `<tr${winner} data-route-id="${esc(row.id)}">` + cells.map((c) => `<td>${c}</td>`).join("") + `</tr>`;
    })
    .join("");
  return (
    `<table class="candidates">` +
    `<thead><tr><th>route</th><th>turn</th><th>wpts</th><th>S</th><th>D</th><th>T</th><th>C</th><th>quality</th></tr></thead>` +
    `<tbody>${body}</tbody>` +
    `</table>` +
    `<div class="whatif-classification">development: ${esc(whatif.classification)}</div>`
  );
}

/** The cognitive-image panel embeds the server's SVG verbatim. */
export function renderImagePanel(serverSvg: string): string {
  return `<div class="image-panel">${serverSvg}</div>`;
}
