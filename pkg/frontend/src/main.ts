/** Browser entry point: wires the API client, view state and panels. */

import { ConsoleApi } from "./api.js";
import { renderChart } from "./chart.js";
import {
  renderBanner,
  renderCandidateTable,
  renderGauges,
  renderImagePanel,
  renderSparkline,
  renderTrend,
} from "./panels.js";
import {
  applyImage,
  applyPrediction,
  applyState,
  initialViewState,
  selectableTurnPoints,
  validateDeviation,
  type ViewState,
} from "./state.js";

const api = new ConsoleApi("");
let view: ViewState = initialViewState();
let requestSeq = 0;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function render(): void {
  if (view.state) {
    el("banner").innerHTML = renderBanner(view.state);
    el("gauges").innerHTML = renderGauges(view.state.composite_vector);
    el("trend").innerHTML = renderTrend(view.state);
    el("sparkline").innerHTML = renderSparkline(view.state.history);
    el("cursor").textContent = `waypoint ${view.state.cursor}`;
  }
  if (view.prediction) {
    el("chart").innerHTML = renderChart(view.prediction.route, {
      splitIndex: view.prediction.split_index,
    });
  }
  if (view.imageSvg) {
    el("image").innerHTML = renderImagePanel(view.imageSvg);
  }
  const turns = selectableTurnPoints(view);
  (el<HTMLButtonElement>("whatif-run")).disabled = turns.length === 0;
}

async function refresh(): Promise<void> {
  if (!view.sessionId) {
    return;
  }
  const seq = ++requestSeq;
  const [state, prediction, svg] = await Promise.all([
    api.state(view.sessionId),
    api.prediction(view.sessionId),
    api.imageSvg(view.sessionId),
  ]);
  view = applyImage(applyPrediction(applyState(view, state, seq), prediction), svg);
  render();
}

async function onLoadScenario(): Promise<void> {
  const text = el<HTMLTextAreaElement>("scenario-input").value;
  let scenario: unknown;
  try {
    scenario = JSON.parse(text);
  } catch (error) {
    el("load-error").textContent = `not valid JSON: ${error}`;
    return;
  }
  el("load-error").textContent = "";
  view = initialViewState();
  view.sessionId = await api.createSession(scenario);
  await refresh();
}

async function onAdvance(): Promise<void> {
  if (!view.sessionId) {
    return;
  }
  const offset = el<HTMLInputElement>("dev-offset").value;
  const bearing = el<HTMLInputElement>("dev-bearing").value;
  const check = validateDeviation(offset, bearing);
  if (!check.ok) {
    el("dev-error").textContent = check.error ?? "invalid deviation";
    return; // no request on invalid input
  }
  el("dev-error").textContent = "";
  const seq = ++requestSeq;
  const deviation = check.deviation!;
  const hasDeviation = deviation.offset_nmi > 0;
  const state = await api.advance(view.sessionId, hasDeviation ? deviation : undefined);
  view = applyState(view, state, seq);
  await refresh();
}

async function onWhatif(): Promise<void> {
  if (!view.sessionId || !view.state) {
    return;
  }
  const raw = el<HTMLInputElement>("whatif-turns").value;
  const turns = raw
    .split(",")
    .map((t) => t.trim())
    .filter((t) => t !== "")
    .map(Number);
  if (turns.length === 0 || turns.some((t) => !Number.isInteger(t))) {
    el("whatif-error").textContent = "enter sailed waypoint indices, e.g. 1,2,3";
    return;
  }
  el("whatif-error").textContent = "";
  const result = await api.whatif(view.sessionId, turns);
  el("whatif-table").innerHTML = renderCandidateTable(result);
  if (view.prediction) {
    el("chart").innerHTML = renderChart(view.prediction.route, {
      splitIndex: view.prediction.split_index,
      extraRoutes: result.candidates.map((c, i) => ({
        feature: c.route,
        cssClass: `route-return route-return-${i}`,
      })),
    });
  }
}

export function boot(): void {
  el("load-run").addEventListener("click", () => void onLoadScenario());
  el("advance-run").addEventListener("click", () => void onAdvance());
  el("whatif-run").addEventListener("click", () => void onWhatif());
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  boot();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
