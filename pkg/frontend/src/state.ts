/** View state: latest server responses plus a stale-response guard.
 *
 * Mutations round-trip to the server before anything re-renders; responses
 * that arrive out of order (an older cursor, or an older request for the
 * same cursor) are discarded.
 */

import type { Deviation, PredictionResponse, StateResponse } from "./types.js";

export interface ViewState {
  sessionId: string | null;
  state: StateResponse | null;
  prediction: PredictionResponse | null;
  imageSvg: string | null;
  lastAppliedSeq: number;
  pendingDeviation: { offsetNmi: string; bearingDeg: string };
}

export function initialViewState(): ViewState {
  return {
    sessionId: null,
    state: null,
    prediction: null,
    imageSvg: null,
    lastAppliedSeq: -1,
    pendingDeviation: { offsetNmi: "0", bearingDeg: "0" },
  };
}

/** Apply a /state response tagged with its request sequence number. */
export function applyState(view: ViewState, response: StateResponse, seq: number): ViewState {
  if (seq <= view.lastAppliedSeq) {
    return view; // superseded by a newer request
  }
  if (view.state !== null && response.cursor < view.state.cursor) {
    return view; // stale: an older cursor must never overwrite a newer one
  }
  return { ...view, state: response, lastAppliedSeq: seq };
}

export function applyPrediction(view: ViewState, response: PredictionResponse): ViewState {
  if (view.state !== null && response.split_index < view.state.cursor) {
    return view; // forecast from an already-passed cursor
  }
  return { ...view, prediction: response };
}

export function applyImage(view: ViewState, svg: string): ViewState {
  return { ...view, imageSvg: svg };
}

export interface DeviationValidation {
  ok: boolean;
  deviation?: Deviation;
  error?: string;
}

/** Inline validation; invalid input never produces a request. */
export function validateDeviation(offsetRaw: string, bearingRaw: string): DeviationValidation {
  const offset = Number(offsetRaw);
  const bearing = Number(bearingRaw);
  if (offsetRaw.trim() === "" || !Number.isFinite(offset) || offset < 0) {
    return { ok: false, error: "offset must be a number >= 0 nmi" };
  }
  if (bearingRaw.trim() === "" || !Number.isFinite(bearing) || bearing < 0 || bearing > 360) {
    return { ok: false, error: "bearing must be within [0, 360] degrees true" };
  }
  return { ok: true, deviation: { offset_nmi: offset, bearing_deg: bearing } };
}

/** Turn-point selection for the what-if action; empty selection disables it. */
export function selectableTurnPoints(view: ViewState): number[] {
  if (view.state === null) {
    return [];
  }
  return Array.from({ length: view.state.cursor + 1 }, (_, i) => i);
}
