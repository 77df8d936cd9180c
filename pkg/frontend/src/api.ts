/** Thin fetch client; the console consumes these endpoints exclusively. */

import type {
  Deviation,
  PredictionResponse,
  StateResponse,
  WhatifResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: unknown,
  ) {
    super(`HTTP ${status}: ${JSON.stringify(detail)}`);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail: unknown = null;
    try {
      detail = await response.json();
    } catch {
      detail = await response.text().catch(() => null);
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ConsoleApi {
  constructor(private readonly base: string) {}

  async createSession(scenario: unknown): Promise<string> {
    const response = await fetch(`${this.base}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ scenario }),
    });
    const payload = await asJson<{ session_id: string }>(response);
    return payload.session_id;
  }

  async state(sessionId: string): Promise<StateResponse> {
    return asJson(await fetch(`${this.base}/sessions/${sessionId}/state`));
  }

  async advance(sessionId: string, deviation?: Deviation): Promise<StateResponse> {
    const body = deviation ? { deviation } : {};
    const response = await fetch(`${this.base}/sessions/${sessionId}/advance`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return asJson(response);
  }

  async prediction(sessionId: string): Promise<PredictionResponse> {
    return asJson(await fetch(`${this.base}/sessions/${sessionId}/prediction`));
  }

  async whatif(sessionId: string, turnPoints: number[]): Promise<WhatifResponse> {
    const response = await fetch(`${this.base}/sessions/${sessionId}/whatif`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ turn_points: turnPoints }),
    });
    return asJson(response);
  }

  /** Server-rendered quality glyphs; embedded verbatim by the image panel. */
  async imageSvg(sessionId: string): Promise<string> {
    const response = await fetch(`${this.base}/sessions/${sessionId}/image.svg`);
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return response.text();
  }
}
