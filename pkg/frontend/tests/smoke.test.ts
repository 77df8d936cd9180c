/** End-to-end console smoke against the real HTTP service.
 *
 * Spawns the Python service, then drives the console modules exactly the way
 * the UI does: create a session, advance five steps with a constant
 * shoreward deviation, watch for the replan banner before the unsafe leg is
 * sailed, then run a what-if and check the server's winner is highlighted.
 */

import { type ChildProcess, spawn } from "node:child_process";
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ConsoleApi } from "../src/api.js";
import { renderBanner, renderCandidateTable, renderImagePanel } from "../src/panels.js";
import { renderChart } from "../src/chart.js";
import { applyState, initialViewState, validateDeviation, type ViewState } from "../src/state.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const FIXTURE = join(HERE, "..", "..", "src", "routewatch", "fixtures", "coastal_drift.json");
const PORT = 8731 + (process.pid % 97);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
const api = new ConsoleApi(BASE);

async function waitForServer(timeoutMs = 30000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      const response = await fetch(`${BASE}/sessions/probe/state`);
      if (response.status === 404) {
        return; // up and routing
      }
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      throw new Error("service did not come up in time");
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
}

beforeAll(async () => {
  server = spawn("python3", ["-m", "routewatch.cli", "serve", "--port", String(PORT)], {
    stdio: "ignore",
  });
  await waitForServer();
}, 40000);

afterAll(() => {
  server?.kill("SIGTERM");
});

describe("console smoke", () => {
  let view: ViewState;
  let seq = 0;

  it("creates a session from the drifting-coast scenario", async () => {
    const scenario = JSON.parse(readFileSync(FIXTURE, "utf-8"));
    view = initialViewState();
    view.sessionId = await api.createSession(scenario);
    view = applyState(view, await api.state(view.sessionId), ++seq);
    expect(view.state?.cursor).toBe(1);
    expect(renderBanner(view.state!)).toBe("");
  });

  it("shows the replan banner before the unsafe leg is sailed", async () => {
    const check = validateDeviation("0.7", "0");
    expect(check.ok).toBe(true);

    let bannerCursor: number | null = null;
    let unsafeLeg: number | null = null;
    for (let step = 0; step < 5; step++) {
      const state = await api.advance(view.sessionId!, check.deviation);
      view = applyState(view, state, ++seq);
      const banner = renderBanner(view.state!);
      if (bannerCursor === null && banner !== "") {
        bannerCursor = view.state!.cursor;
        unsafeLeg = view.state!.first_unsafe_leg;
        expect(banner).toContain("Replan advised");
        expect(banner).toContain("safety");
      }
    }
    expect(bannerCursor).not.toBeNull();
    expect(unsafeLeg).not.toBeNull();
    // Leg k is sailed once the cursor moves past k: the operator was warned
    // while the dangerous leg was still ahead.
    expect(bannerCursor!).toBeLessThanOrEqual(unsafeLeg!);
  });

  it("renders the chart from server GeoJSON", async () => {
    const prediction = await api.prediction(view.sessionId!);
    const svg = renderChart(prediction.route, { splitIndex: prediction.split_index });
    expect(svg).toContain("route-planned");
    expect(svg).toContain("route-actual");
    expect(svg).toContain("obstacle");
  });

  it("embeds the server quality glyphs verbatim", async () => {
    const serverSvg = await api.imageSvg(view.sessionId!);
    expect(serverSvg).toContain('version="1.1"');
    expect(renderImagePanel(serverSvg)).toContain(serverSvg);
  });

  it("highlights the server-selected winner in the what-if table", async () => {
    const cursor = view.state!.cursor;
    const turns = Array.from({ length: cursor + 1 }, (_, i) => i);
    const result = await api.whatif(view.sessionId!, turns);
    const html = renderCandidateTable(result);
    expect(html).toContain(`<tr class="winner" data-route-id="${result.winner}">`);
    // Exactly one highlighted row.
    expect(html.match(/class="winner"/g)).toHaveLength(1);
  });
});
