import { describe, expect, it } from "vitest";

import { HubClient } from "../src/api.js";
import { Poller, PollResult } from "../src/poller.js";
import { DEFAULT_VIEW, ViewState } from "../src/types.js";

const STATS_BODY = {
  window: { start_ts: 0, end_ts: 60_000 },
  speaking_ms: { alice: 1000 },
  turns: { alice: 1 },
  turn_rate_per_min: 1,
  overlap_pct: 0,
  gini: 0,
  dominant: "alice",
};

const MEDIATOR_BODY = {
  node_positions: { alice: [1, 0], bob: [-1, 0] },
  edge_weights: { alice: 1, bob: 0 },
  ball_xy: [0.5, 0],
  ball_intensity: 0.05,
};

interface Deferred {
  url: string;
  resolve: () => void;
}

/** fetch stub that records URLs; optionally holds responses until released. */
function makeFetch(hold = false) {
  const urls: string[] = [];
  const pending: Deferred[] = [];
  const fetchFn = (url: string): Promise<Response> => {
    urls.push(url);
    const body = url.includes("/mediator") ? MEDIATOR_BODY : STATS_BODY;
    const response = {
      ok: true,
      status: 200,
      json: async () => body,
    } as unknown as Response;
    if (!hold) {
      return Promise.resolve(response);
    }
    return new Promise((resolve) => {
      pending.push({ url, resolve: () => resolve(response) });
    });
  };
  return { fetchFn, urls, pending };
}

function view(overrides: Partial<ViewState> = {}): ViewState {
  return { ...DEFAULT_VIEW, mode: "playback", playback_cursor_ts: 60_000, ...overrides };
}

describe("Poller", () => {
  it("issues exactly one stats and one mediator request per tick", async () => {
    const { fetchFn, urls } = makeFetch();
    const client = new HubClient("", fetchFn);
    const poller = new Poller(client, view(), () => {});
    await poller.tick();
    expect(urls.filter((u) => u.includes("/stats")).length).toBe(1);
    expect(urls.filter((u) => u.includes("/mediator")).length).toBe(1);
    expect(urls.length).toBe(2);
    await poller.tick();
    expect(urls.length).toBe(4);
  });

  it("queries the window ending at the playback cursor", async () => {
    const { fetchFn, urls } = makeFetch();
    const client = new HubClient("", fetchFn);
    const poller = new Poller(
      client,
      view({ playback_cursor_ts: 100_000, window_ms: 60_000 }),
      () => {},
    );
    await poller.tick();
    expect(urls[0]).toContain("from=40000");
    expect(urls[0]).toContain("to=100000");
  });

  it("uses the injected clock in live mode", async () => {
    const { fetchFn, urls } = makeFetch();
    const client = new HubClient("", fetchFn);
    const poller = new Poller(
      client,
      view({ mode: "live", window_ms: 10_000 }),
      () => {},
      () => {},
      () => 500_000,
    );
    await poller.tick();
    expect(urls[0]).toContain("from=490000");
    expect(urls[0]).toContain("to=500000");
  });

  it("drops a slow response when a newer one already rendered", async () => {
    const { fetchFn, pending } = makeFetch(true);
    const client = new HubClient("", fetchFn);
    const results: PollResult[] = [];
    let nowValue = 2000;
    const poller = new Poller(
      client,
      view({ mode: "live", window_ms: 1000 }),
      (r) => results.push(r),
      () => {},
      () => nowValue,
    );

    const slow = poller.tick(); // cursor 2000, responses held
    const held = pending.splice(0, pending.length);

    nowValue = 3000;
    const fast = poller.tick(); // cursor 3000, responses held too
    pending.splice(0, pending.length).forEach((d) => d.resolve());
    await fast;
    expect(results.map((r) => r.cursor)).toEqual([3000]);

    held.forEach((d) => d.resolve()); // the old responses arrive late
    await slow;
    expect(results.map((r) => r.cursor)).toEqual([3000]);
  });

  it("reports fetch failures without applying a frame", async () => {
    const failing = () => Promise.reject(new Error("connection refused"));
    const client = new HubClient("", failing);
    const results: PollResult[] = [];
    const errors: unknown[] = [];
    const poller = new Poller(
      client,
      view(),
      (r) => results.push(r),
      (e) => errors.push(e),
    );
    await poller.tick();
    expect(results).toHaveLength(0);
    expect(errors).toHaveLength(1);
  });
});
