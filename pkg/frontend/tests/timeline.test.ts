import { describe, expect, it } from "vitest";

import { bucketize, renderTimeline } from "../src/timeline.js";
import { WindowStats } from "../src/types.js";

function stats(speaking: Record<string, number>): WindowStats {
  return {
    window: { start_ts: 0, end_ts: 1000 },
    speaking_ms: speaking,
    turns: {},
    turn_rate_per_min: 0,
    overlap_pct: 0,
    gini: 0,
    dominant: null,
  };
}

describe("bucketize", () => {
  it("partitions the window into contiguous buckets", () => {
    const buckets = bucketize(0, 600_000, 24);
    expect(buckets).toHaveLength(24);
    expect(buckets[0].start_ts).toBe(0);
    expect(buckets[23].end_ts).toBe(600_000);
    for (let i = 1; i < buckets.length; i++) {
      expect(buckets[i].start_ts).toBe(buckets[i - 1].end_ts);
    }
  });

  it("handles spans that do not divide evenly", () => {
    const buckets = bucketize(10, 17, 3);
    expect(buckets[0].start_ts).toBe(10);
    expect(buckets[2].end_ts).toBe(17);
    for (const b of buckets) {
      expect(b.end_ts).toBeGreaterThanOrEqual(b.start_ts);
    }
  });
});

describe("renderTimeline", () => {
  const order = ["alice", "bob", "carol"];

  it("uses the reported speaking times verbatim as slice heights", () => {
    const perBucket = [
      stats({ alice: 500, bob: 200, carol: 0 }),
      stats({ alice: 0, bob: 0, carol: 900 }),
    ];
    const frame = renderTimeline(bucketize(0, 2000, 2), perBucket, order);
    expect(frame.stacks[0].map((s) => s.value)).toEqual([500, 200, 0]);
    expect(frame.stacks[1].map((s) => s.value)).toEqual([0, 0, 900]);
  });

  it("stacks slices cumulatively in participant order", () => {
    const frame = renderTimeline(
      bucketize(0, 1000, 1),
      [stats({ alice: 500, bob: 200, carol: 100 })],
      order,
    );
    expect(frame.stacks[0].map((s) => s.y0)).toEqual([0, 500, 700]);
    expect(frame.maxTotal).toBe(800);
    expect(frame.empty).toBe(false);
  });

  it("treats an unknown participant as zero", () => {
    const frame = renderTimeline(
      bucketize(0, 1000, 1),
      [stats({ dave: 999 })],
      order,
    );
    expect(frame.stacks[0].every((s) => s.value === 0)).toBe(true);
  });

  it("flags an all-silent window as empty", () => {
    const frame = renderTimeline(
      bucketize(0, 2000, 2),
      [stats({}), stats({ alice: 0 })],
      order,
    );
    expect(frame.empty).toBe(true);
    expect(frame.maxTotal).toBe(0);
  });
});
