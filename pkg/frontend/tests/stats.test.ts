import { describe, expect, it } from "vitest";

import { renderStats } from "../src/stats.js";
import { ParticipantInfo, WindowStats } from "../src/types.js";

const PARTICIPANTS: ParticipantInfo[] = [
  { participant_id: "alice", badge_id: "b1", beacon_id: "e1", display_name: "Alice" },
  { participant_id: "bob", badge_id: "b2", beacon_id: "e2", display_name: "Bob" },
];

function stats(overrides: Partial<WindowStats>): WindowStats {
  return {
    window: { start_ts: 0, end_ts: 60_000 },
    speaking_ms: {},
    turns: {},
    turn_rate_per_min: 0,
    overlap_pct: 0,
    gini: 0,
    dominant: null,
    ...overrides,
  };
}

describe("renderStats", () => {
  it("shows the display name of the dominant speaker", () => {
    const panels = renderStats(stats({ dominant: "alice" }), PARTICIPANTS);
    expect(panels.dominantName).toBe("Alice");
  });

  it("shows a placeholder when no one dominates", () => {
    const panels = renderStats(stats({ dominant: null }), PARTICIPANTS);
    expect(panels.dominantName).toBe("—");
  });

  it("falls back to the raw id for an unregistered participant", () => {
    const panels = renderStats(stats({ dominant: "mallory" }), PARTICIPANTS);
    expect(panels.dominantName).toBe("mallory");
  });

  it("formats the inequality index to two decimals", () => {
    expect(renderStats(stats({ gini: 0 }), PARTICIPANTS).giniText).toBe("0.00");
    expect(renderStats(stats({ gini: 0.375 }), PARTICIPANTS).giniText).toBe("0.38");
    expect(renderStats(stats({ gini: 1 }), PARTICIPANTS).giniText).toBe("1.00");
  });

  it("formats rate and overlap", () => {
    const panels = renderStats(
      stats({ turn_rate_per_min: 2.3456, overlap_pct: 12.34 }),
      PARTICIPANTS,
    );
    expect(panels.turnRateText).toBe("2.3");
    expect(panels.overlapText).toBe("12.3%");
  });

  it("carries staleness and timestamp through untouched", () => {
    const panels = renderStats(stats({}), PARTICIPANTS, 123456, true);
    expect(panels.stale).toBe(true);
    expect(panels.lastUpdatedTs).toBe(123456);
  });
});
