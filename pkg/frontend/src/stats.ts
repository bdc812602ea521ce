import { ParticipantInfo, WindowStats } from "./types.js";

export interface StatsPanels {
  dominantName: string; // display name, or an em-dash placeholder
  giniText: string; // 2 decimals
  turnRateText: string;
  overlapText: string;
  stale: boolean;
  lastUpdatedTs: number | null;
}

const NO_DOMINANT = "—"; // shown on tie or silence

/** Format the stat boxes. Every number shown is an API value, only formatted. */
export function renderStats(
  stats: WindowStats,
  participants: ParticipantInfo[],
  lastUpdatedTs: number | null = null,
  stale = false,
): StatsPanels {
  let dominantName = NO_DOMINANT;
  if (stats.dominant !== null) {
    const match = participants.find(
      (p) => p.participant_id === stats.dominant,
    );
    dominantName = match ? match.display_name : stats.dominant;
  }
  return {
    dominantName,
    giniText: stats.gini.toFixed(2),
    turnRateText: stats.turn_rate_per_min.toFixed(1),
    overlapText: `${stats.overlap_pct.toFixed(1)}%`,
    stale,
    lastUpdatedTs,
  };
}
