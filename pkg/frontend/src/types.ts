// Shapes returned by the hub REST API. Field names match the server exactly.

export interface TimeWindow {
  start_ts: number;
  end_ts: number;
}

export interface WindowStats {
  window: TimeWindow;
  speaking_ms: Record<string, number>;
  turns: Record<string, number>;
  turn_rate_per_min: number;
  overlap_pct: number;
  gini: number;
  dominant: string | null;
}

export interface MediatorState {
  node_positions: Record<string, [number, number]>;
  edge_weights: Record<string, number>;
  ball_xy: [number, number];
  ball_intensity: number;
}

export interface ParticipantInfo {
  participant_id: string;
  badge_id: string;
  beacon_id: string;
  display_name: string;
}

export interface GroupInfo {
  group_id: string;
  participants: ParticipantInfo[];
}

export interface ViewState {
  group_id: string;
  mode: "live" | "playback";
  window_ms: number;
  playback_cursor_ts: number;
  poll_period_ms: number;
  smoothing_alpha: number; // (0, 1]
}

export const DEFAULT_VIEW: ViewState = {
  group_id: "g1",
  mode: "live",
  window_ms: 60_000,
  playback_cursor_ts: 0,
  poll_period_ms: 1000,
  smoothing_alpha: 0.3,
};
