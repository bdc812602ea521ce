import { MediatorState } from "./types.js";

export interface NodeRender {
  id: string;
  x: number;
  y: number;
  color: string;
  missing: boolean;
}

export interface EdgeRender {
  id: string;
  width: number;
}

export interface MediatorFrame {
  nodes: NodeRender[];
  edges: EdgeRender[];
  ball: { x: number; y: number; opacity: number };
  warning: string | null;
}

export const MIN_EDGE_WIDTH = 1;
export const EDGE_WIDTH_PER_TURN = 1.5;

// palette is arbitrary; nodes take colors in registry order
export const PALETTE = [
  "#e6553a",
  "#3a7be6",
  "#3ae691",
  "#e6c43a",
  "#a03ae6",
  "#3ad9e6",
  "#e63aa7",
  "#8ae63a",
];

/** p <- p_prev + alpha * (target - p_prev); alpha = 1 jumps straight to target. */
export function smoothToward(
  prev: [number, number] | null,
  target: [number, number],
  alpha: number,
): [number, number] {
  if (prev === null) {
    return target;
  }
  return [
    prev[0] + alpha * (target[0] - prev[0]),
    prev[1] + alpha * (target[1] - prev[1]),
  ];
}

/** Edge stroke width is affine in the turn count, never below the minimum. */
export function edgeWidth(turns: number): number {
  return MIN_EDGE_WIDTH + EDGE_WIDTH_PER_TURN * turns;
}

/**
 * Build a render frame from the server state. No metric math happens here:
 * positions, weights and intensity come straight from the API; the only
 * client-side computation is the exponential smoothing of the ball.
 */
export function renderMediator(
  state: MediatorState,
  expectedParticipants: string[],
  prevBall: [number, number] | null,
  alpha: number,
): MediatorFrame {
  const ids = Object.keys(state.node_positions);
  const missing = expectedParticipants.filter((p) => !ids.includes(p));
  const ordered = [...ids, ...missing];
  const nodes: NodeRender[] = ordered.map((id, i) => {
    const pos = state.node_positions[id];
    return {
      id,
      x: pos ? pos[0] : 0,
      y: pos ? pos[1] : 0,
      color: PALETTE[i % PALETTE.length],
      missing: !pos,
    };
  });
  const edges: EdgeRender[] = ids.map((id) => ({
    id,
    width: edgeWidth(state.edge_weights[id] ?? 0),
  }));
  const ball = smoothToward(prevBall, state.ball_xy, alpha);
  return {
    nodes,
    edges,
    ball: { x: ball[0], y: ball[1], opacity: state.ball_intensity },
    warning: missing.length
      ? `missing participants: ${missing.join(", ")}`
      : null,
  };
}
