import { WindowStats } from "./types.js";

export interface Bucket {
  start_ts: number;
  end_ts: number;
}

export interface StackSlice {
  participant_id: string;
  y0: number; // stacked offset, ms
  value: number; // speaking_ms in the bucket, straight from /stats
}

export interface TimelineFrame {
  buckets: Bucket[];
  stacks: StackSlice[][]; // one stack per bucket
  maxTotal: number;
  empty: boolean;
}

/** Split a window into equal buckets for per-bucket /stats queries. */
export function bucketize(
  startTs: number,
  endTs: number,
  bucketCount: number,
): Bucket[] {
  const buckets: Bucket[] = [];
  const span = endTs - startTs;
  for (let i = 0; i < bucketCount; i++) {
    buckets.push({
      start_ts: startTs + Math.floor((span * i) / bucketCount),
      end_ts: startTs + Math.floor((span * (i + 1)) / bucketCount),
    });
  }
  return buckets;
}

/**
 * Stack the per-bucket speaking times returned by /stats. Heights are the
 * API values verbatim; nothing is recomputed client-side.
 */
export function renderTimeline(
  buckets: Bucket[],
  perBucketStats: WindowStats[],
  participantOrder: string[],
): TimelineFrame {
  const stacks: StackSlice[][] = perBucketStats.map((stats) => {
    let offset = 0;
    return participantOrder.map((pid) => {
      const value = stats.speaking_ms[pid] ?? 0;
      const slice = { participant_id: pid, y0: offset, value };
      offset += value;
      return slice;
    });
  });
  const totals = stacks.map((stack) =>
    stack.reduce((acc, s) => acc + s.value, 0),
  );
  const maxTotal = totals.length ? Math.max(...totals) : 0;
  return { buckets, stacks, maxTotal, empty: maxTotal === 0 };
}
