import { HubClient } from "./api.js";
import { MediatorState, ViewState, WindowStats } from "./types.js";

export interface PollResult {
  cursor: number; // the window end the request was issued for
  stats: WindowStats;
  mediator: MediatorState;
}

export type PollListener = (result: PollResult) => void;
export type ErrorListener = (err: unknown) => void;

/**
 * Issues exactly one /stats and one /mediator request per tick. Responses
 * carry the cursor of the request that produced them; a response older than
 * the newest applied one is dropped, so a slow reply never overwrites a
 * newer frame.
 */
export class Poller {
  private appliedCursor = -Infinity;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private client: HubClient,
    private view: ViewState,
    private onResult: PollListener,
    private onError: ErrorListener = () => {},
    private now: () => number = () => Date.now(),
  ) {}

  windowFor(cursor: number): { from: number; to: number } {
    return { from: cursor - this.view.window_ms, to: cursor };
  }

  cursorNow(): number {
    return this.view.mode === "live" ? this.now() : this.view.playback_cursor_ts;
  }

  async tick(): Promise<void> {
    const cursor = this.cursorNow();
    const { from, to } = this.windowFor(cursor);
    try {
      const [stats, mediator] = await Promise.all([
        this.client.stats(this.view.group_id, from, to),
        this.client.mediator(this.view.group_id, from, to),
      ]);
      if (cursor < this.appliedCursor) {
        return; // stale response: a newer one already rendered
      }
      this.appliedCursor = cursor;
      this.onResult({ cursor, stats, mediator });
    } catch (err) {
      this.onError(err);
    }
  }

  start(): void {
    if (this.timer !== null) {
      return;
    }
    void this.tick();
    this.timer = setInterval(() => void this.tick(), this.view.poll_period_ms);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
