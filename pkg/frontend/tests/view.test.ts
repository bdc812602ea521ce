import { describe, expect, it } from "vitest";

import { viewFromQuery } from "../src/app.js";
import { DEFAULT_VIEW } from "../src/types.js";

describe("viewFromQuery", () => {
  it("returns the defaults for an empty query string", () => {
    expect(viewFromQuery("")).toEqual(DEFAULT_VIEW);
  });

  it("reads group, mode and window from the URL", () => {
    const view = viewFromQuery("?group=standup&mode=playback&window_ms=120000&cursor=99000");
    expect(view.group_id).toBe("standup");
    expect(view.mode).toBe("playback");
    expect(view.window_ms).toBe(120_000);
    expect(view.playback_cursor_ts).toBe(99_000);
  });

  it("ignores an unknown mode value", () => {
    expect(viewFromQuery("?mode=bogus").mode).toBe(DEFAULT_VIEW.mode);
  });

  it("reads the poll period and smoothing factor", () => {
    const view = viewFromQuery("?poll_ms=250&alpha=0.5");
    expect(view.poll_period_ms).toBe(250);
    expect(view.smoothing_alpha).toBe(0.5);
  });
});
