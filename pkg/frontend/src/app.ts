import { HubClient } from "./api.js";
import { MediatorFrame, renderMediator } from "./mediator.js";
import { Poller, PollResult } from "./poller.js";
import { renderStats } from "./stats.js";
import { bucketize, renderTimeline, TimelineFrame } from "./timeline.js";
import { DEFAULT_VIEW, ParticipantInfo, ViewState } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const MEDIATOR_SIZE = 360;
const TIMELINE_BUCKETS = 24;

export function viewFromQuery(search: string): ViewState {
  const params = new URLSearchParams(search);
  const view = { ...DEFAULT_VIEW };
  if (params.get("group")) view.group_id = params.get("group")!;
  const mode = params.get("mode");
  if (mode === "live" || mode === "playback") view.mode = mode;
  if (params.get("window_ms")) view.window_ms = Number(params.get("window_ms"));
  if (params.get("cursor")) view.playback_cursor_ts = Number(params.get("cursor"));
  if (params.get("poll_ms")) view.poll_period_ms = Number(params.get("poll_ms"));
  if (params.get("alpha")) view.smoothing_alpha = Number(params.get("alpha"));
  return view;
}

function toScreen(x: number, y: number): [number, number] {
  // unit circle -> svg viewport, y flipped
  const half = MEDIATOR_SIZE / 2;
  const radius = half * 0.8;
  return [half + x * radius, half - y * radius];
}

function drawMediator(svg: SVGSVGElement, frame: MediatorFrame): void {
  svg.replaceChildren();
  const [bx, by] = toScreen(frame.ball.x, frame.ball.y);
  for (const node of frame.nodes) {
    const edge = frame.edges.find((e) => e.id === node.id);
    if (edge) {
      const [nx, ny] = toScreen(node.x, node.y);
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(nx));
      line.setAttribute("y1", String(ny));
      line.setAttribute("x2", String(bx));
      line.setAttribute("y2", String(by));
      line.setAttribute("stroke", "#888");
      line.setAttribute("stroke-width", String(edge.width));
      svg.appendChild(line);
    }
  }
  for (const node of frame.nodes) {
    const [nx, ny] = toScreen(node.x, node.y);
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(nx));
    circle.setAttribute("cy", String(ny));
    circle.setAttribute("r", "14");
    circle.setAttribute("fill", node.missing ? "#ccc" : node.color);
    svg.appendChild(circle);
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(nx));
    label.setAttribute("y", String(ny - 20));
    label.setAttribute("text-anchor", "middle");
    label.textContent = node.id;
    svg.appendChild(label);
  }
  const ball = document.createElementNS(SVG_NS, "circle");
  ball.setAttribute("cx", String(bx));
  ball.setAttribute("cy", String(by));
  ball.setAttribute("r", "18");
  ball.setAttribute("fill", "green");
  ball.setAttribute("fill-opacity", String(frame.ball.opacity));
  svg.appendChild(ball);
}

function drawTimeline(
  svg: SVGSVGElement,
  frame: TimelineFrame,
  colors: Map<string, string>,
  emptyMessage: HTMLElement,
): void {
  svg.replaceChildren();
  emptyMessage.hidden = !frame.empty;
  if (frame.empty) return;
  const width = svg.clientWidth || 800;
  const height = svg.clientHeight || 160;
  const barWidth = width / frame.buckets.length;
  frame.stacks.forEach((stack, i) => {
    for (const slice of stack) {
      if (slice.value === 0) continue;
      const h = (slice.value / frame.maxTotal) * height;
      const y = height - ((slice.y0 + slice.value) / frame.maxTotal) * height;
      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", String(i * barWidth + 1));
      rect.setAttribute("y", String(y));
      rect.setAttribute("width", String(barWidth - 2));
      rect.setAttribute("height", String(h));
      rect.setAttribute("fill", colors.get(slice.participant_id) ?? "#999");
      svg.appendChild(rect);
    }
  });
}

export async function main(): Promise<void> {
  const view = viewFromQuery(window.location.search);
  const client = new HubClient("");
  const groups = await client.groups();
  const group = groups.find((g) => g.group_id === view.group_id);
  const participants: ParticipantInfo[] = group ? group.participants : [];
  const order = participants.map((p) => p.participant_id);
  const colors = new Map(
    order.map((pid, i) => [
      pid,
      ["#e6553a", "#3a7be6", "#3ae691", "#e6c43a", "#a03ae6", "#3ad9e6"][i % 6],
    ]),
  );

  const mediatorSvg = document.getElementById("mediator") as unknown as SVGSVGElement;
  const timelineSvg = document.getElementById("timeline") as unknown as SVGSVGElement;
  const emptyMsg = document.getElementById("timeline-empty")!;
  const dominantEl = document.getElementById("stat-dominant")!;
  const giniEl = document.getElementById("stat-gini")!;
  const rateEl = document.getElementById("stat-rate")!;
  const overlapEl = document.getElementById("stat-overlap")!;
  const staleEl = document.getElementById("stale-banner")!;
  const warnEl = document.getElementById("warning-banner")!;

  let prevBall: [number, number] | null = null;

  const onResult = async (result: PollResult) => {
    staleEl.hidden = true;
    const frame = renderMediator(
      result.mediator,
      order,
      prevBall,
      view.smoothing_alpha,
    );
    prevBall = [frame.ball.x, frame.ball.y];
    drawMediator(mediatorSvg, frame);
    warnEl.textContent = frame.warning ?? "";
    warnEl.hidden = frame.warning === null;

    const panels = renderStats(result.stats, participants, result.cursor);
    dominantEl.textContent = panels.dominantName;
    giniEl.textContent = panels.giniText;
    rateEl.textContent = panels.turnRateText;
    overlapEl.textContent = panels.overlapText;

    const buckets = bucketize(
      result.stats.window.start_ts,
      result.stats.window.end_ts,
      TIMELINE_BUCKETS,
    );
    const perBucket = await Promise.all(
      buckets.map((b) => client.stats(view.group_id, b.start_ts, b.end_ts)),
    );
    drawTimeline(timelineSvg, renderTimeline(buckets, perBucket, order), colors, emptyMsg);
  };

  const poller = new Poller(client, view, onResult, () => {
    staleEl.hidden = false;
  });
  poller.start();
}

if (typeof document !== "undefined" && document.getElementById("mediator")) {
  void main();
}
