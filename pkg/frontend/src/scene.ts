// Top-down scene model: a frame becomes a list of draw operations, which the
// canvas layer paints verbatim. Keeping the geometry pure makes every display
// rule testable without a browser.

import type { Frame, ScenarioPayload, TrajectoryEvent } from "./types.js";

export const ARENA_HALF_EXTENT_M = 5.0;
export const BOW_PITCH_THRESHOLD_DEG = 15.0;
export const BOW_HEIGHT_THRESHOLD_M = 0.4;

export type DrawOp =
  | { kind: "arena"; halfExtent: number }
  | { kind: "base"; x: number; y: number; headingDeg: number }
  | { kind: "lightRing"; color: string }
  | { kind: "headTick"; panDeg: number; tiltDeg: number }
  | { kind: "bodyGlyph"; pitchDeg: number; yawDeg: number; heightM: number }
  | { kind: "bowGlyph" }
  | { kind: "person"; x: number; y: number }
  | { kind: "bubble"; eventKind: string; text: string };

function toHex(value: number): string {
  return Math.max(0, Math.min(255, Math.round(value)))
    .toString(16)
    .padStart(2, "0")
    .toUpperCase();
}

export function lightColor(frame: Frame): string {
  return `#${toHex(frame.light_r)}${toHex(frame.light_g)}${toHex(frame.light_b)}`;
}

export function personPositionAt(
  scenario: ScenarioPayload,
  t: number,
): { x: number; y: number } | null {
  const points = scenario.waypoints;
  if (!points.length) return null;
  if (t <= points[0][0]) return { x: points[0][1], y: points[0][2] };
  for (let i = 0; i + 1 < points.length; i++) {
    const [t0, x0, y0] = points[i];
    const [t1, x1, y1] = points[i + 1];
    if (t0 <= t && t <= t1) {
      const frac = t1 === t0 ? 1 : (t - t0) / (t1 - t0);
      return { x: x0 + frac * (x1 - x0), y: y0 + frac * (y1 - y0) };
    }
  }
  const last = points[points.length - 1];
  return { x: last[1], y: last[2] };
}

export function computeScene(
  frame: Frame,
  embodiment: string,
  scenario: ScenarioPayload | null,
  bubbles: TrajectoryEvent[],
): DrawOp[] {
  const ops: DrawOp[] = [
    { kind: "arena", halfExtent: ARENA_HALF_EXTENT_M },
    { kind: "base", x: frame.x, y: frame.y, headingDeg: frame.heading_deg },
    { kind: "lightRing", color: lightColor(frame) },
  ];
  if (embodiment.startsWith("mobile")) {
    ops.push({
      kind: "headTick",
      panDeg: frame.head_pan_deg,
      tiltDeg: frame.head_tilt_deg,
    });
  } else {
    ops.push({
      kind: "bodyGlyph",
      pitchDeg: frame.body_pitch_deg,
      yawDeg: frame.body_yaw_deg,
      heightM: frame.body_height_m,
    });
    if (
      frame.body_pitch_deg >= BOW_PITCH_THRESHOLD_DEG &&
      frame.body_height_m <= BOW_HEIGHT_THRESHOLD_M
    ) {
      ops.push({ kind: "bowGlyph" });
    }
  }
  if (scenario) {
    const person = personPositionAt(scenario, frame.t);
    if (person) ops.push({ kind: "person", x: person.x, y: person.y });
  }
  for (const event of bubbles) {
    ops.push({ kind: "bubble", eventKind: event.kind, text: event.payload });
  }
  return ops;
}

/** Paint draw ops onto a canvas; geometry decisions all live in computeScene. */
export function paint(ctx: CanvasRenderingContext2D, ops: DrawOp[]): void {
  const canvas = ctx.canvas;
  const scale = canvas.width / (2 * ARENA_HALF_EXTENT_M + 1);
  const cx = canvas.width / 2;
  const cy = canvas.height / 2;
  const px = (x: number) => cx + x * scale;
  const py = (y: number) => cy - y * scale;

  ctx.clearRect(0, 0, canvas.width, canvas.height);
  let base = { x: 0, y: 0, headingDeg: 0 };
  for (const op of ops) {
    switch (op.kind) {
      case "arena": {
        ctx.strokeStyle = "#888";
        const side = 2 * op.halfExtent * scale;
        ctx.strokeRect(px(-op.halfExtent), py(op.halfExtent), side, side);
        break;
      }
      case "base": {
        base = op;
        ctx.fillStyle = "#444";
        ctx.beginPath();
        ctx.arc(px(op.x), py(op.y), 0.35 * scale, 0, 2 * Math.PI);
        ctx.fill();
        const heading = (op.headingDeg * Math.PI) / 180;
        ctx.strokeStyle = "#000";
        ctx.beginPath();
        ctx.moveTo(px(op.x), py(op.y));
        ctx.lineTo(
          px(op.x + 0.55 * Math.cos(heading)),
          py(op.y + 0.55 * Math.sin(heading)),
        );
        ctx.stroke();
        break;
      }
      case "lightRing": {
        ctx.strokeStyle = op.color;
        ctx.lineWidth = 3;
        ctx.beginPath();
        ctx.arc(px(base.x), py(base.y), 0.45 * scale, 0, 2 * Math.PI);
        ctx.stroke();
        ctx.lineWidth = 1;
        break;
      }
      case "headTick": {
        const direction = ((base.headingDeg + op.panDeg) * Math.PI) / 180;
        ctx.strokeStyle = "#06c";
        ctx.beginPath();
        ctx.moveTo(px(base.x), py(base.y));
        ctx.lineTo(
          px(base.x + 0.8 * Math.cos(direction)),
          py(base.y + 0.8 * Math.sin(direction)),
        );
        ctx.stroke();
        break;
      }
      case "bodyGlyph": {
        ctx.fillStyle = "#06c";
        const height = Math.max(4, op.heightM * scale);
        ctx.fillRect(px(base.x) - 3, py(base.y) - height, 6, height);
        break;
      }
      case "bowGlyph": {
        ctx.fillStyle = "#c60";
        ctx.font = `${Math.round(0.5 * scale)}px sans-serif`;
        ctx.fillText("⤵", px(base.x) + 8, py(base.y) - 8);
        break;
      }
      case "person": {
        ctx.fillStyle = "#0a0";
        ctx.beginPath();
        ctx.arc(px(op.x), py(op.y), 0.25 * scale, 0, 2 * Math.PI);
        ctx.fill();
        break;
      }
      case "bubble": {
        ctx.fillStyle = op.eventKind === "speech" ? "#fff" : "#eef";
        ctx.strokeStyle = "#333";
        const text = op.eventKind === "speech" ? `"${op.text}"` : `[${op.text}]`;
        const width = ctx.measureText(text).width + 10;
        const bx = px(base.x) + 10;
        const by = py(base.y) - 30;
        ctx.fillRect(bx, by - 14, width, 20);
        ctx.strokeRect(bx, by - 14, width, 20);
        ctx.fillStyle = "#000";
        ctx.fillText(text, bx + 5, by);
        break;
      }
    }
  }
}
