import { describe, expect, it } from "vitest";

import { PlaybackModel } from "../src/playback.js";
import type { TrajectoryPayload } from "../src/types.js";

function trajectory(n: number, step = 0.1): TrajectoryPayload {
  return {
    embodiment: "mobile_v1",
    step_s: step,
    channels: ["x"],
    frames: Array.from({ length: n }, (_, i) => ({
      t: Math.round(i * step * 1e6) / 1e6,
      x: i,
    })),
    events: [
      { t: 0.0, kind: "speech", payload: "hi" },
      { t: 0.5, kind: "light_pattern", payload: "set:#00FF00" },
    ],
  };
}

describe("PlaybackModel", () => {
  it("resets the cursor when switching rounds", () => {
    const model = new PlaybackModel();
    model.load(0, trajectory(11));
    model.seek(0.7);
    expect(model.cursor).toBeCloseTo(0.7);
    model.load(1, trajectory(5));
    expect(model.selectedRound).toBe(1);
    expect(model.cursor).toBe(0);
  });

  it("clamps the cursor into [0, duration]", () => {
    const model = new PlaybackModel();
    model.load(0, trajectory(6)); // duration 0.5
    model.seek(99);
    expect(model.cursor).toBeCloseTo(0.5);
    model.seek(-5);
    expect(model.cursor).toBe(0);
  });

  it("shows exactly the rendered frame's timestamp", () => {
    const model = new PlaybackModel();
    model.load(0, trajectory(11));
    for (const t of [0, 0.04, 0.1, 0.16, 0.99, 1.0]) {
      const frame = model.seek(t)!;
      expect(model.cursor).toBe(frame.t);
    }
  });

  it("advances with wall time scaled by rate", () => {
    const model = new PlaybackModel();
    model.load(0, trajectory(11));
    model.rate = 2;
    model.tick(0.25); // 0.5 s of playback
    expect(model.cursor).toBeCloseTo(0.5);
    model.tick(10);
    expect(model.cursor).toBeCloseTo(1.0); // stops at the end
    expect(model.atEnd).toBe(true);
  });

  it("keeps speech bubbles visible for two seconds", () => {
    const model = new PlaybackModel();
    model.load(0, trajectory(31)); // duration 3.0
    model.seek(0.0);
    expect(model.activeBubbles().map((e) => e.payload)).toEqual(["hi"]);
    model.seek(1.9);
    expect(model.activeBubbles().map((e) => e.payload)).toEqual(["hi", "set:#00FF00"]);
    model.seek(2.2); // speech window [0, 2] has closed, light's [0.5, 2.5] has not
    expect(model.activeBubbles().map((e) => e.payload)).toEqual(["set:#00FF00"]);
    model.seek(2.6);
    expect(model.activeBubbles()).toEqual([]);
  });
});
