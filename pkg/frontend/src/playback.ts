// Playback state for one session: which round is selected, where the cursor
// sits, and which frame that maps to. The shown cursor time always equals the
// rendered frame's timestamp.

import type { Frame, TrajectoryEvent, TrajectoryPayload } from "./types.js";

export const BUBBLE_SECONDS = 2.0;

export class PlaybackModel {
  frames: Frame[] = [];
  events: TrajectoryEvent[] = [];
  stepS = 0.1;
  selectedRound = -1;
  rate = 1.0;
  private cursorIndex = 0;
  private wallRemainder = 0;

  get duration(): number {
    return this.frames.length ? this.frames[this.frames.length - 1].t : 0;
  }

  get cursor(): number {
    return this.frames.length ? this.frames[this.cursorIndex].t : 0;
  }

  get atEnd(): boolean {
    return this.cursorIndex >= this.frames.length - 1;
  }

  load(round: number, trajectory: TrajectoryPayload): void {
    this.selectedRound = round;
    this.frames = trajectory.frames;
    this.events = trajectory.events;
    this.stepS = trajectory.step_s;
    this.cursorIndex = 0; // switching rounds resets the cursor
    this.wallRemainder = 0;
  }

  currentFrame(): Frame | null {
    return this.frames.length ? this.frames[this.cursorIndex] : null;
  }

  /** Clamp to [0, duration] and snap to the frame at or before t. */
  seek(t: number): Frame | null {
    if (!this.frames.length) return null;
    const clamped = Math.min(Math.max(t, 0), this.duration);
    this.cursorIndex = Math.min(
      Math.floor(clamped / this.stepS + 1e-9),
      this.frames.length - 1,
    );
    return this.currentFrame();
  }

  /** Advance by wall-clock dt scaled by the playback rate. */
  tick(wallDtS: number): Frame | null {
    if (!this.frames.length) return null;
    this.wallRemainder += wallDtS * this.rate;
    while (this.wallRemainder >= this.stepS && !this.atEnd) {
      this.wallRemainder -= this.stepS;
      this.cursorIndex += 1;
    }
    if (this.atEnd) this.wallRemainder = 0;
    return this.currentFrame();
  }

  /** Events whose display window [t, t + 2 s] covers the cursor. */
  activeBubbles(): TrajectoryEvent[] {
    const now = this.cursor;
    return this.events.filter(
      (e) => e.t <= now + 1e-9 && now <= e.t + BUBBLE_SECONDS + 1e-9,
    );
  }
}
