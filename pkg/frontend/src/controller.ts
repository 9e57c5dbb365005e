// Application controller: session lifecycle, playback, feedback, and skills.
// The view interface is the seam between this logic and the DOM, so the whole
// flow runs identically under tests and in the browser.

import { ApiClient, ApiError } from "./api.js";
import { PlaybackModel } from "./playback.js";
import { buildRoundCard, insertCard, type RoundCard } from "./rounds.js";
import { computeScene, type DrawOp } from "./scene.js";
import { streamTrajectory } from "./sse.js";
import type {
  ErrorEnvelope,
  RoundPayload,
  ScenarioPayload,
  SkillPayload,
  TrajectoryPayload,
} from "./types.js";

export interface View {
  renderCards(cards: RoundCard[]): void;
  renderScene(ops: DrawOp[], cursorT: number): void;
  setFeedbackEnabled(enabled: boolean, reason: string | null): void;
  showStageError(envelope: ErrorEnvelope): void;
  offerRetry(draft: string): void;
  renderSkills(skills: SkillPayload[]): void;
  showSkillError(message: string): void;
}

export interface ControllerOptions {
  playbackRate?: number; // frames per second requested from the stream; 0 = burst
}

export class AppController {
  readonly playback = new PlaybackModel();
  cards: RoundCard[] = [];
  sessionId: string | null = null;
  embodiment = "mobile_v1";
  scenario: ScenarioPayload | null = null;
  roundsRemaining = 0;
  feedbackEnabled = false;
  framesRendered = 0;
  inFlight = false;
  private trajectories = new Map<number, TrajectoryPayload>();

  constructor(
    readonly api: ApiClient,
    readonly view: View,
    readonly options: ControllerOptions = {},
  ) {}

  private async loadScenario(scenarioId: string): Promise<void> {
    const { scenarios } = await this.api.scenarios();
    this.scenario = scenarios.find((s) => s.id === scenarioId) ?? null;
  }

  private acceptRound(payload: RoundPayload): void {
    this.cards = insertCard(this.cards, buildRoundCard(payload));
    this.view.renderCards(this.cards);
    if (payload.trajectory) {
      this.trajectories.set(payload.round, payload.trajectory);
    }
    this.roundsRemaining = payload.rounds_remaining;
    this.feedbackEnabled = this.roundsRemaining > 0;
    this.view.setFeedbackEnabled(
      this.feedbackEnabled,
      this.feedbackEnabled ? null : "feedback round limit reached",
    );
  }

  /** Create a session and generate round 0. */
  async start(
    instruction: string,
    embodiment: string,
    scenarioId: string,
    modalityConstraints: string[] = [],
  ): Promise<void> {
    this.embodiment = embodiment;
    await this.loadScenario(scenarioId);
    const { id } = await this.api.createSession({
      instruction,
      embodiment,
      scenario: scenarioId,
      modality_constraints: modalityConstraints,
    });
    this.sessionId = id;
    try {
      this.acceptRound(await this.api.generate(id));
    } catch (error) {
      if (error instanceof ApiError && error.status === 502) {
        this.view.showStageError(error.envelope);
        return;
      }
      throw error;
    }
    await this.playRound(0);
  }

  /** Rebuild everything for an existing session from the service. */
  async resume(sessionId: string): Promise<void> {
    const state = await this.api.getSession(sessionId);
    this.sessionId = sessionId;
    for (let k = 0; k <= state.round_index; k++) {
      this.acceptRound(await this.api.getRound(sessionId, k));
    }
  }

  /** Stream one round's trajectory through the scene; returns frames drawn. */
  async playRound(round: number): Promise<number> {
    if (this.sessionId === null) throw new Error("no session");
    const trajectory = this.trajectories.get(round);
    if (trajectory) this.playback.load(round, trajectory);
    let rendered = 0;
    const rate = this.options.playbackRate ?? 10;
    await streamTrajectory(this.api.baseUrl, this.sessionId, round, rate, {
      onFrame: (frame) => {
        rendered += 1;
        this.playback.seek(frame.t);
        const shown = this.playback.currentFrame() ?? frame;
        const ops = computeScene(
          shown,
          this.embodiment,
          this.scenario,
          this.playback.activeBubbles(),
        );
        this.view.renderScene(ops, shown.t);
      },
      onComplete: () => {},
    });
    this.framesRendered = rendered;
    return rendered;
  }

  /** Send one feedback utterance; appends a card and auto-plays the round. */
  async submitFeedback(text: string): Promise<RoundPayload | null> {
    if (this.sessionId === null) throw new Error("no session");
    if (!this.feedbackEnabled || this.inFlight) return null;
    this.inFlight = true;
    this.view.setFeedbackEnabled(false, "round in flight");
    try {
      const payload = await this.api.feedback(this.sessionId, text);
      this.acceptRound(payload);
      await this.playRound(payload.round);
      return payload;
    } catch (error) {
      if (error instanceof ApiError) {
        if (error.status === 429) {
          this.feedbackEnabled = false;
          this.view.setFeedbackEnabled(false, "feedback round limit reached");
          return null;
        }
        if (error.status === 502) {
          this.feedbackEnabled = true;
          this.view.setFeedbackEnabled(true, null);
          this.view.showStageError(error.envelope);
          return null;
        }
        throw error;
      }
      // Transport failure: keep the draft and offer a retry.
      this.feedbackEnabled = true;
      this.view.setFeedbackEnabled(true, null);
      this.view.offerRetry(text);
      return null;
    } finally {
      this.inFlight = false;
      if (this.feedbackEnabled) this.view.setFeedbackEnabled(true, null);
    }
  }

  async saveSkill(name: string): Promise<boolean> {
    if (this.sessionId === null) throw new Error("no session");
    const round = this.cards.length ? this.cards[this.cards.length - 1].index : 0;
    try {
      await this.api.saveSkill(this.sessionId, round, name);
    } catch (error) {
      if (error instanceof ApiError) {
        this.view.showSkillError(error.envelope.message);
        return false;
      }
      throw error;
    }
    const { skills } = await this.api.listSkills();
    this.view.renderSkills(skills);
    return true;
  }
}
