// Round cards: what each pipeline round shows the user.

import type { DiffOp, RoundPayload } from "./types.js";

export interface RoundCard {
  index: number;
  humanMotion: string | null;
  steps: string[];
  programSource: string;
  routeBadge: string | null; // round 0 carries no badge
  feedbackText: string | null;
  changeSummary: string | null;
  diffSummary: string[];
}

export function describeDiffOp(op: DiffOp): string {
  switch (op.kind) {
    case "InsertedCall":
      return op.before
        ? `inserted ${op.statement} before ${op.before}`
        : `inserted ${op.statement} at the end`;
    case "RemovedCall":
      return `removed ${op.statement}`;
    case "SwappedOrder":
      return `swapped ${op.first} and ${op.second}`;
    case "WrappedInRepeat":
      return `wrapped statements ${op.start}..${op.end} in repeat ${op.count}`;
    case "RetargetedCall":
      return `replaced ${op.old} with ${op.new}`;
    default:
      return JSON.stringify(op);
  }
}

export function buildRoundCard(payload: RoundPayload): RoundCard {
  return {
    index: payload.round,
    humanMotion: payload.human_plan?.expressive_motion ?? null,
    steps: payload.robot_plan.steps,
    programSource: payload.program.source,
    routeBadge: payload.round === 0 ? null : payload.route,
    feedbackText: payload.feedback?.user_text ?? null,
    changeSummary: payload.feedback?.change_summary ?? null,
    diffSummary: payload.diff.map(describeDiffOp),
  };
}

export function insertCard(cards: RoundCard[], card: RoundCard): RoundCard[] {
  const next = cards.filter((c) => c.index !== card.index);
  next.push(card);
  next.sort((a, b) => a.index - b.index);
  return next;
}
