import { describe, expect, it } from "vitest";

import { buildRoundCard, describeDiffOp, insertCard } from "../src/rounds.js";
import type { RoundPayload } from "../src/types.js";

function payload(round: number, route: string | null): RoundPayload {
  return {
    session_id: "s",
    round,
    human_plan: round === 0 ? { cot: "c", expressive_motion: "nod politely" } : null,
    robot_plan: { cot: "r", steps: ["tilt down", "tilt up"] },
    program: { source: "skill nod() {}", entry_skill: "nod", parameters: [] },
    feedback:
      round === 0
        ? null
        : { user_text: "deeper", cot: "f", change_summary: "[Change] deeper", route: "CodeOnly" },
    route,
    rounds_remaining: 10 - round,
    trajectory: null,
    diff:
      round === 0
        ? []
        : [{ kind: "SwappedOrder", i: 0, j: 1, first: "a()", second: "b()" }],
  };
}

describe("round cards", () => {
  it("gives round zero no route badge", () => {
    expect(buildRoundCard(payload(0, null)).routeBadge).toBeNull();
    expect(buildRoundCard(payload(1, "CodeOnly")).routeBadge).toBe("CodeOnly");
  });

  it("summarizes diffs in words", () => {
    const card = buildRoundCard(payload(2, "CodeOnly"));
    expect(card.diffSummary).toEqual(["swapped a() and b()"]);
    expect(
      describeDiffOp({ kind: "InsertedCall", index: 1, statement: "x()", before: "y()" }),
    ).toBe("inserted x() before y()");
    expect(
      describeDiffOp({ kind: "WrappedInRepeat", start: 1, end: 2, count: 3 }),
    ).toBe("wrapped statements 1..2 in repeat 3");
  });

  it("keeps cards ordered by round and replaces duplicates", () => {
    let cards = insertCard([], buildRoundCard(payload(1, "CodeOnly")));
    cards = insertCard(cards, buildRoundCard(payload(0, null)));
    cards = insertCard(cards, buildRoundCard(payload(1, "BehaviorAndCode")));
    expect(cards.map((c) => c.index)).toEqual([0, 1]);
    expect(cards[1].routeBadge).toBe("BehaviorAndCode");
  });
});
