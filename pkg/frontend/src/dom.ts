// Browser bindings: renders controller state into the page and forwards
// user input back to it.

import type { View } from "./controller.js";
import type { RoundCard } from "./rounds.js";
import { paint, type DrawOp } from "./scene.js";
import type { ErrorEnvelope, SkillPayload } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export class DomView implements View {
  private canvas = el<HTMLCanvasElement>("scene");
  private ctx = this.canvas.getContext("2d")!;
  private cursorLabel = el<HTMLSpanElement>("cursor-time");
  private cardsHost = el<HTMLDivElement>("round-cards");
  private feedbackInput = el<HTMLTextAreaElement>("feedback-text");
  private feedbackButton = el<HTMLButtonElement>("feedback-send");
  private feedbackNotice = el<HTMLDivElement>("feedback-notice");
  private errorPanel = el<HTMLPreElement>("stage-error");
  private skillsHost = el<HTMLUListElement>("skill-list");
  private skillError = el<HTMLDivElement>("skill-error");

  renderScene(ops: DrawOp[], cursorT: number): void {
    paint(this.ctx, ops);
    this.cursorLabel.textContent = `${cursorT.toFixed(1)} s`;
  }

  renderCards(cards: RoundCard[]): void {
    this.cardsHost.replaceChildren(
      ...cards.map((card) => {
        const node = document.createElement("article");
        node.className = "round-card";
        const badge = card.routeBadge
          ? `<span class="badge route-${card.routeBadge}">${card.routeBadge}</span>`
          : "";
        const feedback = card.feedbackText
          ? `<p class="feedback">“${card.feedbackText}”</p>`
          : "";
        const human = card.humanMotion
          ? `<p class="human">${card.humanMotion}</p>`
          : "";
        const diff = card.diffSummary.length
          ? `<ul class="diff">${card.diffSummary.map((d) => `<li>${d}</li>`).join("")}</ul>`
          : "";
        node.innerHTML = `
          <header>Round ${card.index} ${badge}</header>
          ${feedback}${human}
          <ol class="steps">${card.steps.map((s) => `<li>${s}</li>`).join("")}</ol>
          ${diff}
          <details><summary>program</summary><pre>${card.programSource}</pre></details>
        `;
        return node;
      }),
    );
  }

  setFeedbackEnabled(enabled: boolean, reason: string | null): void {
    this.feedbackInput.disabled = !enabled;
    this.feedbackButton.disabled = !enabled;
    this.feedbackNotice.textContent = reason ?? "";
  }

  showStageError(envelope: ErrorEnvelope): void {
    this.errorPanel.hidden = false;
    this.errorPanel.textContent = `${envelope.stage ?? "?"} → ${envelope.code}\n${envelope.message}`;
  }

  offerRetry(draft: string): void {
    this.feedbackInput.value = draft; // never lose the user's words
    this.feedbackNotice.textContent = "network hiccup — press send to retry";
  }

  renderSkills(skills: SkillPayload[]): void {
    this.skillError.textContent = "";
    this.skillsHost.replaceChildren(
      ...skills.map((skill) => {
        const item = document.createElement("li");
        item.title = skill.docstring; // docstring on hover
        item.textContent = `${skill.name} (${skill.provenance})`;
        return item;
      }),
    );
  }

  showSkillError(message: string): void {
    this.skillError.textContent = message;
  }
}
