// Entry point: wires the controller to the page.

import { ApiClient } from "./api.js";
import { AppController } from "./controller.js";
import { DomView } from "./dom.js";

const SERVICE_URL =
  new URLSearchParams(window.location.search).get("service") ??
  "http://127.0.0.1:8008";

const api = new ApiClient(SERVICE_URL);
const view = new DomView();
const controller = new AppController(api, view);

const instruction = document.getElementById("instruction") as HTMLInputElement;
const embodiment = document.getElementById("embodiment") as HTMLSelectElement;
const scenario = document.getElementById("scenario") as HTMLSelectElement;
const noSpeech = document.getElementById("no-speech") as HTMLInputElement;
const startButton = document.getElementById("start") as HTMLButtonElement;
const feedbackText = document.getElementById("feedback-text") as HTMLTextAreaElement;
const feedbackSend = document.getElementById("feedback-send") as HTMLButtonElement;
const skillName = document.getElementById("skill-name") as HTMLInputElement;
const skillSave = document.getElementById("skill-save") as HTMLButtonElement;
const replayButton = document.getElementById("replay-round") as HTMLButtonElement;

async function populatePickers() {
  const { embodiments } = await api.embodiments();
  embodiment.replaceChildren(
    ...embodiments.map((e) => new Option(e.id, e.id)),
  );
  const { scenarios } = await api.scenarios();
  scenario.replaceChildren(...scenarios.map((s) => new Option(s.id, s.id)));
}

startButton.addEventListener("click", () => {
  void controller.start(
    instruction.value,
    embodiment.value,
    scenario.value,
    noSpeech.checked ? ["speech"] : [],
  );
});

feedbackSend.addEventListener("click", () => {
  const text = feedbackText.value.trim();
  if (!text) return;
  void controller.submitFeedback(text).then((payload) => {
    if (payload) feedbackText.value = "";
  });
});

skillSave.addEventListener("click", () => {
  const name = skillName.value.trim();
  if (!name) return;
  void controller.saveSkill(name);
});

replayButton.addEventListener("click", () => {
  if (controller.playback.selectedRound >= 0) {
    void controller.playRound(controller.playback.selectedRound);
  }
});

void populatePickers();
