// Server-sent-events reader for trajectory playback, built on fetch so the
// same code runs in the browser and under node-based tests.

import type { Frame } from "./types.js";

export interface StreamHandlers {
  onFrame: (frame: Frame) => void;
  onComplete: (summary: { frames: number; events: unknown[] }) => void;
}

interface SseMessage {
  event: string;
  data: string;
}

function* parseSse(buffer: string): Generator<SseMessage | string> {
  // Yields complete messages, then the unconsumed remainder (a string).
  let rest = buffer;
  for (;;) {
    const split = rest.indexOf("\n\n");
    if (split < 0) {
      yield rest;
      return;
    }
    const block = rest.slice(0, split);
    rest = rest.slice(split + 2);
    let event = "message";
    const data: string[] = [];
    for (const line of block.split("\n")) {
      if (line.startsWith("event:")) event = line.slice(6).trim();
      else if (line.startsWith("data:")) data.push(line.slice(5).trim());
    }
    yield { event, data: data.join("\n") };
  }
}

/** Stream one round's trajectory; resolves when the complete marker arrives. */
export async function streamTrajectory(
  baseUrl: string,
  sessionId: string,
  round: number,
  rate: number,
  handlers: StreamHandlers,
  signal?: AbortSignal,
): Promise<void> {
  const response = await fetch(
    `${baseUrl}/sessions/${sessionId}/rounds/${round}/trajectory?rate=${rate}`,
    { signal },
  );
  if (!response.ok || response.body === null) {
    throw new Error(`trajectory stream failed: ${response.status}`);
  }
  const reader = response.body.getReader();
  const decoder = new TextDecoder();
  let buffer = "";
  for (;;) {
    const { done, value } = await reader.read();
    if (done) return;
    buffer += decoder.decode(value, { stream: true });
    let remainder = "";
    for (const item of parseSse(buffer)) {
      if (typeof item === "string") {
        remainder = item;
        break;
      }
      if (item.event === "frame") {
        handlers.onFrame(JSON.parse(item.data) as Frame);
      } else if (item.event === "complete") {
        handlers.onComplete(JSON.parse(item.data));
        return;
      }
    }
    buffer = remainder;
  }
}
