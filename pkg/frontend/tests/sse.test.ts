import { describe, expect, it } from "vitest";

import { streamTrajectory } from "../src/sse.js";
import type { Frame } from "../src/types.js";

function sseResponse(chunks: string[]): Response {
  const encoder = new TextEncoder();
  const stream = new ReadableStream<Uint8Array>({
    start(controller) {
      for (const chunk of chunks) controller.enqueue(encoder.encode(chunk));
      controller.close();
    },
  });
  return new Response(stream, {
    status: 200,
    headers: { "content-type": "text/event-stream" },
  });
}

describe("sse reader", () => {
  it("parses frames split across arbitrary chunk boundaries", async () => {
    const body =
      'event: frame\ndata: {"t": 0.0, "x": 0}\n\n' +
      'event: frame\ndata: {"t": 0.1, "x": 1}\n\n' +
      'event: complete\ndata: {"frames": 2, "events": []}\n\n';
    // Split mid-line to exercise buffering.
    const chunks = [body.slice(0, 17), body.slice(17, 40), body.slice(40)];
    const original = globalThis.fetch;
    globalThis.fetch = async () => sseResponse(chunks);
    try {
      const frames: Frame[] = [];
      let completed: { frames: number } | null = null;
      await streamTrajectory("http://svc", "sid", 0, 0, {
        onFrame: (frame) => frames.push(frame),
        onComplete: (summary) => {
          completed = summary as { frames: number };
        },
      });
      expect(frames.map((f) => f.t)).toEqual([0.0, 0.1]);
      expect(completed).toEqual({ frames: 2, events: [] });
    } finally {
      globalThis.fetch = original;
    }
  });
});
