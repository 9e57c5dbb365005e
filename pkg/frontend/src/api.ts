// Typed client for the behavior service; the UI holds no state the service
// cannot reconstruct.

import type {
  EmbodimentPayload,
  ErrorEnvelope,
  RoundPayload,
  ScenarioPayload,
  SessionSummary,
  SkillPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly envelope: ErrorEnvelope,
  ) {
    super(`${envelope.code}: ${envelope.message}`);
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  const body = await response.json();
  if (!response.ok) {
    const envelope: ErrorEnvelope =
      body && typeof body.code === "string"
        ? body
        : { code: `HTTP${response.status}`, message: JSON.stringify(body) };
    throw new ApiError(response.status, envelope);
  }
  return body as T;
}

export interface CreateSessionRequest {
  instruction: string;
  embodiment: string;
  scenario: string;
  modality_constraints?: string[];
  max_rounds?: number;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async createSession(body: CreateSessionRequest): Promise<{ id: string }> {
    const response = await fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return parseOrThrow(response);
  }

  async generate(sessionId: string): Promise<RoundPayload> {
    const response = await fetch(this.url(`/sessions/${sessionId}/generate`), {
      method: "POST",
    });
    return parseOrThrow(response);
  }

  async feedback(sessionId: string, text: string): Promise<RoundPayload> {
    const response = await fetch(this.url(`/sessions/${sessionId}/feedback`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text }),
    });
    return parseOrThrow(response);
  }

  async getSession(sessionId: string): Promise<{
    id: string;
    round_index: number;
    max_rounds: number;
    rounds: unknown[];
    trajectory_rounds: number[];
  }> {
    return parseOrThrow(await fetch(this.url(`/sessions/${sessionId}`)));
  }

  async getRound(sessionId: string, round: number): Promise<RoundPayload> {
    return parseOrThrow(
      await fetch(this.url(`/sessions/${sessionId}/rounds/${round}`)),
    );
  }

  async listSessions(): Promise<{ sessions: SessionSummary[] }> {
    return parseOrThrow(await fetch(this.url("/sessions")));
  }

  async listSkills(): Promise<{ version: number; skills: SkillPayload[] }> {
    return parseOrThrow(await fetch(this.url("/skills")));
  }

  async saveSkill(
    sessionId: string,
    round: number,
    name: string,
  ): Promise<SkillPayload> {
    const response = await fetch(this.url("/skills"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ session_id: sessionId, round, name }),
    });
    return parseOrThrow(response);
  }

  async scenarios(): Promise<{ scenarios: ScenarioPayload[] }> {
    return parseOrThrow(await fetch(this.url("/scenarios")));
  }

  async embodiments(): Promise<{ embodiments: EmbodimentPayload[] }> {
    return parseOrThrow(await fetch(this.url("/embodiments")));
  }
}
