// Payload shapes of the behavior service REST/SSE API.

export interface Frame {
  t: number;
  [channel: string]: number;
}

export interface TrajectoryEvent {
  t: number;
  kind: "speech" | "sound" | "light_pattern";
  payload: string;
}

export interface TrajectoryPayload {
  embodiment: string;
  step_s: number;
  channels: string[];
  frames: Frame[];
  events: TrajectoryEvent[];
}

export interface HumanPlanPayload {
  cot: string;
  expressive_motion: string;
}

export interface RobotPlanPayload {
  cot: string;
  steps: string[];
}

export interface ProgramPayload {
  source: string;
  entry_skill: string;
  parameters: { name: string; type: string; default: unknown }[];
}

export interface FeedbackPayload {
  user_text: string;
  cot: string;
  change_summary: string;
  route: "BehaviorAndCode" | "CodeOnly";
}

export interface DiffOp {
  kind: string;
  [key: string]: unknown;
}

export interface RoundPayload {
  session_id: string;
  round: number;
  human_plan: HumanPlanPayload | null;
  robot_plan: RobotPlanPayload;
  program: ProgramPayload;
  feedback: FeedbackPayload | null;
  route: string | null;
  rounds_remaining: number;
  trajectory: TrajectoryPayload | null;
  diff: DiffOp[];
}

export interface SessionSummary {
  id: string;
  instruction: { text: string; embodiment_id: string; scenario_id: string };
  created_at: number;
  max_rounds: number;
}

export interface SkillPayload {
  name: string;
  docstring: string;
  parameters: { name: string; type: string; default: unknown }[];
  body: string;
  provenance: string;
}

export interface ScenarioPayload {
  id: string;
  waypoints: [number, number, number][];
  annotations: [number, string][];
}

export interface EmbodimentPayload {
  id: string;
  channels: string[];
  primitives: string[];
  capabilities: string;
}

export interface ErrorEnvelope {
  code: string;
  message: string;
  stage?: string;
}
