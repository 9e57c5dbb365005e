"""Core value types shared by the pipeline, simulator, metrics, and service.

Everything here is an immutable value with a dict round-trip for the
JSON-lines persistence format. Sessions are the one mutable aggregate and are
only ever mutated behind the service's per-session lock.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

from . import ebl
from .errors import MaxRoundsExceeded

FRAME_STEP_S = 0.1
DEFAULT_MAX_ROUNDS = 10

ROUTE_BEHAVIOR_AND_CODE = "BehaviorAndCode"
ROUTE_CODE_ONLY = "CodeOnly"
ROUTES = (ROUTE_BEHAVIOR_AND_CODE, ROUTE_CODE_ONLY)

EVENT_KINDS = ("speech", "sound", "light_pattern")

PROVENANCES = ("builtin_example", "learned", "user_saved")


@dataclass(frozen=True)
class Instruction:
    """A natural-language request for an expressive behavior."""

    text: str
    embodiment_id: str
    modality_constraints: tuple[str, ...] = ()
    scenario_id: str = "empty"

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("instruction text must be non-empty")

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "embodiment_id": self.embodiment_id,
            "modality_constraints": list(self.modality_constraints),
            "scenario_id": self.scenario_id,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Instruction":
        return cls(
            d["text"],
            d["embodiment_id"],
            tuple(d.get("modality_constraints", ())),
            d.get("scenario_id", "empty"),
        )


@dataclass(frozen=True)
class HumanMotionPlan:
    """How a person would express the behavior: reasoning plus the motion."""

    cot: str
    expressive_motion: str

    def __post_init__(self):
        if not self.expressive_motion.strip():
            raise ValueError("expressive_motion must be non-empty")

    def to_dict(self) -> dict:
        return {"cot": self.cot, "expressive_motion": self.expressive_motion}

    @classmethod
    def from_dict(cls, d: dict) -> "HumanMotionPlan":
        return cls(d["cot"], d["expressive_motion"])


@dataclass(frozen=True)
class RobotMotionPlan:
    """Step-by-step procedure for the robot, with the reasoning behind it."""

    cot: str
    steps: tuple[str, ...]

    def __post_init__(self):
        if not self.steps:
            raise ValueError("a robot motion plan needs at least one step")
        if any(not s.strip() for s in self.steps):
            raise ValueError("robot motion steps must be non-empty")

    def to_dict(self) -> dict:
        return {"cot": self.cot, "steps": list(self.steps)}

    @classmethod
    def from_dict(cls, d: dict) -> "RobotMotionPlan":
        return cls(d["cot"], tuple(d["steps"]))


def _semantic_type(value: ebl.Number | ebl.Str | ebl.Color) -> str:
    if isinstance(value, ebl.Number):
        if value.unit:
            return value.unit
        return "int" if value.is_int else "number"
    if isinstance(value, ebl.Str):
        return "string"
    return "color"


def _python_value(value) -> object:
    if isinstance(value, ebl.Number):
        return int(value.value) if value.is_int else value.value
    if isinstance(value, ebl.Str):
        return value.value
    return value.hex


@dataclass(frozen=True)
class BehaviorProgram:
    """A generated behavior: canonical source, its AST, and its parameters."""

    source: str
    ast: ebl.Program = field(repr=False)
    parameters: tuple[tuple[str, str, object], ...]  # (name, semantic type, default)
    entry_skill: str

    @classmethod
    def from_source(cls, source: str) -> "BehaviorProgram":
        ast = ebl.parse(source)
        canonical = ebl.pretty_print(ast)
        ast = ebl.parse(canonical)  # normalizes wait-literal units
        entry = ebl.entry_skill_name(ast)
        entry_def = ast.skill(entry)
        params = tuple(
            (p.name, _semantic_type(p.default), _python_value(p.default))
            for p in entry_def.params
        )
        return cls(canonical, ast, params, entry)

    def default_args(self) -> dict[str, object]:
        return {name: default for name, _, default in self.parameters}

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "entry_skill": self.entry_skill,
            "parameters": [
                {"name": n, "type": t, "default": d} for n, t, d in self.parameters
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BehaviorProgram":
        return cls.from_source(d["source"])


def canonicalize_program(program: BehaviorProgram) -> BehaviorProgram:
    """Rewrite a program's source into deterministic canonical form.

    Idempotent: the canonical text is a pure function of the AST.
    """
    canonical = ebl.pretty_print(program.ast)
    if canonical == program.source:
        return program
    return replace(program, source=canonical, ast=ebl.parse(canonical))


@dataclass(frozen=True)
class FeedbackEntry:
    """A user correction, the model's response to it, and the routing decision."""

    user_text: str
    cot: str
    change_summary: str
    route: str

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ValueError(f"route must be one of {ROUTES}, got {self.route!r}")
        if not self.change_summary.strip():
            raise ValueError("change_summary must be non-empty")

    def to_dict(self) -> dict:
        return {
            "user_text": self.user_text,
            "cot": self.cot,
            "change_summary": self.change_summary,
            "route": self.route,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FeedbackEntry":
        return cls(d["user_text"], d["cot"], d["change_summary"], d["route"])


@dataclass(frozen=True)
class Round:
    """Artifacts of one generation round."""

    robot_plan: RobotMotionPlan
    program: BehaviorProgram
    human_plan: HumanMotionPlan | None = None
    feedback: FeedbackEntry | None = None

    def to_dict(self) -> dict:
        return {
            "human_plan": self.human_plan.to_dict() if self.human_plan else None,
            "robot_plan": self.robot_plan.to_dict(),
            "program": self.program.to_dict(),
            "feedback": self.feedback.to_dict() if self.feedback else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Round":
        return cls(
            RobotMotionPlan.from_dict(d["robot_plan"]),
            BehaviorProgram.from_dict(d["program"]),
            HumanMotionPlan.from_dict(d["human_plan"]) if d.get("human_plan") else None,
            FeedbackEntry.from_dict(d["feedback"]) if d.get("feedback") else None,
        )


@dataclass
class Session:
    """One instruction and its rounds of generated behavior."""

    id: str
    instruction: Instruction
    rounds: list[Round] = field(default_factory=list)
    round_index: int = 0
    max_rounds: int = DEFAULT_MAX_ROUNDS

    def require_feedback_capacity(self) -> None:
        if self.round_index >= self.max_rounds:
            raise MaxRoundsExceeded(self.round_index, self.max_rounds)

    @property
    def current_round(self) -> Round | None:
        return self.rounds[-1] if self.rounds else None

    @property
    def human_plan(self) -> HumanMotionPlan | None:
        return self.rounds[0].human_plan if self.rounds else None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "instruction": self.instruction.to_dict(),
            "rounds": [r.to_dict() for r in self.rounds],
            "round_index": self.round_index,
            "max_rounds": self.max_rounds,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Session":
        return cls(
            d["id"],
            Instruction.from_dict(d["instruction"]),
            [Round.from_dict(r) for r in d["rounds"]],
            d["round_index"],
            d["max_rounds"],
        )


@dataclass(frozen=True)
class StateFrame:
    t: float
    channels: dict[str, float]

    def to_dict(self) -> dict:
        return {"t": self.t, **self.channels}

    @classmethod
    def from_dict(cls, d: dict, channel_names: tuple[str, ...]) -> "StateFrame":
        return cls(d["t"], {name: d[name] for name in channel_names})


@dataclass(frozen=True)
class Event:
    t: float
    kind: str
    payload: str

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"event kind must be one of {EVENT_KINDS}, got {self.kind!r}")

    def to_dict(self) -> dict:
        return {"t": self.t, "kind": self.kind, "payload": self.payload}

    @classmethod
    def from_dict(cls, d: dict) -> "Event":
        return cls(d["t"], d["kind"], d["payload"])


@dataclass(frozen=True)
class Trajectory:
    """Timestamped state frames plus discrete events from one execution."""

    embodiment_id: str
    channel_names: tuple[str, ...]
    frames: tuple[StateFrame, ...]
    events: tuple[Event, ...]
    step_s: float = FRAME_STEP_S

    def __post_init__(self):
        if not self.frames:
            raise ValueError("a trajectory needs at least one frame")
        for i, frame in enumerate(self.frames):
            if abs(frame.t - i * self.step_s) > 1e-6:
                raise ValueError(
                    f"frame {i} at t={frame.t} breaks the fixed {self.step_s}s step"
                )
        last = self.frames[-1].t
        for event in self.events:
            if not (0.0 <= event.t <= last + 1e-9):
                raise ValueError(f"event at t={event.t} outside [0, {last}]")

    @property
    def duration_s(self) -> float:
        return self.frames[-1].t

    def channel(self, name: str) -> list[float]:
        return [f.channels[name] for f in self.frames]

    def to_dict(self) -> dict:
        return {
            "embodiment": self.embodiment_id,
            "step_s": self.step_s,
            "channels": list(self.channel_names),
            "frames": [f.to_dict() for f in self.frames],
            "events": [e.to_dict() for e in self.events],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Trajectory":
        names = tuple(d["channels"])
        return cls(
            d["embodiment"],
            names,
            tuple(StateFrame.from_dict(f, names) for f in d["frames"]),
            tuple(Event.from_dict(e) for e in d["events"]),
            d.get("step_s", FRAME_STEP_S),
        )


@dataclass(frozen=True)
class SkillEntry:
    """One stored behavior function, reusable in later generations."""

    name: str
    docstring: str
    parameters: tuple[tuple[str, str, object], ...]
    body: str  # EBL source of a single skill definition
    provenance: str

    def __post_init__(self):
        if not self.docstring.strip():
            raise ValueError("skill docstring must be non-empty")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"provenance must be one of {PROVENANCES}")

    @classmethod
    def from_body(cls, body: str, provenance: str) -> "SkillEntry":
        program = ebl.parse(body)
        if len(program.skills) != 1:
            raise ValueError("a skill entry body must define exactly one skill")
        skill = program.skills[0]
        if not skill.docstring or not skill.docstring.strip():
            raise ValueError("skill docstring must be non-empty")
        canonical = ebl.pretty_print(program)
        params = tuple(
            (p.name, _semantic_type(p.default), _python_value(p.default))
            for p in skill.params
        )
        return cls(skill.name, skill.docstring, params, canonical, provenance)

    def signature_text(self) -> str:
        """Signature plus docstring, as injected into prompts."""
        skill = ebl.parse(self.body).skills[0]
        params = ", ".join(p.render() for p in skill.params)
        return f'skill {self.name}({params})\n    """{self.docstring}"""'

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "docstring": self.docstring,
            "parameters": [
                {"name": n, "type": t, "default": d} for n, t, d in self.parameters
            ],
            "body": self.body,
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SkillEntry":
        return cls(
            d["name"],
            d["docstring"],
            tuple((p["name"], p["type"], p["default"]) for p in d["parameters"]),
            d["body"],
            d["provenance"],
        )


def args_signature(parameters: Mapping[str, object]) -> str:
    return ", ".join(f"{k}={v!r}" for k, v in parameters.items())
