"""The four-stage generation pipeline and its orchestration.

Stage 1 turns an instruction into a human expressive motion, stage 2 maps it
onto the robot's capabilities as a step procedure, stage 3 emits a behavior
program, and stage 4 classifies user feedback into one of two re-entry
routes. Each stage is an independent gateway call whose prompt carries its
full context; assembled prompts expose their ordered components so tests can
assert the exact layout.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import ebl
from .domain import (
    ROUTE_BEHAVIOR_AND_CODE,
    ROUTE_CODE_ONLY,
    ROUTES,
    BehaviorProgram,
    FeedbackEntry,
    HumanMotionPlan,
    Instruction,
    RobotMotionPlan,
    Round,
    Session,
)
from .errors import CodeRejected, MalformedStageOutput, ParseError
from .gateway import DEFAULT_MODEL_ID, DEFAULT_TEMPERATURE, CompletionRequest, Gateway
from .robots.manifests import EmbodimentManifest
from .templates import PromptTemplate, StageOutput, TemplateSet, split_sections

GRAMMAR_SUMMARY = """\
Write behavior programs in EBL (version ebl/1):
- Define skills: skill name(param=default, ...) { \"\"\"One-line docstring.\"\"\" ... }
- Call robot APIs and skills with named arguments only, e.g. head_pan(angle_deg=20deg)
- Numbers may carry a unit suffix: 20deg, 1.5m, 0.5s. Colors are #RRGGBB. Strings use double quotes.
- Control flow: repeat N { ... }, if sensor() { ... } else { ... }, wait 1.0s
- Repeat counts are literal integers (at most 100); recursion is not allowed.
- Write small, reusable skills with docstrings and named arguments, composed by
  one final entry skill that no other skill calls.
- Emit exactly one fenced code block containing the whole program."""

CODE_FENCE_RE = re.compile(r"```(?:ebl)?[ \t]*\n(.*?)```", re.DOTALL)
STEP_RE = re.compile(r"^\s*\d+[.)]\s*(.+)$")
ROUTE_RE = re.compile(r"^ROUTE:\s*(\S+)\s*$", re.MULTILINE)

STAGE_INSTRUCTION_FOLLOWING = "InstructionFollowing"
STAGE_ROBOT_MOTION = "RobotMotion"
STAGE_CODE_GEN = "CodeGen"
STAGE_FEEDBACK = "Feedback"
STAGE_ABLATION = "EndToEndAblation"


@dataclass(frozen=True)
class PipelineConfig:
    model_id: str = DEFAULT_MODEL_ID
    temperature: float = DEFAULT_TEMPERATURE
    max_reprompts: int = 2  # malformed-output retries for stages 1, 2, 4
    code_repair_rounds: int = 1  # extra attempt when generated code is invalid


@dataclass(frozen=True)
class AssembledPrompt:
    """A stage prompt with its ordered user-message components."""

    stage_tag: str
    system: str
    components: tuple[tuple[str, str], ...]

    @property
    def user_text(self) -> str:
        return "\n\n".join(f"{label}:\n{text}" for label, text in self.components)

    @property
    def messages(self) -> tuple[tuple[str, str], ...]:
        return (("system", self.system), ("user", self.user_text))

    def component_labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.components)


def render_steps(plan: RobotMotionPlan) -> str:
    return "\n".join(f"{i}) {step}" for i, step in enumerate(plan.steps, start=1))


def render_human_plan(plan: HumanMotionPlan) -> str:
    if plan.cot.strip():
        return f"{plan.cot}\n\n{plan.expressive_motion}"
    return plan.expressive_motion


def render_program(program: BehaviorProgram) -> str:
    return f"```ebl\n{program.source}```"


def extract_code_fence(text: str) -> str | None:
    match = CODE_FENCE_RE.search(text)
    return match.group(1) if match else None


def parse_steps(answer: str) -> tuple[str, ...]:
    steps: list[str] = []
    for line in answer.splitlines():
        match = STEP_RE.match(line)
        if match:
            steps.append(match.group(1).strip())
        elif steps and line.strip():
            steps[-1] = f"{steps[-1]} {line.strip()}"
    return tuple(steps)


def parse_route(answer: str) -> tuple[str | None, str]:
    """Extract the mandatory route tag; returns (route, answer without tag)."""
    routes = {m.group(1) for m in ROUTE_RE.finditer(answer)}
    remainder = ROUTE_RE.sub("", answer).strip()
    if len(routes) != 1:
        return None, remainder
    route = routes.pop()
    if route not in ROUTES:
        return None, remainder
    return route, remainder


@dataclass
class Pipeline:
    """Runs the staged generation flow for one embodiment and skill library."""

    gateway: Gateway
    templates: TemplateSet
    manifest: EmbodimentManifest
    library: Sequence = ()
    config: PipelineConfig = field(default_factory=PipelineConfig)
    sink: Callable[[dict], None] | None = None
    variant: int = 0

    def with_variant(self, variant: int, sink: Callable[[dict], None] | None = None) -> "Pipeline":
        return Pipeline(
            self.gateway, self.templates, self.manifest, self.library,
            self.config, sink if sink is not None else self.sink, variant,
        )

    # ------------------------------------------------------------- assembly

    def _library_block(self) -> str:
        if not self.library:
            return ""
        signatures = "\n\n".join(entry.signature_text() for entry in self.library)
        return f"Learned skills available on this robot:\n\n{signatures}"

    def assemble_instruction_following(self, instruction: Instruction) -> AssembledPrompt:
        template = self.templates.get(STAGE_INSTRUCTION_FOLLOWING)
        return AssembledPrompt(
            STAGE_INSTRUCTION_FOLLOWING,
            template.render_system(),
            (("INSTRUCTION", instruction.text),),
        )

    def assemble_robot_motion(
        self,
        instruction: Instruction,
        human_plan: HumanMotionPlan,
        prev_plan: RobotMotionPlan | None = None,
        prev_feedback: FeedbackEntry | None = None,
    ) -> AssembledPrompt:
        template = self.templates.get(STAGE_ROBOT_MOTION)
        blocks = (self.manifest.capability_prose(), self._library_block())
        components: list[tuple[str, str]] = [
            ("INSTRUCTION", instruction.text),
            ("HUMAN EXPRESSIVE MOTION", render_human_plan(human_plan)),
        ]
        if prev_plan is not None:
            components.append(("PREVIOUS PROCEDURE", render_steps(prev_plan)))
        if prev_feedback is not None:
            components.append(("FEEDBACK RESPONSE", prev_feedback.change_summary))
        return AssembledPrompt(
            STAGE_ROBOT_MOTION, template.render_system(blocks), tuple(components)
        )

    def assemble_code_gen(
        self,
        instruction: Instruction,
        human_plan: HumanMotionPlan,
        robot_plan: RobotMotionPlan,
        prev_robot_plan: RobotMotionPlan | None = None,
        prev_program: BehaviorProgram | None = None,
        prev_feedback: FeedbackEntry | None = None,
    ) -> AssembledPrompt:
        template = self.templates.get(STAGE_CODE_GEN)
        blocks = (GRAMMAR_SUMMARY, self.manifest.capability_prose(), self._library_block())
        components: list[tuple[str, str]] = [
            ("INSTRUCTION", instruction.text),
            ("HUMAN EXPRESSIVE MOTION", human_plan.expressive_motion),
        ]
        if prev_robot_plan is not None:
            components.append(("PREVIOUS PROCEDURE", render_steps(prev_robot_plan)))
        if prev_program is not None:
            components.append(("PREVIOUS CODE", render_program(prev_program)))
        if prev_feedback is not None:
            components.append(("FEEDBACK RESPONSE", prev_feedback.change_summary))
        components.append(("PROCEDURE", render_steps(robot_plan)))
        return AssembledPrompt(
            STAGE_CODE_GEN, template.render_system(blocks), tuple(components)
        )

    def assemble_feedback(
        self,
        instruction: Instruction,
        robot_plan: RobotMotionPlan,
        program: BehaviorProgram,
        user_text: str,
    ) -> AssembledPrompt:
        template = self.templates.get(STAGE_FEEDBACK)
        components = (
            ("INSTRUCTION", instruction.text),
            ("PROCEDURE", render_steps(robot_plan)),
            ("CODE", render_program(program)),
            ("USER FEEDBACK", user_text),
        )
        return AssembledPrompt(STAGE_FEEDBACK, template.render_system(), components)

    def assemble_ablation(self, instruction: Instruction) -> AssembledPrompt:
        template = self.templates.get(STAGE_ABLATION)
        blocks = (GRAMMAR_SUMMARY, self.manifest.capability_prose(), self._library_block())
        return AssembledPrompt(
            STAGE_ABLATION,
            template.render_system(blocks),
            (("INSTRUCTION", instruction.text),),
        )

    # ------------------------------------------------------------- plumbing

    def _request(self, messages: tuple[tuple[str, str], ...], stage_tag: str) -> CompletionRequest:
        return CompletionRequest(
            stage_tag,
            messages,
            self.config.model_id,
            self.config.temperature,
            self.variant,
        )

    def _emit(self, event: dict) -> None:
        if self.sink is not None:
            self.sink(event)

    def _complete_stage(
        self, prompt: AssembledPrompt, round_index: int
    ) -> tuple[StageOutput, PromptTemplate]:
        """Call the gateway, re-prompting on malformed output up to the cap."""
        template = self.templates.get(prompt.stage_tag)
        messages = prompt.messages
        last_raw = ""
        for attempt in range(1 + self.config.max_reprompts):
            raw = self._call(messages, prompt.stage_tag, round_index, attempt)
            last_raw = raw
            output = split_sections(raw, template)
            if output.answer is not None:
                return output, template
            messages = messages + (
                ("assistant", raw),
                (
                    "user",
                    "Your previous response was missing the required sections. "
                    f"Respond again with {template.reasoning_marker} followed by "
                    f"{template.answer_marker}.",
                ),
            )
        raise MalformedStageOutput(
            prompt.stage_tag, "answer section missing after re-prompts", last_raw
        )

    def _call(
        self,
        messages: tuple[tuple[str, str], ...],
        stage_tag: str,
        round_index: int,
        attempt: int,
    ) -> str:
        from .gateway import fingerprint as _fingerprint

        request = self._request(messages, stage_tag)
        raw = self.gateway.complete(request)
        self._emit(
            {
                "type": "stage_output",
                "round": round_index,
                "stage": stage_tag,
                "attempt": attempt,
                "fingerprint": _fingerprint(request),
                "raw": raw,
            }
        )
        return raw

    # --------------------------------------------------------------- stages

    def expressive_instruction_following(
        self, instruction: Instruction, round_index: int = 0
    ) -> HumanMotionPlan:
        prompt = self.assemble_instruction_following(instruction)
        output, _ = self._complete_stage(prompt, round_index)
        return HumanMotionPlan(output.reasoning, output.answer)

    def human_to_robot_motion(
        self,
        instruction: Instruction,
        human_plan: HumanMotionPlan,
        prev_plan: RobotMotionPlan | None = None,
        prev_feedback: FeedbackEntry | None = None,
        round_index: int = 0,
    ) -> RobotMotionPlan:
        prompt = self.assemble_robot_motion(instruction, human_plan, prev_plan, prev_feedback)
        template = self.templates.get(STAGE_ROBOT_MOTION)
        messages = prompt.messages
        last_raw = ""
        for attempt in range(1 + self.config.max_reprompts):
            raw = self._call(messages, STAGE_ROBOT_MOTION, round_index, attempt)
            last_raw = raw
            output = split_sections(raw, template)
            if output.answer is not None:
                steps = parse_steps(output.answer)
                if steps:
                    return RobotMotionPlan(output.reasoning, steps)
                problem = "the answer must be a numbered list of steps"
            else:
                problem = (
                    f"the response must contain {template.reasoning_marker} and "
                    f"{template.answer_marker} sections"
                )
            messages = messages + (
                ("assistant", raw),
                ("user", f"Your previous response was malformed: {problem}. Respond again."),
            )
        raise MalformedStageOutput(
            STAGE_ROBOT_MOTION, "no step list found after re-prompts", last_raw
        )

    def generate_code(
        self,
        instruction: Instruction,
        human_plan: HumanMotionPlan,
        robot_plan: RobotMotionPlan,
        prev_robot_plan: RobotMotionPlan | None = None,
        prev_program: BehaviorProgram | None = None,
        prev_feedback: FeedbackEntry | None = None,
        round_index: int = 0,
    ) -> BehaviorProgram:
        prompt = self.assemble_code_gen(
            instruction, human_plan, robot_plan, prev_robot_plan, prev_program, prev_feedback
        )
        return self._code_from_prompt(
            prompt, instruction, round_index, repair_rounds=self.config.code_repair_rounds
        )

    def end_to_end_ablation(
        self, instruction: Instruction, round_index: int = 0
    ) -> BehaviorProgram:
        # Mirrors the one-call baseline: no repair round, failures surface raw.
        prompt = self.assemble_ablation(instruction)
        return self._code_from_prompt(prompt, instruction, round_index, repair_rounds=0)

    def _code_from_prompt(
        self,
        prompt: AssembledPrompt,
        instruction: Instruction,
        round_index: int,
        repair_rounds: int,
    ) -> BehaviorProgram:
        output, template = self._complete_stage(prompt, round_index)
        messages = prompt.messages
        attempt = 0
        while True:
            source = extract_code_fence(output.answer or "")
            if source is None:
                raise MalformedStageOutput(
                    prompt.stage_tag, "no fenced code block in the answer", output.raw
                )
            parse_failure: ParseError | None = None
            report = None
            program = None
            try:
                program = BehaviorProgram.from_source(source)
            except ParseError as exc:
                parse_failure = exc
            if program is not None:
                report = ebl.validate(
                    program.ast,
                    self.manifest,
                    self.library,
                    instruction.modality_constraints,
                )
                if report.valid:
                    return program
            if attempt >= repair_rounds:
                if parse_failure is not None:
                    raise MalformedStageOutput(
                        prompt.stage_tag, f"code does not parse: {parse_failure}", output.raw
                    )
                raise CodeRejected(report, source)
            attempt += 1
            problems = str(parse_failure) if parse_failure is not None else report.render()
            messages = messages + (
                ("assistant", output.raw),
                (
                    "user",
                    "The program failed validation:\n"
                    f"{problems}\n"
                    "Re-emit the full corrected program in a single fenced code block.",
                ),
            )
            raw = self._call(messages, prompt.stage_tag, round_index, attempt)
            output = split_sections(raw, template)
            if output.answer is None:
                raise MalformedStageOutput(
                    prompt.stage_tag, "repair response missing answer section", raw
                )

    def propagate_feedback(
        self,
        instruction: Instruction,
        robot_plan: RobotMotionPlan,
        program: BehaviorProgram,
        user_text: str,
        round_index: int = 0,
    ) -> FeedbackEntry:
        if not user_text.strip():
            raise ValueError("user feedback text must be non-empty")
        prompt = self.assemble_feedback(instruction, robot_plan, program, user_text)
        template = self.templates.get(STAGE_FEEDBACK)
        messages = prompt.messages
        last_raw = ""
        for attempt in range(1 + self.config.max_reprompts):
            raw = self._call(messages, STAGE_FEEDBACK, round_index, attempt)
            last_raw = raw
            output = split_sections(raw, template)
            if output.answer is not None:
                route, summary = parse_route(output.answer)
                if route is not None and summary:
                    return FeedbackEntry(user_text, output.reasoning, summary, route)
                problem = (
                    "the answer must end with exactly one line "
                    "'ROUTE: BehaviorAndCode' or 'ROUTE: CodeOnly'"
                )
            else:
                problem = "the response is missing its sections"
            messages = messages + (
                ("assistant", raw),
                ("user", f"Your previous response was malformed: {problem}. Respond again."),
            )
        raise MalformedStageOutput(
            STAGE_FEEDBACK, "missing or ambiguous route tag after re-prompts", last_raw
        )

    # --------------------------------------------------------- orchestration

    def run_generation(self, session: Session) -> Session:
        if session.round_index != 0 or session.rounds:
            raise ValueError("run_generation needs a fresh session")
        instruction = session.instruction
        human_plan = self.expressive_instruction_following(instruction)
        robot_plan = self.human_to_robot_motion(instruction, human_plan)
        program = self.generate_code(instruction, human_plan, robot_plan)
        round0 = Round(robot_plan, program, human_plan, None)
        session.rounds.append(round0)
        self._emit({"type": "round_artifacts", "round": 0, **round0.to_dict()})
        return session

    def run_feedback_round(self, session: Session, user_text: str) -> Session:
        session.require_feedback_capacity()
        if not session.rounds:
            raise ValueError("session has no generated behavior to give feedback on")
        index = session.round_index + 1
        prev = session.rounds[-1]
        feedback = self.propagate_feedback(
            session.instruction, prev.robot_plan, prev.program, user_text, index
        )
        human_plan = session.human_plan
        if feedback.route == ROUTE_BEHAVIOR_AND_CODE:
            robot_plan = self.human_to_robot_motion(
                session.instruction,
                human_plan,
                prev_plan=prev.robot_plan,
                prev_feedback=feedback,
                round_index=index,
            )
            program = self.generate_code(
                session.instruction,
                human_plan,
                robot_plan,
                prev_robot_plan=prev.robot_plan,
                prev_program=prev.program,
                prev_feedback=feedback,
                round_index=index,
            )
        else:
            robot_plan = prev.robot_plan  # reused by reference
            program = self.generate_code(
                session.instruction,
                human_plan,
                robot_plan,
                prev_program=prev.program,
                prev_feedback=feedback,
                round_index=index,
            )
        new_round = Round(robot_plan, program, None, feedback)
        session.rounds.append(new_round)
        session.round_index = index
        self._emit({"type": "round_artifacts", "round": index, **new_round.to_dict()})
        return session


@dataclass
class CandidateResult:
    variant: int
    session: Session | None
    error_code: str | None = None
    error_detail: str | None = None
    report: ebl.ValidationReport | None = None

    @property
    def ok(self) -> bool:
        return self.session is not None

    @property
    def program(self) -> BehaviorProgram | None:
        return self.session.rounds[0].program if self.session else None


def sample_candidates(
    pipeline: Pipeline,
    instruction: Instruction,
    n: int,
    sink_factory: Callable[[int], Callable[[dict], None] | None] | None = None,
) -> list[CandidateResult]:
    """Run the full generation n times with distinct sample variants.

    Failed slots are recorded with their error instead of raising, so a run
    always yields n results.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    results: list[CandidateResult] = []
    for variant in range(n):
        sink = sink_factory(variant) if sink_factory is not None else None
        sampler = pipeline.with_variant(variant, sink)
        session = Session(id=f"sample-{variant}", instruction=instruction)
        try:
            sampler.run_generation(session)
        except CodeRejected as exc:
            results.append(
                CandidateResult(variant, None, "CodeRejected", str(exc), exc.report)
            )
        except Exception as exc:  # per-slot failures are data, not control flow
            results.append(CandidateResult(variant, None, type(exc).__name__, str(exc)))
        else:
            results.append(CandidateResult(variant, session))
    return results
