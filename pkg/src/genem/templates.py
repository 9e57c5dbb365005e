"""Prompt templates: stage-tagged prefix text, few-shot examples, and the
section markers each stage's output must carry.

Templates live in plain-text files with YAML front matter::

    ---
    stage: InstructionFollowing
    reasoning_marker: "REASONING:"
    answer_marker: "ANSWER:"
    ---
    <prefix text>
    === example ===
    --- input ---
    ...
    --- output ---
    ...

The prefix states the stage's role and output contract; runtime context
(robot capabilities, skill library, grammar summary) is appended during
prompt assembly, not baked into the file.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import yaml

from .gateway import STAGE_TAGS

EXAMPLE_DELIM = "=== example ==="
INPUT_DELIM = "--- input ---"
OUTPUT_DELIM = "--- output ---"

STAGE_FILES = {
    "InstructionFollowing": "instruction_following.txt",
    "RobotMotion": "robot_motion.txt",
    "CodeGen": "code_gen.txt",
    "Feedback": "feedback.txt",
    "EndToEndAblation": "end_to_end_ablation.txt",
}


@dataclass(frozen=True)
class PromptTemplate:
    stage_tag: str
    prefix_text: str
    few_shot_examples: tuple[tuple[str, str], ...]
    reasoning_marker: str
    answer_marker: str

    def __post_init__(self):
        if self.stage_tag not in STAGE_TAGS:
            raise ValueError(f"unknown stage tag {self.stage_tag!r}")
        if not self.prefix_text.strip():
            raise ValueError("template prefix text must be non-empty")
        if not self.few_shot_examples:
            raise ValueError(f"stage {self.stage_tag} template needs at least one example")
        if self.reasoning_marker == self.answer_marker:
            raise ValueError("section markers must be distinct")

    def render_system(self, context_blocks: tuple[str, ...] = ()) -> str:
        parts = [self.prefix_text.strip()]
        parts.extend(block.strip() for block in context_blocks if block.strip())
        examples = []
        for inp, out in self.few_shot_examples:
            examples.append(f"Input:\n{inp.strip()}\n\nOutput:\n{out.strip()}")
        parts.append("Examples:\n\n" + "\n\n".join(examples))
        return "\n\n".join(parts)


@dataclass(frozen=True)
class StageOutput:
    """A raw completion plus its extracted sections; raw is kept for audit."""

    raw: str
    reasoning: str
    answer: str | None
    parse_warnings: tuple[str, ...] = ()


def split_sections(raw: str, template: PromptTemplate) -> StageOutput:
    """Split a completion into reasoning and answer at the template markers."""
    warnings: list[str] = []
    answer_at = raw.find(template.answer_marker)
    if answer_at < 0:
        return StageOutput(raw, "", None, ("answer section missing",))
    answer = raw[answer_at + len(template.answer_marker) :].strip()
    head = raw[:answer_at]
    reasoning_at = head.find(template.reasoning_marker)
    if reasoning_at < 0:
        warnings.append("reasoning section missing")
        reasoning = ""
    else:
        reasoning = head[reasoning_at + len(template.reasoning_marker) :].strip()
    if not answer:
        return StageOutput(raw, reasoning, None, ("answer section empty",))
    return StageOutput(raw, reasoning, answer, tuple(warnings))


def parse_template_text(text: str) -> PromptTemplate:
    if not text.startswith("---"):
        raise ValueError("template file must start with '---' front matter")
    _, front, body = text.split("---", 2)
    meta = yaml.safe_load(front)
    chunks = body.split(EXAMPLE_DELIM)
    prefix = chunks[0].strip()
    examples = []
    for chunk in chunks[1:]:
        if INPUT_DELIM not in chunk or OUTPUT_DELIM not in chunk:
            raise ValueError("template example needs input and output sections")
        _, rest = chunk.split(INPUT_DELIM, 1)
        inp, out = rest.split(OUTPUT_DELIM, 1)
        examples.append((inp.strip(), out.strip()))
    return PromptTemplate(
        meta["stage"],
        prefix,
        tuple(examples),
        meta["reasoning_marker"],
        meta["answer_marker"],
    )


def load_template(path: str | Path) -> PromptTemplate:
    return parse_template_text(Path(path).read_text())


@dataclass
class TemplateSet:
    by_stage: dict[str, PromptTemplate] = field(default_factory=dict)

    def get(self, stage_tag: str) -> PromptTemplate:
        template = self.by_stage.get(stage_tag)
        if template is None:
            raise KeyError(f"no template loaded for stage {stage_tag}")
        return template

    @classmethod
    def load_dir(cls, directory: str | Path) -> "TemplateSet":
        templates = {}
        for path in sorted(Path(directory).glob("*.txt")):
            template = load_template(path)
            templates[template.stage_tag] = template
        return cls(templates)

    @classmethod
    def load_default(cls) -> "TemplateSet":
        templates = {}
        root = resources.files("genem.data.templates")
        for stage, filename in STAGE_FILES.items():
            template = parse_template_text((root / filename).read_text())
            templates[stage] = template
        return cls(templates)
