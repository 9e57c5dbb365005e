import pytest

from genem.templates import (
    PromptTemplate,
    TemplateSet,
    parse_template_text,
    split_sections,
)

SAMPLE = '''---
stage: InstructionFollowing
reasoning_marker: "REASONING:"
answer_marker: "ANSWER:"
---
Role text here.
=== example ===
--- input ---
In.
--- output ---
REASONING: r
ANSWER: a
'''


def test_parse_template_text():
    template = parse_template_text(SAMPLE)
    assert template.stage_tag == "InstructionFollowing"
    assert template.prefix_text == "Role text here."
    assert template.few_shot_examples == (("In.", "REASONING: r\nANSWER: a"),)
    assert template.reasoning_marker == "REASONING:"
    assert template.answer_marker == "ANSWER:"


def test_template_requires_examples_and_distinct_markers():
    with pytest.raises(ValueError):
        PromptTemplate("InstructionFollowing", "p", (), "A:", "B:")
    with pytest.raises(ValueError):
        PromptTemplate("InstructionFollowing", "p", (("i", "o"),), "X:", "X:")
    with pytest.raises(ValueError):
        PromptTemplate("InstructionFollowing", "   ", (("i", "o"),), "A:", "B:")


def test_default_set_covers_every_stage(templates):
    for stage in (
        "InstructionFollowing",
        "RobotMotion",
        "CodeGen",
        "Feedback",
        "EndToEndAblation",
    ):
        template = templates.get(stage)
        assert template.few_shot_examples
        assert template.prefix_text


def test_render_system_includes_context_blocks(templates):
    template = templates.get("RobotMotion")
    system = template.render_system(("CAPABILITIES BLOCK",))
    assert system.index(template.prefix_text[:20]) < system.index("CAPABILITIES BLOCK")
    assert "Examples:" in system
    assert system.index("CAPABILITIES BLOCK") < system.index("Examples:")


def test_split_sections():
    template = parse_template_text(SAMPLE)
    output = split_sections("REASONING: because\nANSWER: do the thing", template)
    assert output.reasoning == "because"
    assert output.answer == "do the thing"
    assert output.parse_warnings == ()

    missing = split_sections("no sections at all", template)
    assert missing.answer is None

    no_reasoning = split_sections("ANSWER: just this", template)
    assert no_reasoning.answer == "just this"
    assert "reasoning section missing" in no_reasoning.parse_warnings

    empty_answer = split_sections("REASONING: r\nANSWER:   ", template)
    assert empty_answer.answer is None


def test_load_dir_roundtrip(tmp_path, templates):
    path = tmp_path / "custom.txt"
    path.write_text(SAMPLE)
    loaded = TemplateSet.load_dir(tmp_path)
    assert loaded.get("InstructionFollowing").prefix_text == "Role text here."
    with pytest.raises(KeyError):
        loaded.get("RobotMotion")
