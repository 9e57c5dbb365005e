import pytest
from hypothesis import given
from hypothesis import strategies as st

from genem import ebl
from genem.domain import (
    BehaviorProgram,
    Event,
    FeedbackEntry,
    HumanMotionPlan,
    Instruction,
    RobotMotionPlan,
    Round,
    Session,
    SkillEntry,
    StateFrame,
    Trajectory,
    canonicalize_program,
)
from genem.errors import MaxRoundsExceeded

from strategies import trajectories

NOD_SRC = '''skill nod(angle_deg=20deg) {
    """Nod twice."""
    repeat 2 {
        head_tilt(angle_deg=angle_deg)
        head_tilt(angle_deg=0deg)
    }
}
'''


def test_instruction_requires_text():
    with pytest.raises(ValueError):
        Instruction("   ", "mobile_v1")


def test_plans_validate_content():
    with pytest.raises(ValueError):
        HumanMotionPlan("cot", "   ")
    with pytest.raises(ValueError):
        RobotMotionPlan("cot", ())
    with pytest.raises(ValueError):
        RobotMotionPlan("cot", ("ok", "  "))


def test_feedback_routes_are_closed():
    with pytest.raises(ValueError):
        FeedbackEntry("t", "c", "summary", "Both")
    with pytest.raises(ValueError):
        FeedbackEntry("t", "c", "  ", "CodeOnly")
    entry = FeedbackEntry("t", "c", "s", "BehaviorAndCode")
    assert entry.route == "BehaviorAndCode"


def test_behavior_program_from_source_derives_everything():
    program = BehaviorProgram.from_source(NOD_SRC)
    assert program.entry_skill == "nod"
    assert program.parameters == (("angle_deg", "deg", 20),)
    assert program.default_args() == {"angle_deg": 20}
    # construction canonicalizes, so round-tripping the source is stable
    assert ebl.pretty_print(program.ast) == program.source


def test_canonicalize_is_idempotent():
    messy = NOD_SRC.replace("\n    ", "\n        ").replace("skill nod", "skill  nod")
    program = BehaviorProgram.from_source(messy)
    once = canonicalize_program(program)
    twice = canonicalize_program(once)
    assert once.source == twice.source
    assert once.ast == program.ast


def test_formatting_variants_reach_identical_canonical_source():
    tight = 'skill nod(angle_deg=20deg){"""Nod twice."""repeat 2{head_tilt(angle_deg=angle_deg)head_tilt(angle_deg=0deg)}}'
    a = BehaviorProgram.from_source(NOD_SRC)
    b = BehaviorProgram.from_source(tight)
    assert a.source == b.source


def test_session_round_cap():
    session = Session("s1", Instruction("Nod.", "mobile_v1"), max_rounds=2)
    session.round_index = 2
    with pytest.raises(MaxRoundsExceeded):
        session.require_feedback_capacity()


def test_session_serialization_roundtrip():
    program = BehaviorProgram.from_source(NOD_SRC)
    plan = RobotMotionPlan("r", ("step one", "step two"))
    human = HumanMotionPlan("h", "nod politely")
    feedback = FeedbackEntry("deeper", "f", "[Change] deeper", "CodeOnly")
    session = Session(
        "s2",
        Instruction("Nod.", "mobile_v1", ("speech",), "empty"),
        [Round(plan, program, human, None), Round(plan, program, None, feedback)],
        round_index=1,
    )
    parsed = Session.from_dict(session.to_dict())
    assert parsed == session


def test_trajectory_invariants():
    frames = (StateFrame(0.0, {"v": 0.0}), StateFrame(0.1, {"v": 1.0}))
    Trajectory("m", ("v",), frames, (Event(0.05, "speech", "x"),))
    with pytest.raises(ValueError):
        Trajectory("m", ("v",), (), ())
    with pytest.raises(ValueError):
        Trajectory("m", ("v",), (StateFrame(0.5, {"v": 0.0}),), ())
    with pytest.raises(ValueError):
        Trajectory("m", ("v",), frames, (Event(0.5, "speech", "late"),))
    with pytest.raises(ValueError):
        Event(0.0, "smell", "?")


@given(trajectories())
def test_trajectory_roundtrip(trajectory):
    assert Trajectory.from_dict(trajectory.to_dict()) == trajectory


def test_skill_entry_from_body_and_roundtrip():
    entry = SkillEntry.from_body(NOD_SRC, provenance="learned")
    assert entry.name == "nod"
    assert entry.parameters == (("angle_deg", "deg", 20),)
    assert 'skill nod(angle_deg=20deg)' in entry.signature_text()
    assert "Nod twice." in entry.signature_text()
    assert SkillEntry.from_dict(entry.to_dict()) == entry


def test_skill_entry_requires_docstring():
    with pytest.raises(ValueError):
        SkillEntry.from_body("skill q() {\n    wait 1s\n}\n", provenance="learned")


def test_symbol_homes():
    """Each quantity in the staged-generation contract has exactly one home."""
    instruction = Instruction("Nod.", "mobile_v1")
    assert hasattr(instruction, "text")  # the language instruction
    human = HumanMotionPlan("why", "how")
    assert hasattr(human, "cot") and hasattr(human, "expressive_motion")
    plan = RobotMotionPlan("why", ("step",))
    assert hasattr(plan, "cot") and hasattr(plan, "steps")
    program = BehaviorProgram.from_source(NOD_SRC)
    assert hasattr(program, "source") and hasattr(program, "parameters")
    feedback = FeedbackEntry("text", "why", "what changed", "CodeOnly")
    assert hasattr(feedback, "change_summary") and hasattr(feedback, "route")
    session = Session("id", instruction)
    assert hasattr(session, "round_index") and hasattr(session, "max_rounds")
    assert session.max_rounds == 10
