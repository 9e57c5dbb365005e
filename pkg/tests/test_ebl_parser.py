import pytest
from hypothesis import given

from genem import ebl
from genem.errors import ParseError
from strategies import program_sources

MINIMAL = """\
skill tiny() {
    \"\"\"Smallest possible skill.\"\"\"
    wait 1.0s
}
"""


def test_minimal_program():
    program = ebl.parse(MINIMAL)
    assert program.skill_names() == ("tiny",)
    skill = program.skills[0]
    assert skill.docstring == "Smallest possible skill."
    assert skill.body == (ebl.Wait(1.0, False),)


def test_call_arguments_and_literals():
    source = '''skill demo(angle_deg=20deg, color=#ff0000, label="hi") {
    """Docs."""
    head_pan(angle_deg=angle_deg)
    light_set(color=color)
    say(text="he said \\"hi\\"")
    base_translate(distance_m=-1.5m)
}
'''
    program = ebl.parse(source)
    skill = program.skills[0]
    assert skill.params[0] == ebl.Param("angle_deg", ebl.Number(20.0, "deg", True))
    assert skill.params[1] == ebl.Param("color", ebl.Color("#FF0000"))
    call = skill.body[0]
    assert call.args[0].value == ebl.ParamRef("angle_deg")
    say = skill.body[2]
    assert say.args[0].value == ebl.Str('he said "hi"')
    translate = skill.body[3]
    assert translate.args[0].value == ebl.Number(-1.5, "m", False)


def test_positional_arguments_parse():
    program = ebl.parse('skill p() {\n    """D."""\n    head_pan(20deg)\n}\n')
    call = program.skills[0].body[0]
    assert call.args[0].name is None


def test_if_else_and_repeat_nesting():
    source = '''skill watch() {
    """Watch for people."""
    if person_distance_lt(x_m=1.5m) {
        repeat 2 {
            head_tilt(angle_deg=10deg)
        }
    } else {
        wait 0.5s
    }
}
'''
    skill = ebl.parse(source).skills[0]
    stmt = skill.body[0]
    assert isinstance(stmt, ebl.If)
    assert stmt.predicate.target == "person_distance_lt"
    assert isinstance(stmt.then_body[0], ebl.Repeat)
    assert stmt.else_body == (ebl.Wait(0.5, False),)


def test_unterminated_docstring_reports_position():
    with pytest.raises(ParseError) as exc:
        ebl.parse('skill bad() {\n    """never closed\n    wait 1s\n}\n')
    assert exc.value.line == 2


def test_parse_error_carries_expected_tokens():
    with pytest.raises(ParseError) as exc:
        ebl.parse("skill broken( {\n}\n")
    assert exc.value.expected
    assert exc.value.line == 1


@pytest.mark.parametrize(
    "source",
    [
        "skill a() {\n    repeat 0 {\n        wait 1s\n    }\n}",
        "skill a() {\n    repeat 101 {\n        wait 1s\n    }\n}",
        "skill a() {\n    repeat 2.5 {\n        wait 1s\n    }\n}",
        "skill a() {\n    repeat 2deg {\n        wait 1s\n    }\n}",
    ],
)
def test_repeat_count_bounds(source):
    with pytest.raises(ParseError):
        ebl.parse(source)


def test_nesting_depth_cap():
    inner = "wait 0.1s"
    for _ in range(9):
        inner = f"repeat 2 {{\n{inner}\n}}"
    with pytest.raises(ParseError) as exc:
        ebl.parse(f"skill deep() {{\n{inner}\n}}")
    assert "depth" in str(exc.value)


def test_duplicate_skill_rejected():
    source = 'skill a() {\n    wait 1s\n}\nskill a() {\n    wait 1s\n}\n'
    with pytest.raises(ParseError):
        ebl.parse(source)


def test_wait_rejects_wrong_unit():
    with pytest.raises(ParseError):
        ebl.parse("skill w() {\n    wait 2m\n}\n")


def test_formatting_variants_share_canonical_text():
    tight = 'skill n(){"""D."""head_tilt(angle_deg=20deg)head_tilt(angle_deg=0deg)}'
    spread = '''skill n (  ) {
        """D."""

        head_tilt( angle_deg = 20deg )
            head_tilt(angle_deg=0deg)
}
'''
    a, b = ebl.parse(tight), ebl.parse(spread)
    assert a == b
    assert ebl.pretty_print(a) == ebl.pretty_print(b)


def test_canonical_text_reparses_to_equal_ast():
    program = ebl.parse(MINIMAL)
    canonical = ebl.pretty_print(program)
    again = ebl.parse(canonical)
    assert again == ebl.parse(ebl.pretty_print(again))
    assert ebl.pretty_print(again) == canonical


@given(program_sources())
def test_roundtrip_random_programs(source):
    program = ebl.parse(source)
    canonical = ebl.pretty_print(program)
    reparsed = ebl.parse(canonical)
    assert ebl.pretty_print(reparsed) == canonical


def test_entry_skill_is_uncalled_root():
    source = '''skill helper() {
    """H."""
    wait 0.1s
}

skill main_act() {
    """M."""
    helper()
}
'''
    program = ebl.parse(source)
    assert ebl.entry_skill_name(program) == "main_act"
