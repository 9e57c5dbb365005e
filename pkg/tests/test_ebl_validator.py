import json
from pathlib import Path

from genem import ebl
from genem.domain import SkillEntry

FIXTURES = Path(__file__).parent / "fixtures" / "defective"


def validate_src(source, manifest, library=(), constraints=()):
    return ebl.validate(ebl.parse(source), manifest, library, constraints)


def test_clean_program_has_no_errors(mobile):
    report = validate_src(
        'skill ok() {\n    """Fine."""\n    head_pan(angle_deg=20deg)\n    wait 1s\n}\n',
        mobile,
    )
    assert report.valid
    assert report.warnings == []


def test_undefined_function(mobile):
    report = validate_src('skill f() {\n    """D."""\n    do_a_flip()\n}\n', mobile)
    assert report.error_codes() == ["UndefinedFunction"]


def test_wrong_parameter_type(mobile):
    report = validate_src(
        'skill f() {\n    """D."""\n    base_rotate(angle_deg="left")\n}\n', mobile
    )
    assert report.error_codes() == ["TypeMismatch"]


def test_unknown_and_missing_arguments(mobile):
    report = validate_src(
        'skill f() {\n    """D."""\n    navigate_to(x_m=1m, z_m=2m)\n}\n', mobile
    )
    assert set(report.error_codes()) == {"UnknownArgument", "MissingRequiredArgument"}


def test_range_violation(mobile):
    report = validate_src(
        'skill f() {\n    """D."""\n    head_pan(angle_deg=120deg)\n}\n', mobile
    )
    assert report.error_codes() == ["RangeViolation"]


def test_unit_mismatch(mobile):
    report = validate_src(
        'skill f() {\n    """D."""\n    head_pan(angle_deg=20m)\n}\n', mobile
    )
    assert report.error_codes() == ["UnitMismatch"]


def test_bare_numbers_are_unit_compatible(mobile):
    report = validate_src(
        'skill f() {\n    """D."""\n    head_pan(angle_deg=20)\n}\n', mobile
    )
    assert report.valid


def test_param_ref_default_checked_against_range(mobile):
    report = validate_src(
        'skill f(a=200deg) {\n    """D."""\n    head_pan(angle_deg=a)\n}\n', mobile
    )
    assert report.error_codes() == ["RangeViolation"]


def test_undefined_param_ref(mobile):
    report = validate_src(
        'skill f() {\n    """D."""\n    head_pan(angle_deg=missing)\n}\n', mobile
    )
    assert report.error_codes() == ["UndefinedFunction"]


def test_recursion_detected(mobile):
    source = 'skill a() {\n    """A."""\n    b()\n}\nskill b() {\n    """B."""\n    a()\n}\n'
    report = validate_src(source, mobile)
    assert report.error_codes() == ["RecursionDetected", "RecursionDetected"]


def test_modality_forbidden(mobile):
    report = validate_src(
        'skill f() {\n    """D."""\n    say(text="hi")\n}\n',
        mobile,
        constraints=("speech",),
    )
    assert report.error_codes() == ["ModalityForbidden"]


def test_modality_checked_through_library(mobile):
    noisy = SkillEntry.from_body(
        'skill noisy_hello() {\n    """Say hello."""\n    say(text="hello")\n}\n',
        provenance="learned",
    )
    report = validate_src(
        'skill f() {\n    """D."""\n    noisy_hello()\n}\n',
        mobile,
        library=[noisy],
        constraints=("speech",),
    )
    assert "ModalityForbidden" in report.error_codes()


def test_library_call_resolves_and_checks_args(quadruped):
    entry = SkillEntry.from_body(
        'skill dip(pitch_deg=10deg) {\n    """Dip."""\n    body_pose(pitch_deg=pitch_deg)\n}\n',
        provenance="learned",
    )
    ok = validate_src(
        'skill f() {\n    """D."""\n    dip(pitch_deg=12deg)\n}\n', quadruped, [entry]
    )
    assert ok.valid
    bad = validate_src(
        'skill f() {\n    """D."""\n    dip(tilt=12deg)\n}\n', quadruped, [entry]
    )
    assert bad.error_codes() == ["UnknownArgument"]


def test_docstring_warning(mobile):
    report = validate_src("skill f() {\n    wait 1s\n}\n", mobile)
    assert report.valid
    assert report.warning_codes() == ["MissingDocstring"]


def test_positional_style_warning(mobile):
    report = validate_src('skill f() {\n    """D."""\n    head_pan(20deg)\n}\n', mobile)
    assert report.valid
    assert "PositionalStyle" in report.warning_codes()


def test_unused_skill_warning(mobile):
    source = (
        'skill used() {\n    """U."""\n    wait 1s\n}\n'
        'skill orphan() {\n    """O."""\n    wait 1s\n}\n'
        'skill main_act() {\n    """M."""\n    used()\n}\n'
    )
    report = validate_src(source, mobile)
    assert "UnusedSkill" in report.warning_codes()


def test_sensor_as_action_and_primitive_as_predicate(mobile):
    report = validate_src(
        'skill f() {\n    """D."""\n    person_visible()\n}\n', mobile
    )
    assert report.error_codes() == ["TypeMismatch"]
    report = validate_src(
        'skill f() {\n    """D."""\n    if light_off() {\n        wait 1s\n    }\n}\n',
        mobile,
    )
    assert report.error_codes() == ["TypeMismatch"]


def test_numeric_sensor_rejected_as_predicate(mobile):
    report = validate_src(
        'skill f() {\n    """D."""\n    if person_distance() {\n        wait 1s\n    }\n}\n',
        mobile,
    )
    assert report.error_codes() == ["TypeMismatch"]


def test_report_serialization_roundtrip(mobile):
    report = validate_src(
        'skill f() {\n    do_a_flip()\n    head_pan(20deg)\n}\n', mobile
    )
    from genem.ebl import ValidationReport

    parsed = ValidationReport.from_dict(report.to_dict())
    assert parsed.error_codes() == report.error_codes()
    assert parsed.warning_codes() == report.warning_codes()
    assert parsed.valid == report.valid


def test_defective_corpus_taxonomy(mobile):
    """Every authored defect is flagged with its expected code set."""
    index = json.loads((FIXTURES / "index.json").read_text())
    assert len(index["programs"]) == 20
    for case in index["programs"]:
        source = (FIXTURES / case["file"]).read_text()
        report = validate_src(source, mobile, constraints=case["constraints"])
        assert not report.valid, case["file"]
        assert set(report.error_codes()) == set(case["errors"]), case["file"]
        for warning in case["warnings"]:
            assert warning in report.warning_codes(), (case["file"], warning)
