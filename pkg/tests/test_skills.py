import pytest

from genem import ebl
from genem.domain import BehaviorProgram, SkillEntry
from genem.errors import DuplicateSkillName, InvalidProgram
from genem.skills import (
    SEED_SKILL_NAMES,
    SkillLibrary,
    entry_from_program,
    load_seed_skills,
)


def test_add_and_duplicate():
    library = SkillLibrary()
    entry = SkillEntry.from_body(
        'skill wavey() {\n    """Wave."""\n    head_pan(angle_deg=20deg)\n}\n',
        provenance="learned",
    )
    library.add(entry)
    assert library.names() == ["wavey"]
    with pytest.raises(DuplicateSkillName):
        library.add(entry)


def test_save_and_load_roundtrip(tmp_path):
    library = SkillLibrary()
    library.add(
        SkillEntry.from_body(
            'skill a() {\n    """A."""\n    wait 1s\n}\n', provenance="builtin_example"
        )
    )
    path = tmp_path / "skills.json"
    library.save(path)
    loaded = SkillLibrary.load(path)
    assert loaded.names() == ["a"]
    assert loaded.entries[0].provenance == "builtin_example"
    assert SkillLibrary.load_or_empty(tmp_path / "missing.json").entries == []


def test_version_gate(tmp_path):
    path = tmp_path / "skills.json"
    path.write_text('{"version": 99, "skills": []}')
    with pytest.raises(ValueError):
        SkillLibrary.load(path)


def test_seed_skills_validate_against_quadruped(quadruped):
    library = load_seed_skills()
    assert set(library.names()) == set(SEED_SKILL_NAMES)
    for entry in library.entries:
        program = ebl.parse(entry.body)
        report = ebl.validate(program, quadruped, [])
        assert report.valid, (entry.name, report.render())
        assert entry.docstring


def test_entry_from_program_renames():
    program = BehaviorProgram.from_source(
        'skill nod(angle_deg=20deg) {\n    """Nod."""\n    head_tilt(angle_deg=angle_deg)\n}\n'
    )
    entry = entry_from_program(program, "nod_head")
    assert entry.name == "nod_head"
    assert entry.provenance == "user_saved"
    assert "skill nod_head(angle_deg=20deg)" in entry.body


def test_entry_from_program_requires_self_contained():
    program = BehaviorProgram.from_source(
        'skill main_act() {\n    """M."""\n    helper()\n}\n'
        'skill helper() {\n    """H."""\n    wait 1s\n}\n'
    )
    with pytest.raises(InvalidProgram):
        entry_from_program(program, "saved")


def test_subset():
    library = load_seed_skills()
    sub = library.subset(("nod_head", "blink_lights"))
    assert set(sub.names()) == {"nod_head", "blink_lights"}
