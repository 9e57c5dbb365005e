"""Persistent library of learned behavior skills.

The library is a single JSON document with a schema version. Entries are
injected into stage-2 and stage-3 prompts as signatures with docstrings, and
their bodies resolve calls during validation and execution.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from . import ebl
from .domain import BehaviorProgram, SkillEntry
from .errors import DuplicateSkillName, InvalidProgram

SCHEMA_VERSION = 1

SEED_SKILL_NAMES = ("nod_head", "eye_contact", "blink_lights", "look_around", "shake_head")


@dataclass
class SkillLibrary:
    entries: list[SkillEntry] = field(default_factory=list)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def get(self, name: str) -> SkillEntry | None:
        for entry in self.entries:
            if entry.name == name:
                return entry
        return None

    def add(self, entry: SkillEntry) -> None:
        if self.get(entry.name) is not None:
            raise DuplicateSkillName(f"skill {entry.name!r} already in the library")
        self.entries.append(entry)

    def subset(self, names) -> "SkillLibrary":
        wanted = set(names)
        return SkillLibrary([e for e in self.entries if e.name in wanted])

    def to_dict(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "skills": [e.to_dict() for e in self.entries],
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1, ensure_ascii=False))

    @classmethod
    def load(cls, path: str | Path) -> "SkillLibrary":
        d = json.loads(Path(path).read_text())
        if d.get("version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported skill library version {d.get('version')!r}")
        return cls([SkillEntry.from_dict(e) for e in d["skills"]])

    @classmethod
    def load_or_empty(cls, path: str | Path) -> "SkillLibrary":
        path = Path(path)
        if path.exists():
            return cls.load(path)
        return cls()


def entry_from_program(
    program: BehaviorProgram, name: str, provenance: str = "user_saved"
) -> SkillEntry:
    """Wrap a program's entry skill as a reusable library entry.

    The entry skill must be self-contained (no calls to other skills defined
    in the same program), since a library entry stores a single function.
    """
    entry_def = program.ast.skill(program.entry_skill)
    for call in ebl.nodes.iter_calls(entry_def.body):
        if call.target != entry_def.name and program.ast.skill(call.target) is not None:
            raise InvalidProgram(
                f"entry skill {entry_def.name!r} calls program-local skill "
                f"{call.target!r}; only self-contained skills can be saved"
            )
    renamed = replace(entry_def, name=name)
    body = ebl.pretty_print(ebl.Program((renamed,)))
    return SkillEntry.from_body(body, provenance)


def load_seed_skills(names=SEED_SKILL_NAMES) -> SkillLibrary:
    """Shipped starter skills used by the composability experiments."""
    library = SkillLibrary()
    root = resources.files("genem.data.skills")
    for name in names:
        body = (root / f"{name}.ebl").read_text()
        library.add(SkillEntry.from_body(body, provenance="learned"))
    return library
