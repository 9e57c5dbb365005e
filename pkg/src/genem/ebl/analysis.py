"""Static analysis over parsed programs: library-skill usage counts."""

from __future__ import annotations

from typing import Iterable

from .nodes import Program, iter_calls


def extract_called_skills(program: Program, library_names: Iterable[str]) -> dict[str, int]:
    """Count static call sites targeting library skills.

    A call inside `repeat N` counts once; dynamic execution counts come from
    the interpreter's run stats instead. Counts are invariant under
    pretty-printing since they depend only on the AST.
    """
    names = set(library_names)
    counts: dict[str, int] = {}
    for skill in program.skills:
        for call in iter_calls(skill.body):
            if call.target in names:
                counts[call.target] = counts.get(call.target, 0) + 1
    return counts
