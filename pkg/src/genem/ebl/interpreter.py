"""Bounded execution of validated EBL programs against a primitive executor.

The interpreter owns control flow (sequencing, repeat unrolling, sensor
branching) and delegates every primitive action to the executor, which owns
time and the trajectory. Programs are assumed statically valid; anything the
validator would have caught is a programming error here, not a user error.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Protocol

from ..errors import BudgetExceeded
from .nodes import Call, Color, If, Number, Param, ParamRef, Program, Repeat, SkillDef, Str, Wait
from .parser import parse

MAX_CALL_DEPTH = 32  # defensive; valid programs are acyclic and shallow


class Executor(Protocol):
    """Primitive executor backing an interpretation run."""

    def perform(self, name: str, args: Mapping[str, object]) -> None: ...

    def eval_sensor(self, name: str, args: Mapping[str, object]) -> bool | float: ...

    def clock(self) -> float: ...

    def signature(self, name: str) -> tuple[str, ...]:
        """Declared parameter names of a primitive, in order."""
        ...

    def finish(self):
        """Finalize and return the produced Trajectory."""
        ...


@dataclass
class Budget:
    max_actions: int = 10_000
    max_sim_seconds: float = 300.0


@dataclass
class RunStats:
    actions: int = 0
    dynamic_calls: Counter = field(default_factory=Counter)


def _literal_value(value) -> object:
    if isinstance(value, Number):
        return int(value.value) if value.is_int else value.value
    if isinstance(value, Str):
        return value.value
    if isinstance(value, Color):
        return value.hex
    raise TypeError(f"not a literal: {value!r}")


def default_entry_args(skill: SkillDef) -> dict[str, object]:
    return {p.name: _literal_value(p.default) for p in skill.params}


class Interpreter:
    def __init__(
        self,
        program: Program,
        executor: Executor,
        budget: Budget | None = None,
        library: Mapping[str, str] | None = None,
        stats: RunStats | None = None,
    ):
        self.program = program
        self.executor = executor
        self.budget = budget or Budget()
        self.library_sources = dict(library or {})
        self.library_defs: dict[str, SkillDef] = {}
        self.stats = stats if stats is not None else RunStats()
        self.skills = {s.name: s for s in program.skills}

    def run(self, entry: str, args: Mapping[str, object] | None = None):
        skill = self.skills.get(entry)
        if skill is None:
            raise ValueError(f"no skill named {entry!r} in program")
        bindings = default_entry_args(skill)
        for name, value in (args or {}).items():
            if name not in bindings:
                raise ValueError(f"entry skill {entry!r} has no parameter {name!r}")
            bindings[name] = value
        self._exec_body(skill.body, bindings, depth=0)
        return self.executor.finish()

    # ----------------------------------------------------------- execution

    def _exec_body(self, body, bindings: dict[str, object], depth: int) -> None:
        for stmt in body:
            if isinstance(stmt, Call):
                self._exec_call(stmt, bindings, depth)
            elif isinstance(stmt, Wait):
                self._perform("wait", {"duration_s": stmt.seconds})
            elif isinstance(stmt, Repeat):
                for _ in range(stmt.count):
                    self._exec_body(stmt.body, bindings, depth)
            elif isinstance(stmt, If):
                if self._eval_predicate(stmt.predicate, bindings):
                    self._exec_body(stmt.then_body, bindings, depth)
                elif stmt.else_body is not None:
                    self._exec_body(stmt.else_body, bindings, depth)

    def _exec_call(self, call: Call, bindings: dict[str, object], depth: int) -> None:
        if depth > MAX_CALL_DEPTH:
            raise RecursionError(f"call depth exceeded at {call.target!r}")
        self.stats.dynamic_calls[call.target] += 1
        skill = self.skills.get(call.target) or self._library_def(call.target)
        if skill is not None:
            frame = default_entry_args(skill)
            supplied = self._resolve_args(
                call, tuple(p.name for p in skill.params), bindings
            )
            frame.update(supplied)
            self._exec_body(skill.body, frame, depth + 1)
            return
        names = self.executor.signature(call.target)
        self._perform(call.target, self._resolve_args(call, names, bindings))

    def _eval_predicate(self, call: Call, bindings: dict[str, object]) -> bool:
        names = self.executor.signature(call.target)
        result = self.executor.eval_sensor(
            call.target, self._resolve_args(call, names, bindings)
        )
        return bool(result)

    def _perform(self, name: str, args: Mapping[str, object]) -> None:
        if self.stats.actions >= self.budget.max_actions:
            raise BudgetExceeded("actions", self.budget.max_actions)
        self.executor.perform(name, args)
        self.stats.actions += 1
        if self.executor.clock() > self.budget.max_sim_seconds:
            raise BudgetExceeded("sim_seconds", self.budget.max_sim_seconds)

    # ----------------------------------------------------------- resolution

    def _library_def(self, name: str) -> SkillDef | None:
        if name in self.library_defs:
            return self.library_defs[name]
        source = self.library_sources.get(name)
        if source is None:
            return None
        skill = parse(source).skills[0]
        self.library_defs[name] = skill
        return skill

    def _resolve_args(
        self, call: Call, param_names: tuple[str, ...], bindings: dict[str, object]
    ) -> dict[str, object]:
        resolved: dict[str, object] = {}
        pos_index = 0
        for arg in call.args:
            if arg.name is None:
                name = param_names[pos_index]
                pos_index += 1
            else:
                name = arg.name
            if isinstance(arg.value, ParamRef):
                resolved[name] = bindings[arg.value.name]
            else:
                resolved[name] = _literal_value(arg.value)
        return resolved


def interpret(
    program: Program,
    entry: str,
    args: Mapping[str, object] | None,
    executor: Executor,
    budget: Budget | None = None,
    library: Mapping[str, str] | None = None,
    stats: RunStats | None = None,
):
    """Execute `entry` with `args` and return the executor's Trajectory."""
    return Interpreter(program, executor, budget, library, stats).run(entry, args)
