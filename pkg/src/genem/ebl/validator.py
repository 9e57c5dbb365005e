"""Static validation of EBL programs against an embodiment manifest.

Every finding lands in the report; validation itself never raises. Error
codes cover the failure modes that break execution (undefined calls, bad
argument names/types/units/ranges, recursion, forbidden modalities) and
warnings cover style drift that hurts reuse (missing docstrings, positional
arguments, dead skills).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable

from . import nodes
from .nodes import Arg, Call, Color, If, Number, Param, ParamRef, Program, Repeat, SkillDef, Str, Wait
from .parser import parse

if TYPE_CHECKING:  # runtime import would be circular via robots -> interpreter
    from ..domain import SkillEntry
    from ..robots.manifests import EmbodimentManifest

# error codes
UNDEFINED_FUNCTION = "UndefinedFunction"
UNKNOWN_ARGUMENT = "UnknownArgument"
MISSING_REQUIRED_ARGUMENT = "MissingRequiredArgument"
TYPE_MISMATCH = "TypeMismatch"
UNIT_MISMATCH = "UnitMismatch"
RANGE_VIOLATION = "RangeViolation"
RECURSION_DETECTED = "RecursionDetected"
MODALITY_FORBIDDEN = "ModalityForbidden"

# warning codes
MISSING_DOCSTRING = "MissingDocstring"
POSITIONAL_STYLE = "PositionalStyle"
UNUSED_SKILL = "UnusedSkill"

ERROR_CODES = (
    UNDEFINED_FUNCTION,
    UNKNOWN_ARGUMENT,
    MISSING_REQUIRED_ARGUMENT,
    TYPE_MISMATCH,
    UNIT_MISMATCH,
    RANGE_VIOLATION,
    RECURSION_DETECTED,
    MODALITY_FORBIDDEN,
)
WARNING_CODES = (MISSING_DOCSTRING, POSITIONAL_STYLE, UNUSED_SKILL)


@dataclass(frozen=True)
class Finding:
    code: str
    location: str  # "line:col"
    message: str

    def to_dict(self) -> dict:
        return {"code": self.code, "location": self.location, "message": self.message}

    @classmethod
    def from_dict(cls, d: dict) -> "Finding":
        return cls(d["code"], d["location"], d["message"])


@dataclass
class ValidationReport:
    errors: list[Finding] = field(default_factory=list)
    warnings: list[Finding] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.errors

    def error_codes(self) -> list[str]:
        return [f.code for f in self.errors]

    def warning_codes(self) -> list[str]:
        return [f.code for f in self.warnings]

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "errors": [f.to_dict() for f in self.errors],
            "warnings": [f.to_dict() for f in self.warnings],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ValidationReport":
        return cls(
            [Finding.from_dict(e) for e in d.get("errors", [])],
            [Finding.from_dict(w) for w in d.get("warnings", [])],
        )

    def render(self) -> str:
        lines = []
        for f in self.errors:
            lines.append(f"error[{f.code}] {f.location}: {f.message}")
        for f in self.warnings:
            lines.append(f"warning[{f.code}] {f.location}: {f.message}")
        return "\n".join(lines) if lines else "clean"


@dataclass(frozen=True)
class _Callable:
    """Resolved signature for anything a Call may target."""

    name: str
    kind: str  # "primitive" | "sensor" | "skill" | "library"
    params: tuple["_ParamSig", ...]
    modality: str | None = None
    returns: str | None = None  # sensors only


@dataclass(frozen=True)
class _ParamSig:
    name: str
    type: str  # "number" | "int" | "string" | "color"
    unit: str | None
    range: tuple[float, float] | None
    required: bool


def _loc(node) -> str:
    return f"{getattr(node, 'line', 0)}:{getattr(node, 'col', 0)}"


def _value_type(value: nodes.Value) -> str:
    if isinstance(value, Number):
        return "int" if value.is_int else "number"
    if isinstance(value, Str):
        return "string"
    if isinstance(value, Color):
        return "color"
    raise TypeError(f"not a literal: {value!r}")


def _param_sig_from_default(param: Param) -> _ParamSig:
    default = param.default
    if isinstance(default, Number):
        t = "int" if default.is_int else "number"
        return _ParamSig(param.name, t, default.unit, None, required=False)
    if isinstance(default, Str):
        return _ParamSig(param.name, "string", None, None, required=False)
    if isinstance(default, Color):
        return _ParamSig(param.name, "color", None, None, required=False)
    raise TypeError(f"parameter default must be a literal: {default!r}")


def _skill_callable(skill: SkillDef, kind: str) -> _Callable:
    return _Callable(
        skill.name, kind, tuple(_param_sig_from_default(p) for p in skill.params)
    )


class Validator:
    def __init__(
        self,
        program: Program,
        manifest: "EmbodimentManifest",
        library: Iterable["SkillEntry"] = (),
        modality_constraints: Iterable[str] = (),
    ):
        self.program = program
        self.manifest = manifest
        self.constraints = {c.strip().lower() for c in modality_constraints if c.strip()}
        self.report = ValidationReport()

        self.primitives: dict[str, _Callable] = {}
        for prim in manifest.primitives:
            self.primitives[prim.name] = _Callable(
                prim.name,
                "primitive",
                tuple(
                    _ParamSig(p.name, p.type, p.unit, p.range, p.required)
                    for p in prim.params
                ),
                modality=prim.modality,
            )
        self.sensors: dict[str, _Callable] = {}
        for sensor in manifest.sensors:
            self.sensors[sensor.name] = _Callable(
                sensor.name,
                "sensor",
                tuple(
                    _ParamSig(p.name, p.type, p.unit, p.range, p.required)
                    for p in sensor.params
                ),
                returns=sensor.returns,
            )

        self.library_entries: dict[str, "SkillEntry"] = {e.name: e for e in library}
        self.library_defs: dict[str, SkillDef] = {}
        self.skills: dict[str, SkillDef] = {s.name: s for s in program.skills}

    # ------------------------------------------------------------------ api

    def run(self) -> ValidationReport:
        for skill in self.program.skills:
            if not skill.docstring or not skill.docstring.strip():
                self.report.warnings.append(
                    Finding(
                        MISSING_DOCSTRING,
                        _loc(skill),
                        f"skill {skill.name!r} has no docstring",
                    )
                )
            self._check_body(skill, skill.body)
        self._check_recursion()
        self._check_unused()
        return self.report

    # ------------------------------------------------------------ resolution

    def _library_def(self, name: str) -> SkillDef | None:
        if name in self.library_defs:
            return self.library_defs[name]
        entry = self.library_entries.get(name)
        if entry is None:
            return None
        skill = parse(entry.body).skills[0]
        self.library_defs[name] = skill
        return skill

    def _resolve(self, name: str) -> _Callable | None:
        if name in self.skills:
            return _skill_callable(self.skills[name], "skill")
        if name in self.primitives:
            return self.primitives[name]
        lib = self._library_def(name)
        if lib is not None:
            return _skill_callable(lib, "library")
        return None

    # ------------------------------------------------------------- traversal

    def _check_body(self, skill: SkillDef, body: tuple[nodes.Stmt, ...]) -> None:
        for stmt in body:
            if isinstance(stmt, Call):
                self._check_action_call(skill, stmt)
            elif isinstance(stmt, Repeat):
                self._check_body(skill, stmt.body)
            elif isinstance(stmt, If):
                self._check_predicate(skill, stmt.predicate)
                self._check_body(skill, stmt.then_body)
                if stmt.else_body is not None:
                    self._check_body(skill, stmt.else_body)
            elif isinstance(stmt, Wait):
                pass

    def _check_action_call(self, skill: SkillDef, call: Call) -> None:
        if call.target in self.sensors:
            self.report.errors.append(
                Finding(
                    TYPE_MISMATCH,
                    _loc(call),
                    f"sensor {call.target!r} used as an action",
                )
            )
            return
        target = self._resolve(call.target)
        if target is None:
            self.report.errors.append(
                Finding(
                    UNDEFINED_FUNCTION,
                    _loc(call),
                    f"call to undefined function {call.target!r}",
                )
            )
            return
        if target.kind == "primitive" and target.modality in self.constraints:
            self.report.errors.append(
                Finding(
                    MODALITY_FORBIDDEN,
                    _loc(call),
                    f"{call.target!r} uses the forbidden modality {target.modality!r}",
                )
            )
        if target.kind == "library":
            self._check_library_modalities(call, target.name, seen=set())
        self._check_args(skill, call, target)

    def _check_predicate(self, skill: SkillDef, call: Call) -> None:
        target = self.sensors.get(call.target)
        if target is None:
            if self._resolve(call.target) is not None:
                self.report.errors.append(
                    Finding(
                        TYPE_MISMATCH,
                        _loc(call),
                        f"if-predicate must be a sensor, got {call.target!r}",
                    )
                )
            else:
                self.report.errors.append(
                    Finding(
                        UNDEFINED_FUNCTION,
                        _loc(call),
                        f"unknown sensor {call.target!r}",
                    )
                )
            return
        if target.returns != "bool":
            self.report.errors.append(
                Finding(
                    TYPE_MISMATCH,
                    _loc(call),
                    f"sensor {call.target!r} does not return a boolean",
                )
            )
        self._check_args(skill, call, target)

    def _check_library_modalities(self, call: Call, name: str, seen: set[str]) -> None:
        """Constraints apply through library skills: walk their bodies too."""
        if not self.constraints or name in seen:
            return
        seen.add(name)
        skill = self._library_def(name)
        if skill is None:
            return
        for inner in nodes.iter_calls(skill.body):
            prim = self.primitives.get(inner.target)
            if prim is not None and prim.modality in self.constraints:
                self.report.errors.append(
                    Finding(
                        MODALITY_FORBIDDEN,
                        _loc(call),
                        f"{call.target!r} reaches {inner.target!r}, which uses the "
                        f"forbidden modality {prim.modality!r}",
                    )
                )
            elif inner.target in self.library_entries:
                self._check_library_modalities(call, inner.target, seen)

    # ------------------------------------------------------------- arguments

    def _check_args(self, skill: SkillDef, call: Call, target: _Callable) -> None:
        by_name: dict[str, _ParamSig] = {p.name: p for p in target.params}
        bound: dict[str, Arg] = {}
        positional = [a for a in call.args if a.name is None]
        if positional:
            self.report.warnings.append(
                Finding(
                    POSITIONAL_STYLE,
                    _loc(call),
                    f"call to {call.target!r} passes arguments positionally",
                )
            )
        pos_index = 0
        for arg in call.args:
            if arg.name is None:
                if pos_index >= len(target.params):
                    self.report.errors.append(
                        Finding(
                            UNKNOWN_ARGUMENT,
                            _loc(call),
                            f"too many arguments for {call.target!r}",
                        )
                    )
                    continue
                sig = target.params[pos_index]
                pos_index += 1
            else:
                sig = by_name.get(arg.name)
                if sig is None:
                    self.report.errors.append(
                        Finding(
                            UNKNOWN_ARGUMENT,
                            _loc(call),
                            f"{call.target!r} has no argument {arg.name!r}",
                        )
                    )
                    continue
            if sig.name in bound:
                self.report.errors.append(
                    Finding(
                        UNKNOWN_ARGUMENT,
                        _loc(call),
                        f"argument {sig.name!r} given more than once",
                    )
                )
                continue
            bound[sig.name] = arg
            self._check_value(skill, call, sig, arg.value)
        for sig in target.params:
            if sig.required and sig.name not in bound:
                self.report.errors.append(
                    Finding(
                        MISSING_REQUIRED_ARGUMENT,
                        _loc(call),
                        f"{call.target!r} requires argument {sig.name!r}",
                    )
                )

    def _check_value(
        self, skill: SkillDef, call: Call, sig: _ParamSig, value: nodes.Value
    ) -> None:
        if isinstance(value, ParamRef):
            param = next((p for p in skill.params if p.name == value.name), None)
            if param is None:
                self.report.errors.append(
                    Finding(
                        UNDEFINED_FUNCTION,
                        _loc(call),
                        f"reference to undefined parameter {value.name!r}",
                    )
                )
                return
            # The default is what runs when the entry skill is instantiated
            # without overrides, so check it against the target's contract.
            value = param.default

        vtype = _value_type(value)
        if sig.type in ("number", "int"):
            if vtype not in ("number", "int"):
                self.report.errors.append(
                    Finding(
                        TYPE_MISMATCH,
                        _loc(call),
                        f"argument {sig.name!r} of {call.target!r} expects a number, "
                        f"got {vtype}",
                    )
                )
                return
            if sig.type == "int" and vtype != "int":
                self.report.errors.append(
                    Finding(
                        TYPE_MISMATCH,
                        _loc(call),
                        f"argument {sig.name!r} of {call.target!r} expects an integer",
                    )
                )
                return
            assert isinstance(value, Number)
            if value.unit is not None and value.unit != sig.unit:
                expected = sig.unit or "a bare number"
                self.report.errors.append(
                    Finding(
                        UNIT_MISMATCH,
                        _loc(call),
                        f"argument {sig.name!r} of {call.target!r} expects "
                        f"{expected}, got {value.unit!r}",
                    )
                )
                return
            if sig.range is not None:
                lo, hi = sig.range
                if not (lo <= value.value <= hi):
                    self.report.errors.append(
                        Finding(
                            RANGE_VIOLATION,
                            _loc(call),
                            f"argument {sig.name!r} of {call.target!r} is "
                            f"{value.render()}, outside [{lo}, {hi}]",
                        )
                    )
        elif sig.type != vtype:
            self.report.errors.append(
                Finding(
                    TYPE_MISMATCH,
                    _loc(call),
                    f"argument {sig.name!r} of {call.target!r} expects "
                    f"{sig.type}, got {vtype}",
                )
            )

    # ------------------------------------------------------- whole-program

    def _check_recursion(self) -> None:
        graph: dict[str, set[str]] = {name: set() for name in self.skills}
        for skill in self.program.skills:
            for call in nodes.iter_calls(skill.body):
                if call.target in self.skills:
                    graph[skill.name].add(call.target)

        in_cycle: set[str] = set()
        state: dict[str, int] = {}  # 0 = visiting, 1 = done

        def visit(name: str, stack: list[str]) -> None:
            state[name] = 0
            stack.append(name)
            for nxt in sorted(graph[name]):
                if nxt not in state:
                    visit(nxt, stack)
                elif state[nxt] == 0:
                    in_cycle.update(stack[stack.index(nxt):])
            stack.pop()
            state[name] = 1

        for name in graph:
            if name not in state:
                visit(name, [])
        for name in sorted(in_cycle):
            skill = self.skills[name]
            self.report.errors.append(
                Finding(
                    RECURSION_DETECTED,
                    _loc(skill),
                    f"skill {name!r} participates in a call cycle",
                )
            )

    def _check_unused(self) -> None:
        if len(self.skills) <= 1:
            return
        entry = nodes.entry_skill_name(self.program)
        reachable = {entry}
        frontier = [entry]
        while frontier:
            current = self.skills.get(frontier.pop())
            if current is None:
                continue
            for call in nodes.iter_calls(current.body):
                if call.target in self.skills and call.target not in reachable:
                    reachable.add(call.target)
                    frontier.append(call.target)
        for skill in self.program.skills:
            if skill.name not in reachable:
                self.report.warnings.append(
                    Finding(
                        UNUSED_SKILL,
                        _loc(skill),
                        f"skill {skill.name!r} is never called from the entry skill",
                    )
                )


def validate(
    program: Program,
    manifest: "EmbodimentManifest",
    library: Iterable["SkillEntry"] = (),
    modality_constraints: Iterable[str] = (),
) -> ValidationReport:
    """Check a parsed program against a manifest and skill library."""
    return Validator(program, manifest, library, modality_constraints).run()
