"""AST node types for the Expressive Behavior Language (grammar ebl/1).

Nodes are immutable. Source positions are carried for diagnostics but do not
participate in structural equality, so differently formatted sources parse to
equal ASTs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

GRAMMAR_VERSION = "ebl/1"

MAX_REPEAT_COUNT = 100
MAX_NESTING_DEPTH = 8

UNITS = ("deg", "m", "s")


def format_number(value: float, is_int: bool) -> str:
    """Render a numeric literal without exponent notation."""
    if is_int:
        return str(int(value))
    text = repr(float(value))
    if "e" in text or "E" in text:
        text = f"{value:.12f}".rstrip("0")
        if text.endswith("."):
            text += "0"
    return text


@dataclass(frozen=True)
class Number:
    value: float
    unit: str | None = None
    is_int: bool = False

    def render(self) -> str:
        text = format_number(self.value, self.is_int)
        return f"{text}{self.unit}" if self.unit else text


@dataclass(frozen=True)
class Str:
    value: str

    def render(self) -> str:
        escaped = self.value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{escaped}"'


@dataclass(frozen=True)
class Color:
    hex: str  # normalized "#RRGGBB", uppercase

    def render(self) -> str:
        return self.hex

    def rgb(self) -> tuple[int, int, int]:
        return (int(self.hex[1:3], 16), int(self.hex[3:5], 16), int(self.hex[5:7], 16))


@dataclass(frozen=True)
class ParamRef:
    name: str

    def render(self) -> str:
        return self.name


Value = Number | Str | Color | ParamRef


@dataclass(frozen=True)
class Arg:
    name: str | None  # None = positional style
    value: Value

    def render(self) -> str:
        if self.name is None:
            return self.value.render()
        return f"{self.name}={self.value.render()}"


@dataclass(frozen=True)
class Call:
    target: str
    args: tuple[Arg, ...] = ()
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    def render(self) -> str:
        return f"{self.target}({', '.join(a.render() for a in self.args)})"


@dataclass(frozen=True)
class Repeat:
    count: int
    body: tuple["Stmt", ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class If:
    predicate: Call
    then_body: tuple["Stmt", ...]
    else_body: tuple["Stmt", ...] | None = None
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Wait:
    seconds: float
    seconds_is_int: bool = False
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


Stmt = Call | Repeat | If | Wait


@dataclass(frozen=True)
class Param:
    name: str
    default: Value

    def render(self) -> str:
        return f"{self.name}={self.default.render()}"


@dataclass(frozen=True)
class SkillDef:
    name: str
    params: tuple[Param, ...]
    docstring: str | None
    body: tuple[Stmt, ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Program:
    skills: tuple[SkillDef, ...]

    def skill(self, name: str) -> SkillDef | None:
        for s in self.skills:
            if s.name == name:
                return s
        return None

    def skill_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.skills)


def entry_skill_name(program: Program) -> str:
    """Pick the program's top-level skill.

    The entry skill is the last defined skill that no other skill in the
    program calls; if every skill is called somewhere, the last definition
    wins.
    """
    called: set[str] = set()
    names = set(program.skill_names())
    for skill in program.skills:
        for call in iter_calls(skill.body):
            if call.target in names and call.target != skill.name:
                called.add(call.target)
    roots = [s.name for s in program.skills if s.name not in called]
    if roots:
        return roots[-1]
    return program.skills[-1].name


def iter_calls(body: tuple[Stmt, ...]):
    """Yield every Call statement in a body, depth first.

    If-predicates are sensor lookups, not actions, and are not yielded.
    """
    for stmt in body:
        if isinstance(stmt, Call):
            yield stmt
        elif isinstance(stmt, Repeat):
            yield from iter_calls(stmt.body)
        elif isinstance(stmt, If):
            yield from iter_calls(stmt.then_body)
            if stmt.else_body is not None:
                yield from iter_calls(stmt.else_body)


def iter_statements(body: tuple[Stmt, ...]):
    """Yield every statement in a body, depth first."""
    for stmt in body:
        yield stmt
        if isinstance(stmt, Repeat):
            yield from iter_statements(stmt.body)
        elif isinstance(stmt, If):
            yield from iter_statements(stmt.then_body)
            if stmt.else_body is not None:
                yield from iter_statements(stmt.else_body)


INDENT = "    "


def _render_stmt(stmt: Stmt, depth: int, out: list[str]) -> None:
    pad = INDENT * depth
    if isinstance(stmt, Call):
        out.append(f"{pad}{stmt.render()}")
    elif isinstance(stmt, Wait):
        out.append(f"{pad}wait {format_number(stmt.seconds, stmt.seconds_is_int)}s")
    elif isinstance(stmt, Repeat):
        out.append(f"{pad}repeat {stmt.count} {{")
        for inner in stmt.body:
            _render_stmt(inner, depth + 1, out)
        out.append(f"{pad}}}")
    elif isinstance(stmt, If):
        out.append(f"{pad}if {stmt.predicate.render()} {{")
        for inner in stmt.then_body:
            _render_stmt(inner, depth + 1, out)
        if stmt.else_body is not None:
            out.append(f"{pad}}} else {{")
            for inner in stmt.else_body:
                _render_stmt(inner, depth + 1, out)
        out.append(f"{pad}}}")
    else:  # pragma: no cover - exhaustive over Stmt
        raise TypeError(f"unknown statement node {stmt!r}")


def pretty_print(program: Program) -> str:
    """Deterministic canonical source for a program.

    Reparsing the output yields an AST equal to `program` (modulo unit
    normalization on wait literals, which the parser already applies).
    """
    chunks: list[str] = []
    for skill in program.skills:
        lines: list[str] = []
        params = ", ".join(p.render() for p in skill.params)
        lines.append(f"skill {skill.name}({params}) {{")
        if skill.docstring is not None:
            lines.append(f'{INDENT}"""{skill.docstring}"""')
        for stmt in skill.body:
            _render_stmt(stmt, 1, lines)
        lines.append("}")
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n"
