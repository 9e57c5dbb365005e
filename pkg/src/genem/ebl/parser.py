"""Recursive-descent parser for the ebl/1 grammar.

Grammar sketch::

    program   := skill_def+
    skill_def := "skill" NAME "(" [param ("," param)*] ")" "{" DOCSTRING? stmt* "}"
    param     := NAME "=" literal
    stmt      := call | repeat | if | wait
    call      := NAME "(" [arg ("," arg)*] ")"
    arg       := (NAME "=")? value
    repeat    := "repeat" INT "{" stmt* "}"
    if        := "if" call "{" stmt* "}" ["else" "{" stmt* "}"]
    wait      := "wait" NUMBER["s"]
    value     := literal | NAME          (a bare NAME is a parameter reference)
    literal   := NUMBER[unit] | STRING | COLOR

Numbers may carry a unit suffix (deg, m, s) with no intervening space.
Repeat counts must be literal integers in [1, 100] and statement nesting is
capped at depth 8; both bounds are grammar-level and violating them is a
parse error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError
from . import nodes
from .nodes import (
    MAX_NESTING_DEPTH,
    MAX_REPEAT_COUNT,
    Arg,
    Call,
    Color,
    If,
    Number,
    Param,
    ParamRef,
    Program,
    Repeat,
    SkillDef,
    Str,
    Value,
    Wait,
)

KEYWORDS = {"skill", "repeat", "if", "else", "wait"}

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"-?\d+(\.\d+)?")
_COLOR_RE = re.compile(r"#[0-9a-fA-F]{6}")


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, KEYWORD, NUMBER, STRING, DOCSTRING, COLOR, PUNCT, EOF
    text: str
    line: int
    col: int
    value: object = None  # parsed payload for NUMBER/STRING/DOCSTRING/COLOR


class Lexer:
    def __init__(self, source: str):
        self.source = source
        self.pos = 0
        self.line = 1
        self.col = 1

    def _error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.col)

    def _advance(self, n: int) -> None:
        chunk = self.source[self.pos : self.pos + n]
        newlines = chunk.count("\n")
        if newlines:
            self.line += newlines
            self.col = n - chunk.rfind("\n")
        else:
            self.col += n
        self.pos += n

    def tokens(self) -> list[Token]:
        out: list[Token] = []
        while True:
            tok = self._next()
            out.append(tok)
            if tok.kind == "EOF":
                return out

    def _next(self) -> Token:
        src = self.source
        while self.pos < len(src) and src[self.pos] in " \t\r\n":
            self._advance(1)
        if self.pos >= len(src):
            return Token("EOF", "", self.line, self.col)

        line, col = self.line, self.col
        ch = src[self.pos]

        if src.startswith('"""', self.pos):
            end = src.find('"""', self.pos + 3)
            if end < 0:
                raise ParseError("unterminated docstring", line, col)
            text = src[self.pos + 3 : end]
            self._advance(end + 3 - self.pos)
            return Token("DOCSTRING", text, line, col, value=text)

        if ch == '"':
            return self._string(line, col)

        if ch == "#":
            m = _COLOR_RE.match(src, self.pos)
            if not m:
                raise ParseError("malformed color literal, expected #RRGGBB", line, col)
            text = m.group(0)
            self._advance(len(text))
            return Token("COLOR", text, line, col, value=text.upper())

        if ch.isdigit() or (ch == "-" and self.pos + 1 < len(src) and src[self.pos + 1].isdigit()):
            return self._number(line, col)

        m = _NAME_RE.match(src, self.pos)
        if m:
            text = m.group(0)
            self._advance(len(text))
            kind = "KEYWORD" if text in KEYWORDS else "NAME"
            return Token(kind, text, line, col)

        if ch in "(){},=":
            self._advance(1)
            return Token("PUNCT", ch, line, col)

        raise ParseError(f"unexpected character {ch!r}", line, col)

    def _string(self, line: int, col: int) -> Token:
        src = self.source
        i = self.pos + 1
        parts: list[str] = []
        while i < len(src):
            c = src[i]
            if c == "\\":
                if i + 1 >= len(src):
                    break
                esc = src[i + 1]
                if esc == "n":
                    parts.append("\n")
                elif esc in ('"', "\\"):
                    parts.append(esc)
                else:
                    raise ParseError(f"unsupported escape \\{esc}", line, col)
                i += 2
                continue
            if c == '"':
                text = src[self.pos : i + 1]
                self._advance(i + 1 - self.pos)
                return Token("STRING", text, line, col, value="".join(parts))
            if c == "\n":
                break
            parts.append(c)
            i += 1
        raise ParseError("unterminated string literal", line, col)

    def _number(self, line: int, col: int) -> Token:
        src = self.source
        m = _NUMBER_RE.match(src, self.pos)
        assert m is not None
        text = m.group(0)
        is_int = m.group(1) is None
        end = self.pos + len(text)
        unit = None
        for candidate in ("deg", "m", "s"):
            if src.startswith(candidate, end):
                after = end + len(candidate)
                if after >= len(src) or not (src[after].isalnum() or src[after] == "_"):
                    unit = candidate
                    end += len(candidate)
                    break
        full = src[self.pos : end]
        self._advance(len(full))
        return Token(
            "NUMBER", full, line, col, value=Number(float(text), unit, is_int)
        )


class Parser:
    def __init__(self, source: str):
        self.toks = Lexer(source).tokens()
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def _advance(self) -> Token:
        tok = self.cur
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def _error(self, message: str, expected: tuple[str, ...] = ()) -> ParseError:
        tok = self.cur
        return ParseError(message, tok.line, tok.col, expected)

    def _expect_punct(self, text: str) -> Token:
        tok = self.cur
        if tok.kind != "PUNCT" or tok.text != text:
            raise self._error(f"found {tok.text or '<eof>'!r}", expected=(repr(text),))
        return self._advance()

    def _expect_keyword(self, word: str) -> Token:
        tok = self.cur
        if tok.kind != "KEYWORD" or tok.text != word:
            raise self._error(f"found {tok.text or '<eof>'!r}", expected=(repr(word),))
        return self._advance()

    def _expect_name(self, what: str = "name") -> Token:
        tok = self.cur
        if tok.kind != "NAME":
            raise self._error(f"found {tok.text or '<eof>'!r}", expected=(what,))
        return self._advance()

    def parse_program(self) -> Program:
        skills: list[SkillDef] = []
        if self.cur.kind == "EOF":
            raise self._error("empty program", expected=("'skill'",))
        while self.cur.kind != "EOF":
            skills.append(self.parse_skill())
        names: set[str] = set()
        for skill in skills:
            if skill.name in names:
                raise ParseError(
                    f"duplicate skill definition {skill.name!r}", skill.line, skill.col
                )
            names.add(skill.name)
        return Program(tuple(skills))

    def parse_skill(self) -> SkillDef:
        start = self._expect_keyword("skill")
        name = self._expect_name("skill name")
        self._expect_punct("(")
        params: list[Param] = []
        seen: set[str] = set()
        if not (self.cur.kind == "PUNCT" and self.cur.text == ")"):
            while True:
                params.append(self._parse_param(seen))
                if self.cur.kind == "PUNCT" and self.cur.text == ",":
                    self._advance()
                    continue
                break
        self._expect_punct(")")
        self._expect_punct("{")
        docstring = None
        if self.cur.kind == "DOCSTRING":
            docstring = self._advance().value
        body = self._parse_body(depth=1)
        self._expect_punct("}")
        return SkillDef(
            name.text, tuple(params), docstring, tuple(body), start.line, start.col
        )

    def _parse_param(self, seen: set[str]) -> Param:
        name = self._expect_name("parameter name")
        if name.text in seen:
            raise ParseError(f"duplicate parameter {name.text!r}", name.line, name.col)
        seen.add(name.text)
        self._expect_punct("=")
        default = self._parse_value(allow_ref=False)
        return Param(name.text, default)

    def _parse_body(self, depth: int) -> list[nodes.Stmt]:
        if depth > MAX_NESTING_DEPTH:
            raise self._error(f"statement nesting exceeds depth {MAX_NESTING_DEPTH}")
        body: list[nodes.Stmt] = []
        while not (self.cur.kind in ("EOF",) or (self.cur.kind == "PUNCT" and self.cur.text == "}")):
            body.append(self._parse_stmt(depth))
        return body

    def _parse_stmt(self, depth: int) -> nodes.Stmt:
        tok = self.cur
        if tok.kind == "KEYWORD":
            if tok.text == "repeat":
                return self._parse_repeat(depth)
            if tok.text == "if":
                return self._parse_if(depth)
            if tok.text == "wait":
                return self._parse_wait()
            raise self._error(
                f"found keyword {tok.text!r}", expected=("statement",)
            )
        if tok.kind == "NAME":
            return self._parse_call()
        raise self._error(
            f"found {tok.text or '<eof>'!r}",
            expected=("call", "'repeat'", "'if'", "'wait'"),
        )

    def _parse_repeat(self, depth: int) -> Repeat:
        start = self._expect_keyword("repeat")
        tok = self.cur
        if tok.kind != "NUMBER":
            raise self._error("repeat count must be a literal integer", ("integer",))
        num: Number = tok.value
        if not num.is_int or num.unit is not None or not (1 <= num.value <= MAX_REPEAT_COUNT):
            raise ParseError(
                f"repeat count must be a literal integer in [1, {MAX_REPEAT_COUNT}]",
                tok.line,
                tok.col,
            )
        self._advance()
        self._expect_punct("{")
        body = self._parse_body(depth + 1)
        self._expect_punct("}")
        return Repeat(int(num.value), tuple(body), start.line, start.col)

    def _parse_if(self, depth: int) -> If:
        start = self._expect_keyword("if")
        predicate = self._parse_call()
        self._expect_punct("{")
        then_body = self._parse_body(depth + 1)
        self._expect_punct("}")
        else_body = None
        if self.cur.kind == "KEYWORD" and self.cur.text == "else":
            self._advance()
            self._expect_punct("{")
            else_body = tuple(self._parse_body(depth + 1))
            self._expect_punct("}")
        return If(predicate, tuple(then_body), else_body, start.line, start.col)

    def _parse_wait(self) -> Wait:
        start = self._expect_keyword("wait")
        tok = self.cur
        if tok.kind != "NUMBER":
            raise self._error("wait needs a duration literal", ("number",))
        num: Number = tok.value
        if num.unit not in (None, "s"):
            raise ParseError(
                f"wait duration must be in seconds, got unit {num.unit!r}",
                tok.line,
                tok.col,
            )
        if num.value < 0:
            raise ParseError("wait duration must be non-negative", tok.line, tok.col)
        self._advance()
        return Wait(num.value, num.is_int, start.line, start.col)

    def _parse_call(self) -> Call:
        name = self._expect_name("function name")
        self._expect_punct("(")
        args: list[Arg] = []
        if not (self.cur.kind == "PUNCT" and self.cur.text == ")"):
            while True:
                args.append(self._parse_arg())
                if self.cur.kind == "PUNCT" and self.cur.text == ",":
                    self._advance()
                    continue
                break
        self._expect_punct(")")
        return Call(name.text, tuple(args), name.line, name.col)

    def _parse_arg(self) -> Arg:
        # Lookahead: NAME "=" means a named argument, otherwise a bare value.
        if (
            self.cur.kind == "NAME"
            and self.toks[self.i + 1].kind == "PUNCT"
            and self.toks[self.i + 1].text == "="
        ):
            name = self._advance().text
            self._advance()  # '='
            return Arg(name, self._parse_value(allow_ref=True))
        return Arg(None, self._parse_value(allow_ref=True))

    def _parse_value(self, allow_ref: bool) -> Value:
        tok = self.cur
        if tok.kind == "NUMBER":
            self._advance()
            return tok.value
        if tok.kind == "STRING":
            self._advance()
            return Str(tok.value)
        if tok.kind == "COLOR":
            self._advance()
            return Color(tok.value)
        if tok.kind == "NAME" and allow_ref:
            self._advance()
            return ParamRef(tok.text)
        expected = ("number", "string", "color") + (("name",) if allow_ref else ())
        raise self._error(f"found {tok.text or '<eof>'!r}", expected=expected)


def parse(source: str) -> Program:
    """Parse EBL source text into a Program AST."""
    return Parser(source).parse_program()
