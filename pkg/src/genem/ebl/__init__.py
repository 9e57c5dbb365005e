"""Expressive Behavior Language: parser, validator, interpreter, and diff."""

from .analysis import extract_called_skills
from .diff import EditOp, apply_diff, ast_diff, diff_bodies
from .interpreter import Budget, Executor, Interpreter, RunStats, interpret
from .nodes import (
    GRAMMAR_VERSION,
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
    Stmt,
    Str,
    Wait,
    entry_skill_name,
    pretty_print,
)
from .parser import parse
from .validator import Finding, ValidationReport, validate

__all__ = [
    "GRAMMAR_VERSION",
    "MAX_NESTING_DEPTH",
    "MAX_REPEAT_COUNT",
    "Arg",
    "Budget",
    "Call",
    "Color",
    "EditOp",
    "Executor",
    "Finding",
    "If",
    "Interpreter",
    "Number",
    "Param",
    "ParamRef",
    "Program",
    "Repeat",
    "RunStats",
    "SkillDef",
    "Stmt",
    "Str",
    "ValidationReport",
    "Wait",
    "apply_diff",
    "ast_diff",
    "diff_bodies",
    "entry_skill_name",
    "extract_called_skills",
    "interpret",
    "parse",
    "pretty_print",
    "validate",
]
