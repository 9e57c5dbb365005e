"""Structural diff between two programs at statement granularity.

The diff is computed over the entry skill's top-level statement list and is
expressed as an edit script; applying the script to the `before` body always
reproduces the `after` body exactly. Single-edit shapes get a dedicated op
(swap, retarget, wrap-in-repeat, one insert/remove); anything else falls back
to a minimal remove/insert script from a longest-common-subsequence match.
"""

from __future__ import annotations

from dataclasses import dataclass
from difflib import SequenceMatcher

from . import nodes
from .nodes import Call, Program, Repeat, Stmt, entry_skill_name


def _render(stmt: Stmt) -> str:
    lines: list[str] = []
    nodes._render_stmt(stmt, 0, lines)
    return "\n".join(lines)


@dataclass(frozen=True)
class InsertedCall:
    index: int
    stmt: Stmt
    before: str | None  # rendered statement this lands in front of, None = end

    kind = "InsertedCall"

    def apply(self, body: list[Stmt]) -> None:
        body.insert(self.index, self.stmt)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "index": self.index,
            "statement": _render(self.stmt),
            "before": self.before,
        }


@dataclass(frozen=True)
class RemovedCall:
    index: int
    stmt: Stmt

    kind = "RemovedCall"

    def apply(self, body: list[Stmt]) -> None:
        del body[self.index]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "index": self.index, "statement": _render(self.stmt)}


@dataclass(frozen=True)
class SwappedOrder:
    i: int
    j: int
    first: str
    second: str

    kind = "SwappedOrder"

    def apply(self, body: list[Stmt]) -> None:
        body[self.i], body[self.j] = body[self.j], body[self.i]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "i": self.i,
            "j": self.j,
            "first": self.first,
            "second": self.second,
        }


@dataclass(frozen=True)
class WrappedInRepeat:
    start: int
    end: int  # exclusive
    count: int

    kind = "WrappedInRepeat"

    def apply(self, body: list[Stmt]) -> None:
        wrapped = Repeat(self.count, tuple(body[self.start : self.end]))
        body[self.start : self.end] = [wrapped]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "start": self.start,
            "end": self.end,
            "count": self.count,
        }


@dataclass(frozen=True)
class RetargetedCall:
    index: int
    old: Stmt
    new: Stmt

    kind = "RetargetedCall"

    def apply(self, body: list[Stmt]) -> None:
        body[self.index] = self.new

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "index": self.index,
            "old": _render(self.old),
            "new": _render(self.new),
        }


EditOp = InsertedCall | RemovedCall | SwappedOrder | WrappedInRepeat | RetargetedCall


def apply_diff(before: tuple[Stmt, ...], ops: list[EditOp]) -> tuple[Stmt, ...]:
    body = list(before)
    for op in ops:
        op.apply(body)
    return tuple(body)


def _detect_swap(before: list[Stmt], after: list[Stmt]) -> SwappedOrder | None:
    if len(before) != len(after):
        return None
    diffs = [k for k in range(len(before)) if before[k] != after[k]]
    if len(diffs) != 2:
        return None
    i, j = diffs
    if before[i] == after[j] and before[j] == after[i]:
        return SwappedOrder(i, j, _render(before[i]), _render(before[j]))
    return None


def _detect_retarget(before: list[Stmt], after: list[Stmt]) -> RetargetedCall | None:
    if len(before) != len(after):
        return None
    diffs = [k for k in range(len(before)) if before[k] != after[k]]
    if len(diffs) != 1:
        return None
    k = diffs[0]
    old, new = before[k], after[k]
    if isinstance(old, Call) and isinstance(new, Call) and old.target != new.target:
        return RetargetedCall(k, old, new)
    return None


def _detect_wrap(before: list[Stmt], after: list[Stmt]) -> WrappedInRepeat | None:
    for k, stmt in enumerate(after):
        if not isinstance(stmt, Repeat):
            continue
        span = len(stmt.body)
        if span == 0 or len(after) != len(before) - span + 1:
            continue
        if (
            list(before[:k]) == list(after[:k])
            and list(before[k : k + span]) == list(stmt.body)
            and list(before[k + span :]) == list(after[k + 1 :])
        ):
            return WrappedInRepeat(k, k + span, stmt.count)
    return None


def _lcs_script(before: list[Stmt], after: list[Stmt]) -> list[EditOp]:
    matcher = SequenceMatcher(a=before, b=after, autojunk=False)
    removals: list[RemovedCall] = []
    insertions: list[InsertedCall] = []
    for tag, i1, i2, j1, j2 in matcher.get_opcodes():
        if tag in ("delete", "replace"):
            for k in range(i1, i2):
                removals.append(RemovedCall(k, before[k]))
        if tag in ("insert", "replace"):
            for k in range(j1, j2):
                anchor = _render(after[k + 1]) if k + 1 < len(after) else None
                insertions.append(InsertedCall(k, after[k], anchor))
    # Removals run right to left so indices stay valid; what remains is the
    # common subsequence, and inserting at after-positions left to right
    # rebuilds `after`.
    removals.sort(key=lambda op: op.index, reverse=True)
    insertions.sort(key=lambda op: op.index)
    return [*removals, *insertions]


def diff_bodies(before: tuple[Stmt, ...], after: tuple[Stmt, ...]) -> list[EditOp]:
    b, a = list(before), list(after)
    if b == a:
        return []
    swap = _detect_swap(b, a)
    if swap is not None:
        return [swap]
    wrap = _detect_wrap(b, a)
    if wrap is not None:
        return [wrap]
    retarget = _detect_retarget(b, a)
    if retarget is not None:
        return [retarget]
    return _lcs_script(b, a)


def ast_diff(before: Program, after: Program) -> list[EditOp]:
    """Edit script between the entry-skill bodies of two programs."""
    before_body = before.skill(entry_skill_name(before)).body
    after_body = after.skill(entry_skill_name(after)).body
    return diff_bodies(before_body, after_body)
