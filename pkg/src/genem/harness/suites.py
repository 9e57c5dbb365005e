"""Experiment suites: behaviors, modular-vs-one-shot ablation, composability,
and feedback adaptation, each emitting a deterministic JSON report.

A slot succeeds when its program validates cleanly and simulates without
faults; every failure carries exactly one taxonomy code. Reports contain no
timestamps, so replay-backed runs hash identically run over run.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .. import ebl
from ..domain import BehaviorProgram, Session
from ..errors import BudgetExceeded, CodeRejected, ExecutorFault
from ..gateway import Gateway
from ..pipeline import Pipeline, sample_candidates
from ..robots.manifests import load_manifest
from ..robots.scenarios import load_scenario
from ..robots.simulator import simulate
from ..skills import load_seed_skills
from ..templates import TemplateSet
from .catalog import (
    COMPOSE_PROVIDED_SKILLS,
    EXPECTED_EDIT_CLASS,
    FEEDBACK_BEHAVIOR_IDS,
    FEEDBACK_TYPES,
    REMOVED_CAPABILITY,
    BehaviorCatalog,
    behavior_catalog,
    feedback_utterance,
    structural_checks,
    benchmark_catalog,
)


@dataclass
class SlotResult:
    variant: int
    status: str  # "success" | "failure"
    taxonomy: str | None = None
    detail: str | None = None
    structural: dict[str, bool] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "status": self.status,
            "taxonomy": self.taxonomy,
            "detail": self.detail,
            "structural": dict(sorted(self.structural.items())),
            "warnings": sorted(self.warnings),
        }


@dataclass
class BehaviorRow:
    behavior_id: str
    slots: list[SlotResult]

    @property
    def success_count(self) -> int:
        return sum(1 for s in self.slots if s.status == "success")

    def taxonomy_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for slot in self.slots:
            if slot.taxonomy:
                counts[slot.taxonomy] = counts.get(slot.taxonomy, 0) + 1
        return dict(sorted(counts.items()))

    def structural_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for slot in self.slots:
            for name, passed in slot.structural.items():
                counts.setdefault(name, 0)
                if passed:
                    counts[name] += 1
        return dict(sorted(counts.items()))

    def to_dict(self) -> dict:
        return {
            "behavior": self.behavior_id,
            "success": self.success_count,
            "taxonomy": self.taxonomy_counts(),
            "structural": self.structural_counts(),
            "slots": [s.to_dict() for s in self.slots],
        }


@dataclass
class ExperimentReport:
    suite: str
    backend: str
    embodiment: str
    n: int
    rows: list[BehaviorRow]

    def row(self, behavior_id: str) -> BehaviorRow:
        for row in self.rows:
            if row.behavior_id == behavior_id:
                return row
        raise KeyError(behavior_id)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "backend": self.backend,
            "embodiment": self.embodiment,
            "n": self.n,
            "rows": [r.to_dict() for r in self.rows],
        }

    def report_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def render_table(self) -> str:
        width = max(len(r.behavior_id) for r in self.rows) + 2
        lines = [f"{'Behavior':<{width}}Execution  Failures"]
        for row in self.rows:
            failures = ", ".join(f"{k} x{v}" for k, v in row.taxonomy_counts().items())
            lines.append(f"{row.behavior_id:<{width}}{row.success_count}/{self.n}        {failures}")
        return "\n".join(lines)


def _run_slot_checks(
    behavior_id: str,
    program: BehaviorProgram | None,
    trajectory,
    scenario,
) -> dict[str, bool]:
    results: dict[str, bool] = {}
    for check in structural_checks(behavior_id):
        if program is None:
            continue
        if check.needs_trajectory and trajectory is None:
            continue
        results[check.name] = bool(check.fn(program, trajectory, scenario))
    return results


def _taxonomy_for(result) -> tuple[str, str]:
    if result.report is not None and result.report.errors:
        return result.report.errors[0].code, result.error_detail or ""
    return result.error_code or "UnknownFailure", result.error_detail or ""


def run_behavior_suite(
    catalog: BehaviorCatalog,
    n: int,
    gateway: Gateway,
    backend_label: str = "replay",
    library=(),
    templates: TemplateSet | None = None,
) -> ExperimentReport:
    """Generate each behavior n times, simulate, and apply structural checks."""
    templates = templates or TemplateSet.load_default()
    manifest = load_manifest(catalog.embodiment_id)
    base = Pipeline(gateway, templates, manifest, list(library))
    rows: list[BehaviorRow] = []
    for behavior_id in catalog.behavior_ids():
        instruction = catalog.instruction(behavior_id)
        scenario = load_scenario(instruction.scenario_id)
        slots: list[SlotResult] = []
        for result in sample_candidates(base, instruction, n):
            if not result.ok:
                taxonomy, detail = _taxonomy_for(result)
                slots.append(SlotResult(result.variant, "failure", taxonomy, detail))
                continue
            program = result.program
            try:
                trajectory = simulate(program, manifest, scenario, library=library)
            except (ExecutorFault, BudgetExceeded) as exc:
                slots.append(
                    SlotResult(
                        result.variant,
                        "failure",
                        type(exc).__name__,
                        str(exc),
                        _run_slot_checks(behavior_id, program, None, scenario),
                    )
                )
                continue
            slots.append(
                SlotResult(
                    result.variant,
                    "success",
                    structural=_run_slot_checks(behavior_id, program, trajectory, scenario),
                )
            )
        rows.append(BehaviorRow(behavior_id, slots))
    return ExperimentReport("behaviors", backend_label, catalog.embodiment_id, n, rows)


@dataclass
class PairedReport:
    modular: ExperimentReport
    ablated: ExperimentReport

    def to_dict(self) -> dict:
        return {"modular": self.modular.to_dict(), "ablated": self.ablated.to_dict()}

    def report_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def render_table(self) -> str:
        width = max(len(r.behavior_id) for r in self.modular.rows) + 2
        lines = [f"{'Behavior':<{width}}Modular  Ablated  Ablated failures"]
        for row in self.modular.rows:
            ab = self.ablated.row(row.behavior_id)
            failures = ", ".join(f"{k} x{v}" for k, v in ab.taxonomy_counts().items())
            lines.append(
                f"{row.behavior_id:<{width}}{row.success_count}/{self.modular.n}      "
                f"{ab.success_count}/{self.ablated.n}      {failures}"
            )
        return "\n".join(lines)


def run_ablation_suite(
    catalog: BehaviorCatalog,
    n: int,
    gateway: Gateway,
    backend_label: str = "replay",
    templates: TemplateSet | None = None,
) -> PairedReport:
    """Side-by-side comparison: staged pipeline vs one-shot code generation."""
    templates = templates or TemplateSet.load_default()
    modular = run_behavior_suite(catalog, n, gateway, backend_label, templates=templates)
    manifest = load_manifest(catalog.embodiment_id)
    base = Pipeline(gateway, templates, manifest, [])
    rows: list[BehaviorRow] = []
    for behavior_id in catalog.behavior_ids():
        instruction = catalog.instruction(behavior_id)
        scenario = load_scenario(instruction.scenario_id)
        slots: list[SlotResult] = []
        for variant in range(n):
            slots.append(
                _ablated_slot(base, instruction, behavior_id, scenario, manifest, variant)
            )
        rows.append(BehaviorRow(behavior_id, slots))
    ablated = ExperimentReport(
        "ablation", backend_label, catalog.embodiment_id, n, rows
    )
    return PairedReport(modular, ablated)


def _ablated_slot(base, instruction, behavior_id, scenario, manifest, variant) -> SlotResult:
    pipeline = base.with_variant(variant)
    try:
        program = pipeline.end_to_end_ablation(instruction)
    except CodeRejected as exc:
        # The source still parses on the authored corpus, so AST-level
        # structural checks run even for rejected slots.
        parsed = None
        try:
            parsed = BehaviorProgram.from_source(exc.source)
        except Exception:
            pass
        return SlotResult(
            variant,
            "failure",
            exc.report.errors[0].code if exc.report.errors else "CodeRejected",
            str(exc),
            _run_slot_checks(behavior_id, parsed, None, scenario),
            warnings=exc.report.warning_codes(),
        )
    except Exception as exc:
        return SlotResult(variant, "failure", type(exc).__name__, str(exc))
    report = ebl.validate(program.ast, manifest, [])
    try:
        trajectory = simulate(program, manifest, scenario)
    except (ExecutorFault, BudgetExceeded) as exc:
        return SlotResult(
            variant,
            "failure",
            type(exc).__name__,
            str(exc),
            _run_slot_checks(behavior_id, program, None, scenario),
            warnings=report.warning_codes(),
        )
    return SlotResult(
        variant,
        "success",
        structural=_run_slot_checks(behavior_id, program, trajectory, scenario),
        warnings=report.warning_codes(),
    )


@dataclass
class UsageMatrixReport:
    backend: str
    n: int
    seed_skills: tuple[str, ...]
    # target -> skill -> sample-count that used it, or None where withheld
    matrix: dict[str, dict[str, int | None]]
    failures: dict[str, list[str]]

    def to_dict(self) -> dict:
        return {
            "suite": "compose",
            "backend": self.backend,
            "n": self.n,
            "seed_skills": list(self.seed_skills),
            "matrix": {
                target: {k: cells[k] for k in sorted(cells)}
                for target, cells in sorted(self.matrix.items())
            },
            "failures": {k: sorted(v) for k, v in sorted(self.failures.items())},
        }

    def report_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def render_table(self) -> str:
        skills = list(self.seed_skills)
        width = max(len(t) for t in self.matrix) + 2
        header = f"{'Behavior':<{width}}" + "".join(f"{s:>14}" for s in skills)
        lines = [header]
        for target, cells in self.matrix.items():
            rendered = "".join(
                f"{('-' if cells.get(s) is None else str(cells[s])):>14}" for s in skills
            )
            lines.append(f"{target:<{width}}{rendered}")
        return "\n".join(lines)


def run_composability_suite(
    n: int,
    gateway: Gateway,
    backend_label: str = "replay",
    templates: TemplateSet | None = None,
    provided: dict[str, tuple[str, ...]] | None = None,
) -> UsageMatrixReport:
    """Count which seed skills each generated behavior composes."""
    templates = templates or TemplateSet.load_default()
    provided = provided or COMPOSE_PROVIDED_SKILLS
    seed_names = tuple(load_seed_skills().names())
    manifest = load_manifest("quadruped_v1")
    catalog = behavior_catalog(tuple(provided.keys()), "quadruped_v1")
    matrix: dict[str, dict[str, int | None]] = {}
    failures: dict[str, list[str]] = {}
    for target, offered in provided.items():
        library = load_seed_skills(offered).entries
        base = Pipeline(gateway, templates, manifest, list(library))
        instruction = catalog.instruction(target)
        cells: dict[str, int | None] = {
            name: (0 if name in offered else None) for name in seed_names
        }
        for result in sample_candidates(base, instruction, n):
            if not result.ok:
                failures.setdefault(target, []).append(
                    f"variant {result.variant}: {result.error_code}"
                )
                continue
            used = ebl.extract_called_skills(result.program.ast, offered)
            for name, count in used.items():
                if count > 0:
                    cells[name] = (cells[name] or 0) + 1
        matrix[target] = cells
    return UsageMatrixReport(backend_label, n, seed_names, matrix, failures)


@dataclass
class FeedbackCellResult:
    behavior_id: str
    feedback_type: str
    status: str  # "success" | "failure"
    route: str | None = None
    edit_kinds: list[str] = field(default_factory=list)
    detail: str | None = None

    def to_dict(self) -> dict:
        return {
            "behavior": self.behavior_id,
            "type": self.feedback_type,
            "status": self.status,
            "route": self.route,
            "edits": list(self.edit_kinds),
            "detail": self.detail,
        }


@dataclass
class FeedbackReport:
    backend: str
    cells: list[FeedbackCellResult]

    def cell(self, behavior_id: str, feedback_type: str) -> FeedbackCellResult:
        for cell in self.cells:
            if cell.behavior_id == behavior_id and cell.feedback_type == feedback_type:
                return cell
        raise KeyError((behavior_id, feedback_type))

    def to_dict(self) -> dict:
        return {
            "suite": "feedback",
            "backend": self.backend,
            "cells": [c.to_dict() for c in self.cells],
        }

    def report_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def render_table(self) -> str:
        width = max(len(c.behavior_id) for c in self.cells) + 2
        lines = [f"{'Behavior':<{width}}" + "".join(f"{t:>10}" for t in FEEDBACK_TYPES)]
        by_behavior: dict[str, dict[str, str]] = {}
        for cell in self.cells:
            mark = "ok" if cell.status == "success" else "FAIL"
            by_behavior.setdefault(cell.behavior_id, {})[cell.feedback_type] = mark
        for behavior, marks in by_behavior.items():
            lines.append(
                f"{behavior:<{width}}"
                + "".join(f"{marks.get(t, '-'):>10}" for t in FEEDBACK_TYPES)
            )
        return "\n".join(lines)


def _verify_feedback_cell(
    behavior_id: str,
    feedback_type: str,
    session: Session,
    manifest,
) -> FeedbackCellResult:
    before = session.rounds[-2].program
    after = session.rounds[-1].program
    feedback = session.rounds[-1].feedback
    ops = ebl.ast_diff(before.ast, after.ast)
    kinds = [op.kind for op in ops]
    expected = EXPECTED_EDIT_CLASS[feedback_type]
    result = FeedbackCellResult(
        behavior_id, feedback_type, "success", feedback.route, kinds
    )
    if kinds != [expected]:
        result.status = "failure"
        result.detail = f"expected edit class {expected}, got {kinds}"
        return result
    before_body = before.ast.skill(ebl.entry_skill_name(before.ast)).body
    after_body = after.ast.skill(ebl.entry_skill_name(after.ast)).body
    if ebl.apply_diff(before_body, ops) != after_body:
        result.status = "failure"
        result.detail = "applying the edit script did not reproduce the new program"
        return result
    if feedback_type == "remove":
        banned = REMOVED_CAPABILITY.get(behavior_id, ())
        called = {c.target for skill in after.ast.skills for c in ebl.nodes.iter_calls(skill.body)}
        leftovers = sorted(called.intersection(banned))
        if leftovers:
            result.status = "failure"
            result.detail = f"removed capability still called: {leftovers}"
            return result
        report = ebl.validate(after.ast, manifest, [])
        if not report.valid:
            result.status = "failure"
            result.detail = f"post-removal program invalid: {report.error_codes()}"
    return result


def run_feedback_suite(
    gateway: Gateway,
    backend_label: str = "replay",
    behavior_ids=FEEDBACK_BEHAVIOR_IDS,
    templates: TemplateSet | None = None,
) -> FeedbackReport:
    """Apply one feedback round per (behavior, type) cell and verify the edit."""
    templates = templates or TemplateSet.load_default()
    catalog = behavior_catalog(behavior_ids, "mobile_v1")
    manifest = load_manifest("mobile_v1")
    base = Pipeline(gateway, templates, manifest, [])
    cells: list[FeedbackCellResult] = []
    for behavior_id in behavior_ids:
        instruction = catalog.instruction(behavior_id)
        for feedback_type in FEEDBACK_TYPES:
            utterance = feedback_utterance(behavior_id, feedback_type)
            session = Session(
                id=f"feedback-{behavior_id}-{feedback_type}", instruction=instruction
            )
            try:
                base.run_generation(session)
                base.run_feedback_round(session, utterance)
            except CodeRejected as exc:
                taxonomy = exc.report.errors[0].code if exc.report.errors else "CodeRejected"
                cells.append(
                    FeedbackCellResult(
                        behavior_id, feedback_type, "failure", detail=taxonomy
                    )
                )
                continue
            except Exception as exc:
                cells.append(
                    FeedbackCellResult(
                        behavior_id, feedback_type, "failure", detail=str(exc)
                    )
                )
                continue
            cells.append(
                _verify_feedback_cell(behavior_id, feedback_type, session, manifest)
            )
    return FeedbackReport(backend_label, cells)


def record_transcripts(gateway: Gateway, suites=("behaviors",), n: int = 5) -> None:
    """Run suites against a record-mode gateway so later runs can replay."""
    for suite in suites:
        if suite == "behaviors":
            run_behavior_suite(benchmark_catalog("mobile_v1"), n, gateway, "live")
        elif suite == "ablation":
            run_ablation_suite(benchmark_catalog("mobile_v1"), n, gateway, "live")
        elif suite == "compose":
            run_composability_suite(n, gateway, "live")
        elif suite == "feedback":
            run_feedback_suite(gateway, "live")
        else:
            raise ValueError(f"unknown suite {suite!r}")
