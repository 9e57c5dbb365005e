"""Experiment runner: behavior, ablation, composability, and feedback suites."""

from .catalog import (
    COMPOSE_PROVIDED_SKILLS,
    EXPECTED_EDIT_CLASS,
    FEEDBACK_BEHAVIOR_IDS,
    FEEDBACK_TYPES,
    BENCHMARK_BEHAVIOR_IDS,
    BehaviorCatalog,
    CatalogEntry,
    behavior_catalog,
    catalog_entry,
    feedback_utterance,
    structural_checks,
    benchmark_catalog,
)
from .suites import (
    BehaviorRow,
    ExperimentReport,
    FeedbackReport,
    PairedReport,
    SlotResult,
    UsageMatrixReport,
    record_transcripts,
    run_ablation_suite,
    run_behavior_suite,
    run_composability_suite,
    run_feedback_suite,
)

__all__ = [
    "COMPOSE_PROVIDED_SKILLS",
    "EXPECTED_EDIT_CLASS",
    "FEEDBACK_BEHAVIOR_IDS",
    "FEEDBACK_TYPES",
    "BENCHMARK_BEHAVIOR_IDS",
    "BehaviorCatalog",
    "BehaviorRow",
    "CatalogEntry",
    "ExperimentReport",
    "FeedbackReport",
    "PairedReport",
    "SlotResult",
    "UsageMatrixReport",
    "behavior_catalog",
    "catalog_entry",
    "feedback_utterance",
    "record_transcripts",
    "run_ablation_suite",
    "run_behavior_suite",
    "run_composability_suite",
    "run_feedback_suite",
    "structural_checks",
    "benchmark_catalog",
]
