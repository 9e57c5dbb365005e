import json
from importlib import resources

from genem.harness import (
    FEEDBACK_TYPES,
    behavior_catalog,
    run_ablation_suite,
    run_behavior_suite,
    run_composability_suite,
    run_feedback_suite,
    structural_checks,
    benchmark_catalog,
)
from genem.harness.catalog import BENCHMARK_BEHAVIOR_IDS


def test_catalog_has_all_ten_behaviors():
    catalog = benchmark_catalog()
    assert catalog.behavior_ids() == BENCHMARK_BEHAVIOR_IDS
    assert len(catalog.behavior_ids()) == 10
    approach = catalog.entry("Approach")
    assert 'Come here. You cannot speak.' in approach.instruction_text
    assert "speech" in approach.modality_constraints


def test_behavior_suite_all_pass_under_replay(replay_gateway):
    report = run_behavior_suite(benchmark_catalog("mobile_v1"), 5, replay_gateway)
    assert report.n == 5
    for row in report.rows:
        assert row.success_count == 5, (row.behavior_id, row.to_dict())
        # taxonomy + successes account for every slot
        assert sum(row.taxonomy_counts().values()) + row.success_count == 5
    excuse = report.row("Excuse")
    assert excuse.structural_counts()["uses_person_distance"] == 5
    approach = report.row("Approach")
    assert approach.structural_counts()["standoff_distance"] == 5
    assert approach.structural_counts()["no_speech_events"] == 5


def test_behavior_suite_hash_stable_across_runs(replay_gateway):
    hashes = {
        run_behavior_suite(benchmark_catalog("mobile_v1"), 5, replay_gateway).report_hash()
        for _ in range(3)
    }
    assert len(hashes) == 1


def test_quadruped_programs_call_only_quadruped_primitives(replay_gateway, quadruped):
    from genem import ebl
    from genem.pipeline import Pipeline, sample_candidates
    from genem.templates import TemplateSet

    catalog = benchmark_catalog("quadruped_v1")
    pipeline = Pipeline(replay_gateway, TemplateSet.load_default(), quadruped, [])
    legal = set(quadruped.primitive_names())
    for behavior_id in catalog.behavior_ids():
        for result in sample_candidates(pipeline, catalog.instruction(behavior_id), 5):
            assert result.ok, (behavior_id, result.error_detail)
            program = result.program
            names = {s.name for s in program.ast.skills}
            for call in (
                c
                for skill in program.ast.skills
                for c in ebl.nodes.iter_calls(skill.body)
            ):
                if call.target not in names:
                    assert call.target in legal, (behavior_id, call.target)


def test_ablation_suite_matches_failure_pattern(replay_gateway):
    pair = run_ablation_suite(benchmark_catalog("mobile_v1"), 5, replay_gateway)
    modular, ablated = pair.modular, pair.ablated
    for row in modular.rows:
        assert row.success_count >= ablated.row(row.behavior_id).success_count

    follow = ablated.row("Follow")
    assert follow.success_count == 0
    assert follow.taxonomy_counts() == {"UndefinedFunction": 5}

    excuse = ablated.row("Excuse")
    assert excuse.success_count == 0
    # none of the one-shot excuse programs consult the person's distance
    for slot in excuse.slots:
        assert slot.structural.get("uses_person_distance") is False

    # one-shot output skips docstrings; the report records the warnings
    nod = ablated.row("Nod")
    assert nod.success_count == 5
    for slot in nod.slots:
        assert "MissingDocstring" in slot.warnings


def test_ablation_report_deterministic(replay_gateway):
    a = run_ablation_suite(benchmark_catalog("mobile_v1"), 5, replay_gateway)
    b = run_ablation_suite(benchmark_catalog("mobile_v1"), 5, replay_gateway)
    assert a.report_hash() == b.report_hash()


def test_composability_matrix_matches_expected(replay_gateway):
    report = run_composability_suite(5, replay_gateway)
    expected = json.loads(
        (resources.files("genem") / "data" / "expected" / "usage_matrix.json").read_text()
    )
    assert report.n == expected["n"]
    assert list(report.seed_skills) == expected["seed_skills"]
    got = {
        target: {k: v for k, v in cells.items()}
        for target, cells in report.matrix.items()
    }
    assert got == expected["matrix"]
    assert report.failures == {}


def test_withheld_skills_stay_dashes(replay_gateway):
    report = run_composability_suite(5, replay_gateway)
    assert report.matrix["Acknowledge Walk"]["shake_head"] is None
    assert report.matrix["Confusion"]["eye_contact"] is None


def test_feedback_suite_all_cells_verify(replay_gateway):
    report = run_feedback_suite(replay_gateway)
    assert len(report.cells) == 12
    for cell in report.cells:
        assert cell.status == "success", cell.to_dict()
    assert report.cell("Excuse", "swap").edit_kinds == ["SwappedOrder"]
    assert report.cell("Approach", "loop").edit_kinds == ["WrappedInRepeat"]
    assert report.cell("Acknowledge Stop", "insert").edit_kinds == ["InsertedCall"]
    assert report.cell("Excuse", "remove").edit_kinds == ["RetargetedCall"]
    routes = {cell.route for cell in report.cells}
    assert routes == {"BehaviorAndCode", "CodeOnly"}


def test_feedback_suite_idempotent(replay_gateway):
    a = run_feedback_suite(replay_gateway)
    b = run_feedback_suite(replay_gateway)
    assert a.report_hash() == b.report_hash()


def test_remove_capability_regression_recorded_as_failure(replay_gateway):
    """A remove round that swaps in an undefined call lands as a failed cell."""
    from genem.authoring import FEEDBACK_CASES, ScriptedResponder
    from genem.gateway import MODE_PASSTHROUGH, Gateway, ScriptedBackend

    broken_case = FEEDBACK_CASES[("Approach", "remove")]
    bad_program = broken_case.after_program.replace(
        'play_sound(name="chirp")', "sound_off_signal()"
    )
    inner = ScriptedResponder()

    def respond(request):
        if request.stage_tag == "CodeGen":
            from genem.authoring import parse_user_components

            components = parse_user_components(request.messages[1][1])
            if components.get("FEEDBACK RESPONSE") == broken_case.change_summary:
                return f"REASONING: swap\nANSWER:\n```ebl\n{bad_program}```"
        return inner(request)

    gateway = Gateway(MODE_PASSTHROUGH, ScriptedBackend(respond))
    report = run_feedback_suite(gateway, behavior_ids=("Approach",))
    cell = report.cell("Approach", "remove")
    assert cell.status == "failure"
    assert cell.detail == "UndefinedFunction"
    for feedback_type in ("insert", "swap", "loop"):
        assert report.cell("Approach", feedback_type).status == "success"


def test_structural_checks_pure_functions():
    checks = structural_checks("Excuse")
    assert [c.name for c in checks] == ["uses_person_distance"]
    assert structural_checks("Nod") == ()


def test_record_transcripts_captures_replayable_entries(tmp_path):
    from genem.authoring import ScriptedResponder
    from genem.gateway import MODE_RECORD, Gateway, ScriptedBackend, Transcript
    from genem.harness import record_transcripts

    recorder = Gateway(MODE_RECORD, ScriptedBackend(ScriptedResponder()))
    record_transcripts(recorder, ("feedback",))
    path = tmp_path / "recorded.json"
    recorder.transcript.save(path)

    replayed = run_feedback_suite(Gateway.replay(Transcript.load(path)))
    assert all(cell.status == "success" for cell in replayed.cells)


def test_live_mode_label_recorded(replay_gateway):
    report = run_behavior_suite(
        benchmark_catalog("mobile_v1"), 1, replay_gateway, backend_label="replay:custom"
    )
    assert report.backend == "replay:custom"
    assert report.to_dict()["backend"] == "replay:custom"
