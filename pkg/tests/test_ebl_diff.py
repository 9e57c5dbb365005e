from hypothesis import given, settings
from hypothesis import strategies as st

from genem import ebl
from strategies import program_sources


def entry_body(source):
    program = ebl.parse(source)
    return program, program.skills[-1].body


BASE = '''skill seq() {
    """Base sequence."""
    head_pan(angle_deg=20deg)
    head_tilt(angle_deg=10deg)
    light_set(color=#00FF00)
}
'''


def test_identical_programs_diff_empty():
    a = ebl.parse(BASE)
    b = ebl.parse(BASE)
    assert ebl.ast_diff(a, b) == []


def test_inserted_call_before_anchor():
    after = '''skill seq() {
    """Base sequence."""
    head_pan(angle_deg=20deg)
    play_sound(name="chime")
    head_tilt(angle_deg=10deg)
    light_set(color=#00FF00)
}
'''
    ops = ebl.ast_diff(ebl.parse(BASE), ebl.parse(after))
    assert [op.kind for op in ops] == ["InsertedCall"]
    op = ops[0]
    assert op.index == 1
    assert "head_tilt" in op.before


def test_removed_call():
    after = '''skill seq() {
    """Base sequence."""
    head_pan(angle_deg=20deg)
    light_set(color=#00FF00)
}
'''
    ops = ebl.ast_diff(ebl.parse(BASE), ebl.parse(after))
    assert [op.kind for op in ops] == ["RemovedCall"]
    assert ops[0].index == 1


def test_swapped_adjacent_calls():
    after = '''skill seq() {
    """Base sequence."""
    head_tilt(angle_deg=10deg)
    head_pan(angle_deg=20deg)
    light_set(color=#00FF00)
}
'''
    ops = ebl.ast_diff(ebl.parse(BASE), ebl.parse(after))
    assert [op.kind for op in ops] == ["SwappedOrder"]
    assert (ops[0].i, ops[0].j) == (0, 1)


def test_swapped_distant_calls():
    after = '''skill seq() {
    """Base sequence."""
    light_set(color=#00FF00)
    head_tilt(angle_deg=10deg)
    head_pan(angle_deg=20deg)
}
'''
    ops = ebl.ast_diff(ebl.parse(BASE), ebl.parse(after))
    assert [op.kind for op in ops] == ["SwappedOrder"]


def test_wrapped_in_repeat():
    after = '''skill seq() {
    """Base sequence."""
    head_pan(angle_deg=20deg)
    repeat 3 {
        head_tilt(angle_deg=10deg)
    }
    light_set(color=#00FF00)
}
'''
    ops = ebl.ast_diff(ebl.parse(BASE), ebl.parse(after))
    assert [op.kind for op in ops] == ["WrappedInRepeat"]
    op = ops[0]
    assert (op.start, op.end, op.count) == (1, 2, 3)


def test_whole_body_wrapped():
    after = '''skill seq() {
    """Base sequence."""
    repeat 2 {
        head_pan(angle_deg=20deg)
        head_tilt(angle_deg=10deg)
        light_set(color=#00FF00)
    }
}
'''
    ops = ebl.ast_diff(ebl.parse(BASE), ebl.parse(after))
    assert [op.kind for op in ops] == ["WrappedInRepeat"]


def test_retargeted_call():
    after = '''skill seq() {
    """Base sequence."""
    head_pan(angle_deg=20deg)
    head_tilt(angle_deg=10deg)
    play_sound(name="chime")
}
'''
    ops = ebl.ast_diff(ebl.parse(BASE), ebl.parse(after))
    assert [op.kind for op in ops] == ["RetargetedCall"]
    assert ops[0].index == 2


def test_same_target_arg_change_is_not_retarget():
    after = BASE.replace("angle_deg=10deg", "angle_deg=15deg")
    ops = ebl.ast_diff(ebl.parse(BASE), ebl.parse(after))
    kinds = [op.kind for op in ops]
    assert kinds == ["RemovedCall", "InsertedCall"]


def _apply_and_compare(before_src, after_src):
    before, bb = entry_body(before_src)
    after, ab = entry_body(after_src)
    ops = ebl.ast_diff(before, after)
    assert ebl.apply_diff(bb, ops) == ab
    return ops


def test_apply_reproduces_after_for_all_named_cases():
    cases = [
        BASE,
        BASE.replace("head_pan(angle_deg=20deg)\n    ", ""),
        BASE.replace("light_set(color=#00FF00)", 'play_sound(name="x")'),
    ]
    for after in cases:
        _apply_and_compare(BASE, after)


def test_diff_is_deterministic():
    after = BASE.replace("head_tilt(angle_deg=10deg)", "wait 1.0s\n    head_tilt(angle_deg=10deg)")
    a = ebl.ast_diff(ebl.parse(BASE), ebl.parse(after))
    b = ebl.ast_diff(ebl.parse(BASE), ebl.parse(after))
    assert [op.to_dict() for op in a] == [op.to_dict() for op in b]


@settings(max_examples=60, deadline=None)
@given(program_sources(max_statements=4), program_sources(max_statements=4))
def test_apply_reproduces_after_on_random_pairs(src_a, src_b):
    a, ba = entry_body(src_a)
    b, bb = entry_body(src_b)
    ops = ebl.diff_bodies(ba, bb)
    assert ebl.apply_diff(ba, ops) == bb


@given(st.data())
def test_counts_invariant_under_canonicalization(data):
    source = data.draw(program_sources())
    program = ebl.parse(source)
    names = ["head_pan", "head_tilt", "base_rotate"]
    before = ebl.extract_called_skills(program, names)
    after = ebl.extract_called_skills(ebl.parse(ebl.pretty_print(program)), names)
    assert before == after
