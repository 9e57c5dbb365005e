"""Authored completion banks and the transcript builder.

Live model output is not reproducible, so every replayable experiment in this
repo runs against authored stage responses. The bank below maps an incoming
request (stage, instruction, embodiment, sample variant, feedback text) to a
deterministic response; running the real pipeline against it in Record mode
produces the shipped transcripts, which then replay without this module.

Ablation responses deliberately embody the classic failure modes (calls to
undefined functions, wrong argument types, missing docstrings) on the rows
where the one-shot baseline is expected to fail.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .gateway import CompletionRequest

COMPONENT_LABELS = (
    "INSTRUCTION",
    "HUMAN EXPRESSIVE MOTION",
    "PREVIOUS PROCEDURE",
    "PREVIOUS CODE",
    "FEEDBACK RESPONSE",
    "PROCEDURE",
    "CODE",
    "USER FEEDBACK",
)


def parse_user_components(text: str) -> dict[str, str]:
    """Invert the pipeline's user-message layout back into labeled blocks."""
    sections: dict[str, str] = {}
    current: str | None = None
    buffer: list[str] = []
    for line in text.splitlines():
        stripped = line.rstrip()
        if stripped[:-1] in COMPONENT_LABELS and stripped.endswith(":"):
            if current is not None:
                sections[current] = "\n".join(buffer).strip()
            current = stripped[:-1]
            buffer = []
        else:
            buffer.append(line)
    if current is not None:
        sections[current] = "\n".join(buffer).strip()
    return sections


def _offset(v: int, step: int = 2) -> int:
    return (0, step, 2 * step, -step, -2 * step)[v % 5]


def _cycles(v: int) -> int:
    return (3, 2, 4, 3, 2)[v % 5]


# --------------------------------------------------------------------- stage 1

STAGE1: dict[str, tuple[str, str]] = {
    "Nod": (
        "A nod is a universal sign of acknowledgement or agreement. A person "
        "nods by tipping the head down and back up in a small, brief motion.",
        "Tilt the head downward slightly and bring it back up, once or twice, "
        "in a smooth short motion.",
    ),
    "Shake": (
        "Shaking the head signals disagreement or refusal. The motion is a "
        "quick side-to-side turn of the head, repeated once or twice.",
        "Turn the head side to side a couple of times, keeping the motion quick "
        "and even.",
    ),
    "Wake": (
        "Waking up involves slow stretching and reorienting: lifting the head, "
        "blinking, and looking around while the body becomes alert.",
        "Lift the head slowly, stretch, and look around while gradually "
        "becoming alert.",
    ),
    "Excuse": (
        "The polite way to get past someone blocking the way is to get their "
        "attention, verbally ask to pass, and move through once they notice.",
        "Make eye contact, say \"excuse me\", and slip past once the person "
        "makes room.",
    ),
    "Recoverable": (
        "Showing a recoverable mistake means briefly displaying embarrassment "
        "or regret, then visibly composing oneself and continuing.",
        "Look away briefly in embarrassment, then straighten up and carry on "
        "with a reassuring smile.",
    ),
    "Unrecoverable": (
        "An unrecoverable mistake calls for a clear display of defeat: the "
        "posture collapses and the person stays still rather than continuing.",
        "Hang the head low, slump, and stay still to signal the mistake cannot "
        "be undone.",
    ),
    "Acknowledge": (
        "The person is passing by and it's polite to acknowledge their "
        "presence. Since I cannot speak, I need to use non-verbal "
        "communication. A nod or a smile is a universal sign of "
        "acknowledgement.",
        "Make eye contact with the person. Smile or nod to acknowledge their "
        "presence.",
    ),
    "Follow": (
        "Following someone means keeping them in view and walking behind them "
        "at a respectful distance, adjusting pace to match theirs.",
        "Keep watching the person and walk behind them at a comfortable "
        "distance.",
    ),
    "Approach": (
        "The person beckoned me over, and I cannot speak, so I should show "
        "that I understood non-verbally and then come over without crowding "
        "them.",
        "Nod to show the request was understood, then walk over and stop at a "
        "comfortable distance.",
    ),
    "Attention": (
        "Paying attention is shown through orientation and backchanneling: "
        "facing the speaker, holding eye contact, and nodding along.",
        "Face the speaker, keep eye contact, and nod along periodically while "
        "they talk.",
    ),
    "Acknowledge Stop": (
        "Someone stopping in front of me expects to be noticed; a look and a "
        "small greeting acknowledges them.",
        "Look at the person, smile, and give a small nod of greeting.",
    ),
    "Acknowledge Walk": (
        "The person is passing by and it's polite to acknowledge their "
        "presence. Since I cannot speak, I need to use non-verbal "
        "communication. A nod or a smile is a universal sign of "
        "acknowledgement.",
        "Make eye contact with the person. Smile or nod to acknowledge their "
        "presence.",
    ),
    "Confusion": (
        "Confusion is commonly shown by hesitating, tilting or shaking the "
        "head, and glancing around as if searching for an explanation.",
        "Tilt the head, glance around uncertainly, and shake the head "
        "slightly.",
    ),
    "Wave": (
        "Waving back at a passerby is a friendly reciprocal gesture made with "
        "a raised hand.",
        "Raise a hand and give the passerby a short friendly wave.",
    ),
}

# --------------------------------------------------------------------- stage 2

STAGE2_MOBILE: dict[str, tuple[str, ...]] = {
    "Nod": (
        "Tilt the head down by a small angle.",
        "Return the head to level.",
        "Repeat the tilt down and return once more.",
    ),
    "Shake": (
        "Pan the head to one side.",
        "Pan the head to the opposite side.",
        "Repeat the side-to-side pan, then recenter the head.",
    ),
    "Wake": (
        "Tilt the head down as if asleep, then lift it.",
        "Sweep the head slowly from side to side.",
        "Turn the light strip on in a warm color.",
    ),
    "Excuse": (
        "Turn the light strip amber to get attention.",
        "If the person is within two meters, politely say \"Excuse me\" and pause.",
        "Advance slowly forward through the opened gap.",
    ),
    "Recoverable": (
        "Rotate away from the scene to show embarrassment.",
        "Flash the light strip red to signal the mistake.",
        "Rotate back to the original heading.",
        "Set the light strip green to signal recovery.",
    ),
    "Unrecoverable": (
        "Droop the head downward.",
        "Pulse the light strip red.",
        "Hold still to signal the robot cannot continue.",
    ),
    "Acknowledge": (
        "Use the head's pan and tilt capabilities to face the person who is walking by.",
        "Give a single small nod with the head tilt.",
        "Use the light strip to display a pre-programmed pattern that mimics a smile or nod.",
    ),
    "Follow": (
        "Pan the head to track the person when they are visible.",
        "Drive to stay behind the person's path.",
        "Recenter the head when done.",
    ),
    "Approach": (
        "Nod once with the head tilt to show the request was understood.",
        "Drive toward the person and stop at a polite distance.",
        "Set the light strip green to show readiness.",
    ),
    "Attention": (
        "Set the light strip to a calm blue.",
        "Nod along periodically while the person talks.",
        "Turn the light strip off when done.",
    ),
    "Acknowledge Stop": (
        "Face the person who stopped, using the head pan.",
        "Set the light strip green as a greeting.",
        "Say a short hello.",
    ),
    "Wave": (
        "Pan the head toward the passerby.",
        "Sweep the head side to side like a wave.",
        "Blink the light strip in a friendly color.",
    ),
}

STAGE2_QUADRUPED: dict[str, tuple[str, ...]] = {
    "Nod": (
        "Dip the nose down by pitching the torso.",
        "Return the torso to level.",
        "Repeat the dip and return once more.",
    ),
    "Shake": (
        "Yaw the torso to one side.",
        "Yaw the torso to the opposite side.",
        "Repeat the swing, then recenter.",
    ),
    "Wake": (
        "Settle low as if resting, then rise to standing.",
        "Bow forward briefly like a stretch.",
        "Turn the light strip on in a warm color.",
    ),
    "Excuse": (
        "If the person is within two meters, flash the light strip amber and dip the nose politely.",
        "Advance slowly forward through the opened gap.",
    ),
    "Recoverable": (
        "Rotate away from the scene to show regret.",
        "Lower the body height.",
        "Flash the light strip red.",
        "Rotate back and rise to full height.",
        "Set the light strip green to signal recovery.",
    ),
    "Unrecoverable": (
        "Lower the body close to the ground.",
        "Pulse the light strip red briefly.",
        "Bow forward and hold the pose.",
    ),
    "Acknowledge": (
        "Yaw the torso toward the person walking by.",
        "Dip the nose in a small nod.",
        "Use the light strip to display a pattern that mimics a smile or nod.",
    ),
    "Follow": (
        "Yaw the torso to track the person, then recenter.",
        "Walk to stay behind the person's path.",
    ),
    "Approach": (
        "Dip the nose once to show the request was understood.",
        "Walk toward the person and stop at a polite distance.",
        "Set the light strip green to show readiness.",
    ),
    "Attention": (
        "Set the light strip to a calm blue.",
        "Dip the nose periodically while the person talks.",
        "Turn the light strip off when done.",
    ),
    "Acknowledge Walk": (
        "Make eye contact using the learned eye contact skill.",
        "Nod using the learned nod skill.",
        "Set the light strip to a friendly green.",
    ),
    "Confusion": (
        "Shake the nose side to side using the learned shake skill.",
        "Blink the light strip in yellow.",
        "Glance around as if searching.",
    ),
}

# --------------------------------------------------------------------- stage 3

ProgramBuilder = Callable[[int], str]


def _nod_mobile(v: int) -> str:
    angle = 20 + _offset(v)
    return f'''skill nod(angle_deg={angle}deg) {{
    """Nod the head twice to acknowledge."""
    repeat 2 {{
        head_tilt(angle_deg=angle_deg)
        head_tilt(angle_deg=0deg)
    }}
}}
'''


def _shake_mobile(v: int) -> str:
    angle = 25 + _offset(v)
    return f'''skill shake(angle_deg={angle}deg) {{
    """Shake the head side to side to signal no."""
    repeat 2 {{
        head_pan(angle_deg=angle_deg)
        head_pan(angle_deg=-{angle}deg)
    }}
    head_pan(angle_deg=0deg)
}}
'''


def _wake_mobile(v: int) -> str:
    sweep = 35 + _offset(v)
    return f'''skill wake_up() {{
    """Stir awake: lift the head, look around, and light up warmly."""
    head_tilt(angle_deg=25deg)
    wait 0.5s
    head_tilt(angle_deg=-10deg)
    stretch_gaze()
    light_set(color=#FFD27F)
}}

skill stretch_gaze() {{
    """Sweep the head slowly from side to side."""
    head_pan(angle_deg={sweep}deg)
    head_pan(angle_deg=-{sweep}deg)
    head_pan(angle_deg=0deg)
}}
'''


def _excuse_mobile(v: int) -> str:
    reach = (2.0, 1.8, 2.2, 2.0, 1.9)[v % 5]
    advance = (0.5, 0.4, 0.6, 0.5, 0.4)[v % 5]
    return f'''skill excuse_me() {{
    """Politely ask a person blocking the way to let the robot pass."""
    light_set(color=#FFBF00)
    request_passage()
    base_translate(distance_m={advance}m)
}}

skill request_passage() {{
    """Speak up when the person is close enough to block the path."""
    if person_distance_lt(x_m={reach}m) {{
        say(text="Excuse me")
        wait 1.0s
    }}
}}
'''


def _recoverable_mobile(v: int) -> str:
    turn = 150 + _offset(v, 10)
    return f'''skill recover_mistake() {{
    """Show regret for a slip, then recover and signal all clear."""
    base_rotate(angle_deg={turn}deg)
    light_pattern(name="flash", color=#FF0000, cycles={_cycles(v)})
    base_rotate(angle_deg=-{turn}deg)
    light_set(color=#00FF00)
}}
'''


def _unrecoverable_mobile(v: int) -> str:
    droop = 35 + _offset(v)
    return f'''skill freeze_after_mistake() {{
    """Droop and hold still after an unrecoverable failure."""
    head_tilt(angle_deg={droop}deg)
    light_pattern(name="pulse", color=#FF0000, cycles={_cycles(v)})
    wait 2.0s
}}
'''


def _acknowledge_mobile(v: int) -> str:
    pan = 40 + _offset(v)
    return f'''skill acknowledge_passerby() {{
    """Silently acknowledge a person passing by."""
    face_walker()
    nod_once()
    light_pattern(name="blink", color=#00FF88, cycles=2)
}}

skill face_walker() {{
    """Turn the head toward the passerby when visible."""
    if person_visible() {{
        head_pan(angle_deg={pan}deg)
    }}
}}

skill nod_once() {{
    """Single small nod."""
    head_tilt(angle_deg=15deg)
    head_tilt(angle_deg=0deg)
}}
'''


def _follow_mobile(v: int) -> str:
    pan = 45 + _offset(v)
    return f'''skill follow_person() {{
    """Track the passerby with the head and trail behind them."""
    if person_visible() {{
        head_pan(angle_deg={pan}deg)
    }}
    navigate_to(x_m=2.0m, y_m=2.0m)
    navigate_to(x_m=2.0m, y_m=-1.0m)
    head_pan(angle_deg=0deg)
}}
'''


def _approach_mobile(v: int) -> str:
    tilt = 18 + _offset(v)
    return f'''skill approach_person() {{
    """Come over when beckoned and stop at a polite distance."""
    nod_greeting()
    navigate_to(x_m=1.2m, y_m=0m)
    light_set(color=#00FF00)
}}

skill nod_greeting() {{
    """Dip the head once to show the request was understood."""
    head_tilt(angle_deg={tilt}deg)
    head_tilt(angle_deg=0deg)
}}
'''


def _attention_mobile(v: int) -> str:
    tilt = 12 + _offset(v)
    return f'''skill pay_attention() {{
    """Active listening: face the speaker, nod along, glow softly."""
    light_set(color=#4060FF)
    repeat 3 {{
        listen_nod()
        wait 0.8s
    }}
    light_off()
}}

skill listen_nod() {{
    """Small nod showing the robot is following along."""
    head_tilt(angle_deg={tilt}deg)
    head_tilt(angle_deg=0deg)
}}
'''


def _wave_mobile(v: int) -> str:
    pan = 30 + _offset(v)
    return f'''skill wave_back() {{
    """Sweep the head like a wave at the passerby."""
    head_pan(angle_deg={pan}deg)
    head_pan(angle_deg=-{pan}deg)
    head_pan(angle_deg=0deg)
    light_pattern(name="blink", color=#00AAFF, cycles=2)
}}
'''


def _acknowledge_stop_mobile(v: int) -> str:
    pan = 10 + _offset(v)
    return f'''skill acknowledge_stop() {{
    """Greet a person who stops by the robot."""
    face_person()
    light_set(color=#00FF00)
    say(text="Hello")
}}

skill face_person() {{
    """Turn the head toward the person who stopped."""
    if person_visible() {{
        head_pan(angle_deg={pan}deg)
    }}
}}
'''


PROGRAMS_MOBILE: dict[str, ProgramBuilder] = {
    "Nod": _nod_mobile,
    "Shake": _shake_mobile,
    "Wake": _wake_mobile,
    "Excuse": _excuse_mobile,
    "Recoverable": _recoverable_mobile,
    "Unrecoverable": _unrecoverable_mobile,
    "Acknowledge": _acknowledge_mobile,
    "Follow": _follow_mobile,
    "Approach": _approach_mobile,
    "Attention": _attention_mobile,
    "Acknowledge Stop": _acknowledge_stop_mobile,
    "Wave": _wave_mobile,
}


def _nod_quadruped(v: int) -> str:
    pitch = 15 + _offset(v)
    return f'''skill nod(pitch_deg={pitch}deg) {{
    """Dip the nose twice to acknowledge."""
    repeat 2 {{
        body_pose(pitch_deg=pitch_deg)
        body_pose(pitch_deg=0deg)
    }}
}}
'''


def _shake_quadruped(v: int) -> str:
    yaw = 20 + _offset(v)
    return f'''skill shake() {{
    """Swing the nose side to side to signal no."""
    repeat 2 {{
        body_pose(yaw_deg={yaw}deg)
        body_pose(yaw_deg=-{yaw}deg)
    }}
    body_pose(yaw_deg=0deg)
}}
'''


def _wake_quadruped(v: int) -> str:
    pitch = 20 + _offset(v)
    return f'''skill wake_up() {{
    """Rise from rest, stretch, and light up warmly."""
    sit()
    wait 0.5s
    stand()
    stretch()
    light_set(color=#FFD27F)
}}

skill stretch() {{
    """Bow forward briefly like a waking stretch."""
    bow(pitch_deg={pitch}deg)
    stand()
}}
'''


def _excuse_quadruped(v: int) -> str:
    reach = (2.0, 1.8, 2.2, 2.0, 1.9)[v % 5]
    return f'''skill excuse_me() {{
    """Signal a blocking person and slip past once acknowledged."""
    signal_blocker()
    base_translate(distance_m=0.5m)
}}

skill signal_blocker() {{
    """Flash amber and dip the nose when someone blocks the path."""
    if person_distance_lt(x_m={reach}m) {{
        light_pattern(name="flash", color=#FFBF00, cycles={_cycles(v)})
        body_pose(pitch_deg=12deg)
        body_pose(pitch_deg=0deg)
    }}
}}
'''


def _recoverable_quadruped(v: int) -> str:
    turn = 150 + _offset(v, 10)
    return f'''skill recover_mistake() {{
    """Turn away in regret, crouch, flash red, then return and show green."""
    base_rotate(angle_deg={turn}deg)
    body_height(height_m=0.3m)
    light_pattern(name="flash", color=#FF0000, cycles={_cycles(v)})
    base_rotate(angle_deg=-{turn}deg)
    body_height(height_m=0.5m)
    light_set(color=#00FF00)
}}
'''


def _unrecoverable_quadruped(v: int) -> str:
    pitch = 30 + _offset(v)
    return f'''skill freeze_after_mistake() {{
    """Sink down, show red, and hold a deep bow."""
    body_height(height_m=0.25m)
    light_pattern(name="pulse", color=#FF0000, cycles={_cycles(v)})
    bow(pitch_deg={pitch}deg)
    wait 2.0s
}}
'''


def _acknowledge_quadruped(v: int) -> str:
    yaw = 30 + _offset(v)
    return f'''skill acknowledge_passerby() {{
    """Silently acknowledge a person passing by."""
    face_walker()
    nod_nose()
    light_pattern(name="blink", color=#00FF88, cycles=2)
}}

skill face_walker() {{
    """Turn the torso toward the passerby when visible."""
    if person_visible() {{
        body_pose(yaw_deg={yaw}deg)
    }}
}}

skill nod_nose() {{
    """Single small nose dip."""
    body_pose(pitch_deg=12deg)
    body_pose(pitch_deg=0deg)
}}
'''


def _follow_quadruped(v: int) -> str:
    yaw = 30 + _offset(v)
    return f'''skill follow_person() {{
    """Track the passerby and trail behind them."""
    if person_visible() {{
        body_pose(yaw_deg={yaw}deg)
    }}
    body_pose(yaw_deg=0deg)
    navigate_to(x_m=2.0m, y_m=2.0m)
    navigate_to(x_m=2.0m, y_m=-1.0m)
}}
'''


def _approach_quadruped(v: int) -> str:
    pitch = 15 + _offset(v)
    return f'''skill approach_person() {{
    """Come over when beckoned and stop at a polite distance."""
    nod_greeting()
    navigate_to(x_m=1.2m, y_m=0m)
    light_set(color=#00FF00)
}}

skill nod_greeting() {{
    """Nose dip showing the request was understood."""
    body_pose(pitch_deg={pitch}deg)
    body_pose(pitch_deg=0deg)
}}
'''


def _attention_quadruped(v: int) -> str:
    pitch = 10 + _offset(v)
    return f'''skill pay_attention() {{
    """Active listening: face the speaker, nod along, glow softly."""
    light_set(color=#4060FF)
    repeat 3 {{
        body_pose(pitch_deg={pitch}deg)
        body_pose(pitch_deg=0deg)
        wait 0.8s
    }}
    light_off()
}}
'''


PROGRAMS_QUADRUPED: dict[str, ProgramBuilder] = {
    "Nod": _nod_quadruped,
    "Shake": _shake_quadruped,
    "Wake": _wake_quadruped,
    "Excuse": _excuse_quadruped,
    "Recoverable": _recoverable_quadruped,
    "Unrecoverable": _unrecoverable_quadruped,
    "Acknowledge": _acknowledge_quadruped,
    "Follow": _follow_quadruped,
    "Approach": _approach_quadruped,
    "Attention": _attention_quadruped,
}

# Composability targets run on the quadruped with seed skills in the prompt.


def _compose_acknowledge_walk(v: int) -> str:
    yaw = 15 + _offset(v, 1)
    pitch = 14 + _offset(v, 1)
    return f'''skill acknowledge_walk() {{
    """Acknowledge a passerby using the learned gestures."""
    eye_contact(yaw_deg={yaw}deg)
    nod_head(pitch_deg={pitch}deg)
    light_set(color=#00FF88)
}}
'''


def _compose_approach(v: int) -> str:
    blink = f'blink_lights(color=#00FF00, cycles={(2, 3, 2, 3, 2)[v % 5]})'
    if v == 4:
        # This sample leans on raw APIs instead of the learned eye contact.
        first = "body_pose(yaw_deg=15deg)\n    body_pose(yaw_deg=0deg)"
    else:
        first = f"eye_contact(yaw_deg={15 + _offset(v, 1)}deg)"
    return f'''skill approach_person() {{
    """Approach the beckoning person using learned signals."""
    {first}
    {blink}
    navigate_to(x_m=1.2m, y_m=0m)
}}
'''


def _compose_confusion(v: int) -> str:
    if v == 2:
        glance = "look_around()"
    else:
        # Search gesture written out with raw APIs instead of the library skill.
        glance = "body_pose(yaw_deg=25deg)\n    body_pose(yaw_deg=-25deg)\n    body_pose(yaw_deg=0deg)"
    if v == 4:
        blink = 'light_pattern(name="blink", color=#FFFF00, cycles=3)'
    else:
        blink = f'blink_lights(color=#FFFF00, cycles={_cycles(v)})'
    return f'''skill express_confusion() {{
    """Show confusion with shakes, lights, and searching glances."""
    shake_head()
    {blink}
    {glance}
}}
'''


COMPOSE_PROGRAMS: dict[str, ProgramBuilder] = {
    "Acknowledge Walk": _compose_acknowledge_walk,
    "Approach": _compose_approach,
    "Confusion": _compose_confusion,
}

def _compose_provided(target: str) -> tuple[str, ...]:
    from .harness.catalog import COMPOSE_PROVIDED_SKILLS

    return COMPOSE_PROVIDED_SKILLS[target]

# ------------------------------------------------------------------- ablation

# One-shot baseline output per (behavior, variant). Failing rows mirror the
# classic defects: undefined helper calls and wrong argument types. None of
# these carry docstrings, and several call positionally.


def _ablated(behavior: str, v: int) -> str:
    return ABLATED_MOBILE[behavior][v % 5]


ABLATED_MOBILE: dict[str, tuple[str, ...]] = {
    "Nod": tuple(
        f'''skill nod() {{
    repeat 2 {{
        head_tilt(angle_deg={18 + 2 * v}deg)
        head_tilt(angle_deg=0deg)
    }}
}}
'''
        for v in range(5)
    ),
    "Shake": tuple(
        f'''skill shake() {{
    repeat 2 {{
        head_pan({24 + 2 * v}deg)
        head_pan(-{24 + 2 * v}deg)
    }}
    head_pan(0deg)
}}
'''
        for v in range(5)
    ),
    "Wake": (
        'skill wake() {\n    head_tilt(angle_deg=-10deg)\n    light_set(color=#FFD27F)\n}\n',
        'skill wake() {\n    head_tilt(angle_deg=-12deg)\n    light_set(color=#FFE0A0)\n}\n',
        'skill wake() {\n    head_tilt(angle_deg=-8deg)\n    wait 1.0s\n    light_set(color=#FFD27F)\n}\n',
        'skill wake() {\n    head_tilt(angle_deg="up")\n    light_set(color=#FFD27F)\n}\n',
        'skill wake() {\n    head_tilt(angle_deg=-10deg)\n    light_set(color="warm white")\n}\n',
    ),
    "Excuse": (
        'skill excuse() {\n    say(text="Excuse me")\n    move_through()\n}\n',
        'skill excuse() {\n    politely_ask()\n    base_translate(distance_m=0.5m)\n}\n',
        'skill excuse() {\n    say(text="Excuse me")\n    push_past(speed=0.5)\n}\n',
        'skill excuse() {\n    say(text="Excuse me")\n    base_rotate(angle_deg="left")\n}\n',
        'skill excuse() {\n    say(text="Excuse me")\n    base_translate(distance_m="forward")\n}\n',
    ),
    "Recoverable": tuple(
        f'''skill recover() {{
    base_rotate(angle_deg={120 + 10 * v}deg)
    light_pattern(name="flash", color=#FF0000, cycles=2)
    base_rotate(angle_deg=-{120 + 10 * v}deg)
    light_set(color=#00FF00)
}}
'''
        for v in range(5)
    ),
    "Unrecoverable": tuple(
        f'''skill freeze() {{
    head_tilt(angle_deg={30 + 2 * v}deg)
    light_pattern(name="pulse", color=#FF0000, cycles=3)
    wait 2.0s
}}
'''
        for v in range(5)
    ),
    "Acknowledge": tuple(
        f'''skill acknowledge() {{
    head_pan(angle_deg={35 + 2 * v}deg)
    light_set(color=#00FF88)
    wait 1.0s
    light_off()
}}
'''
        for v in range(5)
    ),
    "Follow": (
        'skill follow() {\n    track_person()\n    navigate_to(x_m=2.0m, y_m=1.0m)\n}\n',
        'skill follow() {\n    follow_target(speed=0.5)\n}\n',
        'skill follow() {\n    keep_pace()\n    navigate_to(x_m=2.0m, y_m=0m)\n}\n',
        'skill follow() {\n    head_pan(angle_deg=30deg)\n    pursue(target="person")\n}\n',
        'skill follow() {\n    lock_on()\n    base_translate(distance_m=2.0m)\n}\n',
    ),
    "Approach": tuple(
        f'''skill approach() {{
    navigate_to(x_m={1.6 + 0.05 * v:.2f}m, y_m=0m)
    light_set(color=#00FF00)
}}
'''
        for v in range(5)
    ),
    "Attention": (
        'skill attend() {\n    head_pan(angle_deg=0deg)\n    light_set(color=#4060FF)\n    wait 2.0s\n    light_off()\n}\n',
        'skill attend() {\n    look_at_person()\n    light_set(color=#4060FF)\n}\n',
        'skill attend() {\n    focus_on(target="speaker")\n    light_set(color=#4060FF)\n}\n',
        'skill attend() {\n    head_pan(angle_deg="left")\n    light_set(color=#4060FF)\n}\n',
        'skill attend() {\n    head_pan(angle_deg=0deg)\n    light_set(color="blue")\n}\n',
    ),
}

# Expected ablated execution successes per behavior (out of 5).
ABLATED_EXPECTED_SUCCESS = {
    "Nod": 5,
    "Shake": 5,
    "Wake": 3,
    "Excuse": 0,
    "Recoverable": 5,
    "Unrecoverable": 5,
    "Acknowledge": 5,
    "Follow": 0,
    "Approach": 5,
    "Attention": 1,
}

# ------------------------------------------------------------- feedback rounds


@dataclass(frozen=True)
class FeedbackCase:
    behavior_id: str
    feedback_type: str
    utterance: str
    cot: str
    change_summary: str
    route: str
    after_program: str
    revised_steps: tuple[str, ...] | None = None  # BehaviorAndCode routes only


_EXCUSE_AFTER = {
    "insert": '''skill excuse_me() {
    """Politely ask a person blocking the way to let the robot pass."""
    head_pan(angle_deg=15deg)
    light_set(color=#FFBF00)
    request_passage()
    base_translate(distance_m=0.5m)
}

skill request_passage() {
    """Speak up when the person is close enough to block the path."""
    if person_distance_lt(x_m=2.0m) {
        say(text="Excuse me")
        wait 1.0s
    }
}
''',
    "swap": '''skill excuse_me() {
    """Politely ask a person blocking the way to let the robot pass."""
    request_passage()
    light_set(color=#FFBF00)
    base_translate(distance_m=0.5m)
}

skill request_passage() {
    """Speak up when the person is close enough to block the path."""
    if person_distance_lt(x_m=2.0m) {
        say(text="Excuse me")
        wait 1.0s
    }
}
''',
    "loop": '''skill excuse_me() {
    """Politely ask a person blocking the way to let the robot pass."""
    light_set(color=#FFBF00)
    repeat 2 {
        request_passage()
    }
    base_translate(distance_m=0.5m)
}

skill request_passage() {
    """Speak up when the person is close enough to block the path."""
    if person_distance_lt(x_m=2.0m) {
        say(text="Excuse me")
        wait 1.0s
    }
}
''',
    "remove": '''skill excuse_me() {
    """Politely ask a person blocking the way to let the robot pass."""
    play_sound(name="chime")
    request_passage()
    base_translate(distance_m=0.5m)
}

skill request_passage() {
    """Speak up when the person is close enough to block the path."""
    if person_distance_lt(x_m=2.0m) {
        say(text="Excuse me")
        wait 1.0s
    }
}
''',
}

_APPROACH_AFTER = {
    "insert": '''skill approach_person() {
    """Come over when beckoned and stop at a polite distance."""
    nod_greeting()
    light_pattern(name="blink", color=#00FF00, cycles=2)
    navigate_to(x_m=1.2m, y_m=0m)
    light_set(color=#00FF00)
}

skill nod_greeting() {
    """Dip the head once to show the request was understood."""
    head_tilt(angle_deg=18deg)
    head_tilt(angle_deg=0deg)
}
''',
    "swap": '''skill approach_person() {
    """Come over when beckoned and stop at a polite distance."""
    nod_greeting()
    light_set(color=#00FF00)
    navigate_to(x_m=1.2m, y_m=0m)
}

skill nod_greeting() {
    """Dip the head once to show the request was understood."""
    head_tilt(angle_deg=18deg)
    head_tilt(angle_deg=0deg)
}
''',
    "loop": '''skill approach_person() {
    """Come over when beckoned and stop at a polite distance."""
    repeat 2 {
        nod_greeting()
    }
    navigate_to(x_m=1.2m, y_m=0m)
    light_set(color=#00FF00)
}

skill nod_greeting() {
    """Dip the head once to show the request was understood."""
    head_tilt(angle_deg=18deg)
    head_tilt(angle_deg=0deg)
}
''',
    "remove": '''skill approach_person() {
    """Come over when beckoned and stop at a polite distance."""
    nod_greeting()
    navigate_to(x_m=1.2m, y_m=0m)
    play_sound(name="chirp")
}

skill nod_greeting() {
    """Dip the head once to show the request was understood."""
    head_tilt(angle_deg=18deg)
    head_tilt(angle_deg=0deg)
}
''',
}

_ACK_STOP_AFTER = {
    "insert": '''skill acknowledge_stop() {
    """Greet a person who stops by the robot."""
    nod_once()
    face_person()
    light_set(color=#00FF00)
    say(text="Hello")
}

skill face_person() {
    """Turn the head toward the person who stopped."""
    if person_visible() {
        head_pan(angle_deg=10deg)
    }
}

skill nod_once() {
    """Small nod the moment the person is noticed."""
    head_tilt(angle_deg=15deg)
    head_tilt(angle_deg=0deg)
}
''',
    "swap": '''skill acknowledge_stop() {
    """Greet a person who stops by the robot."""
    face_person()
    say(text="Hello")
    light_set(color=#00FF00)
}

skill face_person() {
    """Turn the head toward the person who stopped."""
    if person_visible() {
        head_pan(angle_deg=10deg)
    }
}
''',
    "loop": '''skill acknowledge_stop() {
    """Greet a person who stops by the robot."""
    face_person()
    repeat 2 {
        light_set(color=#00FF00)
    }
    say(text="Hello")
}

skill face_person() {
    """Turn the head toward the person who stopped."""
    if person_visible() {
        head_pan(angle_deg=10deg)
    }
}
''',
    "remove": '''skill acknowledge_stop() {
    """Greet a person who stops by the robot."""
    face_person()
    light_set(color=#00FF00)
    play_sound(name="chime")
}

skill face_person() {
    """Turn the head toward the person who stopped."""
    if person_visible() {
        head_pan(angle_deg=10deg)
    }
}
''',
}

FEEDBACK_CASES: dict[tuple[str, str], FeedbackCase] = {}


def _add_feedback_case(case: FeedbackCase) -> None:
    FEEDBACK_CASES[(case.behavior_id, case.feedback_type)] = case


_add_feedback_case(FeedbackCase(
    "Excuse", "insert",
    "Look at the person before you say anything.",
    "The user wants a new action, looking at the person, to happen before the "
    "existing ones. The behavior's steps change, so the procedure must be "
    "regenerated before the code.",
    "[Change: What robot should do] Before turning on the light or speaking, "
    "the robot should first turn its head toward the person, then continue "
    "with the existing sequence.",
    "BehaviorAndCode",
    _EXCUSE_AFTER["insert"],
    (
        "Turn the head toward the person blocking the path.",
        "Turn the light strip amber to get attention.",
        "If the person is within two meters, politely say \"Excuse me\" and pause.",
        "Advance slowly forward through the opened gap.",
    ),
))
_add_feedback_case(FeedbackCase(
    "Excuse", "swap",
    "Ask them to excuse you before turning on the lights.",
    "The user wants the existing spoken request and the light signal "
    "exchanged in order; the actions themselves are unchanged, so only the "
    "code needs reordering.",
    "[Change: How the code works] Swap the order of the polite request and "
    "the amber light signal so the request comes first.",
    "CodeOnly",
    _EXCUSE_AFTER["swap"],
))
_add_feedback_case(FeedbackCase(
    "Excuse", "loop",
    "Repeat the polite request twice.",
    "The user wants the existing request action repeated; wrapping it in a "
    "loop is a code-level change.",
    "[Change: How the code works] Wrap the polite request in a loop so it "
    "runs twice before advancing.",
    "CodeOnly",
    _EXCUSE_AFTER["loop"],
))
_add_feedback_case(FeedbackCase(
    "Excuse", "remove",
    "You can no longer use the light strip.",
    "The light strip is no longer available, so the attention-getting action "
    "must be replaced with a different capability; the behavior itself "
    "changes.",
    "[Change: What robot should do] Replace the amber light signal with a "
    "short chime sound to get the person's attention, keeping the rest of "
    "the sequence.",
    "BehaviorAndCode",
    _EXCUSE_AFTER["remove"],
    (
        "Play a short chime to get attention.",
        "If the person is within two meters, politely say \"Excuse me\" and pause.",
        "Advance slowly forward through the opened gap.",
    ),
))

_add_feedback_case(FeedbackCase(
    "Approach", "insert",
    "Blink the lights before you start moving.",
    "A new action, blinking the lights, must be added ahead of the drive "
    "toward the person; the behavior's steps change.",
    "[Change: What robot should do] After nodding, blink the light strip, and "
    "only then start driving toward the person.",
    "BehaviorAndCode",
    _APPROACH_AFTER["insert"],
    (
        "Nod once with the head tilt to show the request was understood.",
        "Blink the light strip green.",
        "Drive toward the person and stop at a polite distance.",
        "Set the light strip green to show readiness.",
    ),
))
_add_feedback_case(FeedbackCase(
    "Approach", "swap",
    "Turn the light green before walking over, not after.",
    "The same two actions should run in the opposite order; a code-level "
    "reordering suffices.",
    "[Change: How the code works] Swap the drive and the green light so the "
    "light comes on before the robot moves.",
    "CodeOnly",
    _APPROACH_AFTER["swap"],
))
_add_feedback_case(FeedbackCase(
    "Approach", "loop",
    "Nod twice before approaching.",
    "The existing nod should repeat; wrapping it in a loop is enough.",
    "[Change: How the code works] Wrap the greeting nod in a loop so it runs "
    "twice before the approach.",
    "CodeOnly",
    _APPROACH_AFTER["loop"],
))
_add_feedback_case(FeedbackCase(
    "Approach", "remove",
    "The light strip is out of service.",
    "The readiness signal can no longer use the light strip and needs an "
    "alternative capability; the behavior changes.",
    "[Change: What robot should do] Replace the green readiness light with a "
    "short chirp sound after stopping near the person.",
    "BehaviorAndCode",
    _APPROACH_AFTER["remove"],
    (
        "Nod once with the head tilt to show the request was understood.",
        "Drive toward the person and stop at a polite distance.",
        "Play a short chirp to show readiness.",
    ),
))

_add_feedback_case(FeedbackCase(
    "Acknowledge Stop", "insert",
    "When you first see the person, nod at them.",
    "The feedback suggests that the robot's action of acknowledging the "
    "person was not correct. This implies that the robot should nod at the "
    "person when it first sees them.",
    "[Change: What robot should do] As soon as the robot sees the person, it "
    "should nod at them. After nodding, the robot can continue with the "
    "existing greeting sequence.",
    "BehaviorAndCode",
    _ACK_STOP_AFTER["insert"],
    (
        "Nod as soon as the person is noticed.",
        "Face the person who stopped, using the head pan.",
        "Set the light strip green as a greeting.",
        "Say a short hello.",
    ),
))
_add_feedback_case(FeedbackCase(
    "Acknowledge Stop", "swap",
    "Say hello before turning the light green.",
    "The greeting and the light are both already present; they just need to "
    "run in the opposite order.",
    "[Change: How the code works] Swap the spoken hello and the green light "
    "so the hello comes first.",
    "CodeOnly",
    _ACK_STOP_AFTER["swap"],
))
_add_feedback_case(FeedbackCase(
    "Acknowledge Stop", "loop",
    "Repeat the greeting light twice.",
    "The light action should repeat; a loop around the existing call is a "
    "code-level change.",
    "[Change: How the code works] Wrap the green greeting light in a loop so "
    "it shows twice.",
    "CodeOnly",
    _ACK_STOP_AFTER["loop"],
))
_add_feedback_case(FeedbackCase(
    "Acknowledge Stop", "remove",
    "Stop using the speech module.",
    "Speech is no longer allowed, so the spoken hello must be replaced with a "
    "different capability; the behavior changes.",
    "[Change: What robot should do] Replace the spoken hello with a short "
    "chime sound at the end of the greeting.",
    "BehaviorAndCode",
    _ACK_STOP_AFTER["remove"],
    (
        "Face the person who stopped, using the head pan.",
        "Set the light strip green as a greeting.",
        "Play a short chime as the greeting sound.",
    ),
))

# ----------------------------------------------------- ten-round nod session


@dataclass(frozen=True)
class NodRound:
    utterance: str
    cot: str
    change_summary: str
    route: str
    program: str
    revised_steps: tuple[str, ...] | None = None


def _nod_session_program(
    angle: int,
    times: int,
    pause_s: float | None,
    light: tuple[str, int] | None,
    trailing_level: bool,
) -> str:
    body = [
        f"    repeat {times} {{",
        "        head_tilt(angle_deg=angle_deg)",
        "        head_tilt(angle_deg=0deg)",
    ]
    if pause_s is not None:
        body.append(f"        wait {pause_s}s")
    body.append("    }")
    if light is not None:
        color, cycles = light
        body.append(f'    light_pattern(name="blink", color={color}, cycles={cycles})')
    if trailing_level:
        body.append("    head_tilt(angle_deg=0deg)")
    lines = [
        f"skill nod(angle_deg={angle}deg) {{",
        '    """Nod the head to acknowledge."""',
        *body,
        "}",
        "",
    ]
    return "\n".join(lines)


NOD_SESSION_ROUNDS: tuple[NodRound, ...] = (
    NodRound(
        "Make the nod deeper.",
        "A deeper nod means a larger tilt angle; the steps stay the same.",
        "[Change: How the code works] Increase the nod angle from 20 to 26 degrees.",
        "CodeOnly",
        _nod_session_program(26, 2, None, None, False),
    ),
    NodRound(
        "Nod three times instead of two.",
        "Only the repetition count changes.",
        "[Change: How the code works] Raise the nod repeat count from two to three.",
        "CodeOnly",
        _nod_session_program(26, 3, None, None, False),
    ),
    NodRound(
        "Pause briefly between each nod.",
        "A pause between nods is a new action in the behavior's steps, so the "
        "procedure must be updated first.",
        "[Change: What robot should do] After each nod cycle, the robot should "
        "hold still briefly before the next nod.",
        "BehaviorAndCode",
        _nod_session_program(26, 3, 0.5, None, False),
        (
            "Tilt the head down by a small angle.",
            "Return the head to level.",
            "Hold still briefly.",
            "Repeat the nod cycle twice more.",
        ),
    ),
    NodRound(
        "Make the nod a bit shallower.",
        "Only the tilt angle changes.",
        "[Change: How the code works] Reduce the nod angle from 26 to 20 degrees.",
        "CodeOnly",
        _nod_session_program(20, 3, 0.5, None, False),
    ),
    NodRound(
        "Blink a green light after nodding.",
        "A light signal is a new action appended to the behavior, so the "
        "procedure changes too.",
        "[Change: What robot should do] After the nods, the robot should blink "
        "its light strip green.",
        "BehaviorAndCode",
        _nod_session_program(20, 3, 0.5, ("#00FF00", 3), False),
        (
            "Tilt the head down by a small angle.",
            "Return the head to level.",
            "Hold still briefly.",
            "Repeat the nod cycle twice more.",
            "Blink the light strip green.",
        ),
    ),
    NodRound(
        "Blink the light twice only.",
        "Only the blink count changes.",
        "[Change: How the code works] Reduce the blink cycles from three to two.",
        "CodeOnly",
        _nod_session_program(20, 3, 0.5, ("#00FF00", 2), False),
    ),
    NodRound(
        "Pause a full second between nods.",
        "Only the pause duration changes.",
        "[Change: How the code works] Lengthen the pause between nods to one second.",
        "CodeOnly",
        _nod_session_program(20, 3, 1.0, ("#00FF00", 2), False),
    ),
    NodRound(
        "Nod just once.",
        "Only the repetition count changes.",
        "[Change: How the code works] Drop the repeat count to one.",
        "CodeOnly",
        _nod_session_program(20, 1, 1.0, ("#00FF00", 2), False),
    ),
    NodRound(
        "Use a blue light instead of green.",
        "Only the blink color changes.",
        "[Change: How the code works] Switch the blink color to blue.",
        "CodeOnly",
        _nod_session_program(20, 1, 1.0, ("#0000FF", 2), False),
    ),
    NodRound(
        "Finish with the head level.",
        "An explicit final leveling of the head is a small code addition.",
        "[Change: How the code works] Append a final head tilt to zero degrees.",
        "CodeOnly",
        _nod_session_program(20, 1, 1.0, ("#0000FF", 2), True),
    ),
)

# Saved-skill flow: a later session composes the user-saved nod.

SKILL_SAVE_PROGRAM = '''skill acknowledge_passerby() {
    """Silently acknowledge a person walking by, reusing the saved nod."""
    face_walker()
    nod_head(angle_deg=15deg)
    light_pattern(name="blink", color=#00FF88, cycles=2)
}

skill face_walker() {
    """Turn the head toward the passerby when visible."""
    if person_visible() {
        head_pan(angle_deg=40deg)
    }
}
'''

SKILL_SAVE_STEPS = (
    "Use the head's pan capability to face the person walking by.",
    "Greet them with the learned nod skill.",
    "Blink the light strip in a friendly pattern.",
)

# Sampling-fault bank: variant 2 emits an invalid program and an equally
# invalid repair, so that slot lands as a recorded failure.

WAVE_DEFECTIVE = '''skill wave_back() {
    """Wave at the passerby."""
    raise_hand()
    head_pan(angle_deg=30deg)
}
'''

WAVE_DEFECTIVE_REPAIR = '''skill wave_back() {
    """Wave at the passerby."""
    raise_hand_high()
    head_pan(angle_deg=30deg)
}
'''

# ------------------------------------------------------------------ responder


def _stage_response(cot: str, answer: str) -> str:
    return f"REASONING: {cot}\nANSWER: {answer}"


def _steps_answer(steps) -> str:
    return "\n" + "\n".join(f"{i}) {s}" for i, s in enumerate(steps, start=1))


def _code_answer(source: str) -> str:
    return f"\n```ebl\n{source}```"


class ScriptedResponder:
    """Maps pipeline requests onto the authored banks."""

    def __init__(self):
        self._by_utterance: dict[str, object] = {}
        for case in FEEDBACK_CASES.values():
            assert case.utterance not in self._by_utterance
            self._by_utterance[case.utterance] = case
        for rnd in NOD_SESSION_ROUNDS:
            assert rnd.utterance not in self._by_utterance
            self._by_utterance[rnd.utterance] = rnd
        self._by_summary: dict[str, object] = {}
        for case in FEEDBACK_CASES.values():
            self._by_summary[case.change_summary] = case
        for rnd in NOD_SESSION_ROUNDS:
            self._by_summary[rnd.change_summary] = rnd
        from .harness.catalog import _ENTRIES

        self._by_instruction: dict[str, list[str]] = {}
        for entry in _ENTRIES.values():
            self._by_instruction.setdefault(entry.instruction_text, []).append(
                entry.behavior_id
            )

    # -- context extraction

    def _embodiment(self, request: CompletionRequest) -> str:
        system = request.messages[0][1]
        return "quadruped_v1" if "The quadruped_v1 robot" in system else "mobile_v1"

    def _has_library(self, request: CompletionRequest) -> bool:
        return "Learned skills available on this robot:" in request.messages[0][1]

    def _behavior(self, request: CompletionRequest, components: dict[str, str]) -> str:
        candidates = self._by_instruction.get(components.get("INSTRUCTION", ""))
        if not candidates:
            raise KeyError(
                f"no authored behavior for instruction {components.get('INSTRUCTION')!r}"
            )
        if len(candidates) == 1:
            return candidates[0]
        # Acknowledge vs Acknowledge Walk share an instruction; the learned
        # skill block in the system prompt marks the composability run.
        if self._has_library(request) and self._embodiment(request) == "quadruped_v1":
            for candidate in candidates:
                if candidate in COMPOSE_PROGRAMS:
                    return candidate
        return candidates[0]

    # -- dispatch

    def __call__(self, request: CompletionRequest) -> str:
        components = parse_user_components(request.messages[1][1])
        stage = request.stage_tag
        if stage == "InstructionFollowing":
            cot, answer = STAGE1[self._behavior(request, components)]
            return _stage_response(cot, answer)
        if stage == "RobotMotion":
            return self._robot_motion(request, components)
        if stage == "CodeGen":
            return self._code_gen(request, components)
        if stage == "Feedback":
            return self._feedback(components)
        if stage == "EndToEndAblation":
            behavior = self._behavior(request, components)
            return _stage_response(
                "Mapping the instruction straight onto the robot APIs.",
                _code_answer(_ablated(behavior, request.variant)),
            )
        raise KeyError(f"no authored responses for stage {stage}")

    def _robot_motion(self, request, components) -> str:
        summary = components.get("FEEDBACK RESPONSE")
        if summary is not None:
            case = self._by_summary[summary]
            assert case.revised_steps is not None
            return _stage_response(
                "Applying the requested change to the procedure.",
                _steps_answer(case.revised_steps),
            )
        behavior = self._behavior(request, components)
        if self._has_library(request) and self._embodiment(request) == "mobile_v1":
            return _stage_response(
                "The saved nod skill covers the greeting gesture.",
                _steps_answer(SKILL_SAVE_STEPS),
            )
        bank = (
            STAGE2_QUADRUPED
            if self._embodiment(request) == "quadruped_v1"
            else STAGE2_MOBILE
        )
        return _stage_response(
            "Mapping the human motion onto this robot's actuators.",
            _steps_answer(bank[behavior]),
        )

    def _code_gen(self, request, components) -> str:
        if "The program failed validation" in request.messages[-1][1]:
            behavior = self._behavior(request, components)
            if behavior == "Wave":
                return _stage_response(
                    "Correcting the reported problems.",
                    _code_answer(WAVE_DEFECTIVE_REPAIR),
                )
            raise KeyError(f"unexpected repair request for {behavior}")
        summary = components.get("FEEDBACK RESPONSE")
        if summary is not None:
            case = self._by_summary[summary]
            source = case.after_program if isinstance(case, FeedbackCase) else case.program
            return _stage_response(
                "Applying the requested change to the program.", _code_answer(source)
            )
        behavior = self._behavior(request, components)
        embodiment = self._embodiment(request)
        if self._has_library(request):
            if embodiment == "quadruped_v1" and behavior in COMPOSE_PROGRAMS:
                source = COMPOSE_PROGRAMS[behavior](request.variant)
            else:
                source = SKILL_SAVE_PROGRAM
        elif behavior == "Wave" and request.variant == 2:
            source = WAVE_DEFECTIVE
        elif embodiment == "quadruped_v1":
            source = PROGRAMS_QUADRUPED[behavior](request.variant)
        else:
            source = PROGRAMS_MOBILE[behavior](request.variant)
        return _stage_response(
            "Composing small documented skills for each step.", _code_answer(source)
        )

    def _feedback(self, components) -> str:
        utterance = components["USER FEEDBACK"]
        case = self._by_utterance[utterance]
        return (
            f"REASONING: {case.cot}\n"
            f"ANSWER: {case.change_summary}\n"
            f"ROUTE: {case.route}"
        )


# ----------------------------------------------------------- transcript build


def scripted_gateway():
    """Record-mode gateway backed by the authored banks."""
    from .gateway import MODE_RECORD, Gateway, ScriptedBackend

    return Gateway(MODE_RECORD, ScriptedBackend(ScriptedResponder()))


def _pipeline(gateway, embodiment: str, library=(), variant: int = 0):
    from .pipeline import Pipeline
    from .robots.manifests import load_manifest
    from .templates import TemplateSet

    return Pipeline(
        gateway,
        TemplateSet.load_default(),
        load_manifest(embodiment),
        list(library),
        variant=variant,
    )


def author_behaviors(gateway, embodiment: str, n: int = 5) -> None:
    from .domain import Session
    from .harness.catalog import benchmark_catalog

    catalog = benchmark_catalog(embodiment)
    base = _pipeline(gateway, embodiment)
    for behavior_id in catalog.behavior_ids():
        instruction = catalog.instruction(behavior_id)
        for variant in range(n):
            session = Session(id=f"author-{behavior_id}-{variant}", instruction=instruction)
            base.with_variant(variant).run_generation(session)


def author_ablation(gateway, n: int = 5) -> None:
    from .errors import CodeRejected
    from .harness.catalog import benchmark_catalog

    catalog = benchmark_catalog("mobile_v1")
    base = _pipeline(gateway, "mobile_v1")
    for behavior_id in catalog.behavior_ids():
        instruction = catalog.instruction(behavior_id)
        for variant in range(n):
            try:
                base.with_variant(variant).end_to_end_ablation(instruction)
            except CodeRejected:
                pass  # expected on the authored failure slots


def author_compose(gateway, n: int = 5) -> None:
    from .domain import Session
    from .harness.catalog import COMPOSE_PROVIDED_SKILLS, behavior_catalog
    from .skills import load_seed_skills

    catalog = behavior_catalog(COMPOSE_PROGRAMS.keys(), "quadruped_v1")
    for target, provided in COMPOSE_PROVIDED_SKILLS.items():
        library = load_seed_skills(provided).entries
        base = _pipeline(gateway, "quadruped_v1", library)
        instruction = catalog.instruction(target)
        for variant in range(n):
            session = Session(id=f"author-compose-{target}-{variant}", instruction=instruction)
            base.with_variant(variant).run_generation(session)


def author_feedback(gateway) -> None:
    from .domain import Session
    from .harness.catalog import FEEDBACK_TYPES, behavior_catalog

    catalog = behavior_catalog(FEEDBACK_CASES_BEHAVIORS, "mobile_v1")
    base = _pipeline(gateway, "mobile_v1")
    for behavior_id in FEEDBACK_CASES_BEHAVIORS:
        instruction = catalog.instruction(behavior_id)
        for feedback_type in FEEDBACK_TYPES:
            case = FEEDBACK_CASES[(behavior_id, feedback_type)]
            session = Session(
                id=f"author-feedback-{behavior_id}-{feedback_type}", instruction=instruction
            )
            base.run_generation(session)
            base.run_feedback_round(session, case.utterance)


def author_nod_session(gateway) -> None:
    from .domain import Session
    from .harness.catalog import benchmark_catalog

    catalog = benchmark_catalog("mobile_v1")
    base = _pipeline(gateway, "mobile_v1")
    session = Session(id="author-nod-session", instruction=catalog.instruction("Nod"))
    base.run_generation(session)
    for rnd in NOD_SESSION_ROUNDS:
        base.run_feedback_round(session, rnd.utterance)


def author_skill_save(gateway) -> None:
    from .domain import Session
    from .harness.catalog import benchmark_catalog
    from .skills import entry_from_program

    catalog = benchmark_catalog("mobile_v1")
    base = _pipeline(gateway, "mobile_v1")
    nod_session = Session(id="author-save-nod", instruction=catalog.instruction("Nod"))
    base.run_generation(nod_session)
    saved = entry_from_program(
        nod_session.rounds[0].program, "nod_head", provenance="user_saved"
    )
    follow_up = _pipeline(gateway, "mobile_v1", [saved])
    session = Session(id="author-save-ack", instruction=catalog.instruction("Acknowledge"))
    follow_up.run_generation(session)


def author_sampling_fault(gateway, n: int = 5) -> None:
    from .harness.catalog import behavior_catalog
    from .pipeline import sample_candidates

    catalog = behavior_catalog(("Wave",), "mobile_v1")
    base = _pipeline(gateway, "mobile_v1")
    results = sample_candidates(base, catalog.instruction("Wave"), n)
    failed = [r.variant for r in results if not r.ok]
    assert failed == [2], f"expected only slot 2 to fail, got {failed}"


FEEDBACK_CASES_BEHAVIORS = ("Excuse", "Approach", "Acknowledge Stop")

AUTHORS = {
    "behaviors_mobile": lambda gw: author_behaviors(gw, "mobile_v1"),
    "behaviors_quadruped": lambda gw: author_behaviors(gw, "quadruped_v1"),
    "ablation_mobile": author_ablation,
    "compose_quadruped": author_compose,
    "feedback_mobile": author_feedback,
    "service_nod": author_nod_session,
    "skill_save": author_skill_save,
    "sampling_fault": author_sampling_fault,
}


def write_all_transcripts(outdir) -> list[str]:
    """Regenerate every shipped transcript file."""
    from pathlib import Path

    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, author in AUTHORS.items():
        gateway = scripted_gateway()
        author(gateway)
        path = out / f"{name}.json"
        gateway.transcript.save(path)
        written.append(str(path))
    return written


