"""Behavior catalog, feedback bank, and per-behavior structural checks.

The ten benchmark behaviors run on both embodiments. Structural checks are
automatable stand-ins for human norm coding: pure functions of the program
AST and its simulated trajectory, declared per behavior.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .. import ebl
from ..domain import BehaviorProgram, Instruction, Trajectory
from ..robots.scenarios import WorldScenario

BENCHMARK_BEHAVIOR_IDS = (
    "Nod",
    "Shake",
    "Wake",
    "Excuse",
    "Recoverable",
    "Unrecoverable",
    "Acknowledge",
    "Follow",
    "Approach",
    "Attention",
)

FEEDBACK_TYPES = ("insert", "swap", "loop", "remove")

FEEDBACK_BEHAVIOR_IDS = ("Excuse", "Approach", "Acknowledge Stop")

COMPOSE_TARGET_IDS = ("Acknowledge Walk", "Approach", "Confusion")

# Which seed skills are offered per composability target; everything else is
# withheld from the prompt and shows as a dash in the usage matrix.
COMPOSE_PROVIDED_SKILLS: dict[str, tuple[str, ...]] = {
    "Acknowledge Walk": ("eye_contact", "nod_head"),
    "Approach": ("eye_contact", "blink_lights", "nod_head"),
    "Confusion": ("blink_lights", "look_around", "shake_head"),
}

# Primitives that must be absent from the program after a remove-capability
# feedback round.
REMOVED_CAPABILITY: dict[str, tuple[str, ...]] = {
    "Excuse": ("light_set", "light_pattern", "light_off"),
    "Approach": ("light_set", "light_pattern", "light_off"),
    "Acknowledge Stop": ("say",),
}

# Feedback type -> edit class its round must produce on the entry skill body.
EXPECTED_EDIT_CLASS = {
    "insert": "InsertedCall",
    "swap": "SwappedOrder",
    "loop": "WrappedInRepeat",
    "remove": "RetargetedCall",
}

APPROACH_STANDOFF_M = 0.7


@dataclass(frozen=True)
class CatalogEntry:
    behavior_id: str
    instruction_text: str
    scenario_id: str
    modality_constraints: tuple[str, ...] = ()

    def instruction(self, embodiment_id: str) -> Instruction:
        return Instruction(
            self.instruction_text,
            embodiment_id,
            self.modality_constraints,
            self.scenario_id,
        )


_ENTRIES = {
    "Nod": CatalogEntry("Nod", "Nod your head.", "empty"),
    "Shake": CatalogEntry("Shake", "Shake your head.", "empty"),
    "Wake": CatalogEntry("Wake", "Wake up.", "empty"),
    "Excuse": CatalogEntry(
        "Excuse",
        "A person is blocking your path. Ask them to excuse you so you can get through.",
        "person_stops",
    ),
    "Recoverable": CatalogEntry(
        "Recoverable",
        "You made a mistake you can recover from. Show that you are sorry, then recover.",
        "empty",
    ),
    "Unrecoverable": CatalogEntry(
        "Unrecoverable",
        "You made a mistake you cannot recover from. Show that you cannot continue.",
        "empty",
    ),
    "Acknowledge": CatalogEntry(
        "Acknowledge",
        "Acknowledge a person walking by. You cannot speak.",
        "person_walks_by",
        ("speech",),
    ),
    "Follow": CatalogEntry("Follow", "Follow the person in front of you.", "person_walks_by"),
    "Approach": CatalogEntry(
        "Approach",
        'Respond to a person saying, "Come here. You cannot speak."',
        "person_waves",
        ("speech",),
    ),
    "Attention": CatalogEntry(
        "Attention",
        "Pay attention to the person talking to you.",
        "person_approaches_and_talks",
    ),
    "Acknowledge Stop": CatalogEntry(
        "Acknowledge Stop",
        "Acknowledge the person who stops in front of you.",
        "person_stops",
    ),
    "Acknowledge Walk": CatalogEntry(
        "Acknowledge Walk",
        "Acknowledge a person walking by. You cannot speak.",
        "person_walks_by",
        ("speech",),
    ),
    "Confusion": CatalogEntry("Confusion", "Express confusion.", "empty"),
    "Wave": CatalogEntry("Wave", "Wave at the person walking by.", "person_walks_by"),
}


@dataclass(frozen=True)
class BehaviorCatalog:
    embodiment_id: str
    entries: tuple[CatalogEntry, ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("catalog must not be empty")
        for entry in self.entries:
            if not entry.instruction_text.strip():
                raise ValueError(f"empty instruction for {entry.behavior_id}")

    def behavior_ids(self) -> tuple[str, ...]:
        return tuple(e.behavior_id for e in self.entries)

    def entry(self, behavior_id: str) -> CatalogEntry:
        for e in self.entries:
            if e.behavior_id == behavior_id:
                return e
        raise KeyError(f"no catalog entry for behavior {behavior_id!r}")

    def instruction(self, behavior_id: str) -> Instruction:
        return self.entry(behavior_id).instruction(self.embodiment_id)


def catalog_entry(behavior_id: str) -> CatalogEntry:
    return _ENTRIES[behavior_id]


def benchmark_catalog(embodiment_id: str = "mobile_v1") -> BehaviorCatalog:
    """The ten benchmark behaviors on the given embodiment."""
    return BehaviorCatalog(
        embodiment_id, tuple(_ENTRIES[b] for b in BENCHMARK_BEHAVIOR_IDS)
    )


def behavior_catalog(behavior_ids, embodiment_id: str) -> BehaviorCatalog:
    return BehaviorCatalog(embodiment_id, tuple(_ENTRIES[b] for b in behavior_ids))


# --------------------------------------------------------------- feedback bank

# (behavior, feedback type) -> the utterance sent as user feedback.
FEEDBACK_UTTERANCES: dict[tuple[str, str], str] = {
    ("Excuse", "insert"): "Look at the person before you say anything.",
    ("Excuse", "swap"): "Ask them to excuse you before turning on the lights.",
    ("Excuse", "loop"): "Repeat the polite request twice.",
    ("Excuse", "remove"): "You can no longer use the light strip.",
    ("Approach", "insert"): "Blink the lights before you start moving.",
    ("Approach", "swap"): "Turn the light green before walking over, not after.",
    ("Approach", "loop"): "Nod twice before approaching.",
    ("Approach", "remove"): "The light strip is out of service.",
    ("Acknowledge Stop", "insert"): "When you first see the person, nod at them.",
    ("Acknowledge Stop", "swap"): "Say hello before turning the light green.",
    ("Acknowledge Stop", "loop"): "Repeat the greeting light twice.",
    ("Acknowledge Stop", "remove"): "Stop using the speech module.",
}


def feedback_utterance(behavior_id: str, feedback_type: str) -> str:
    return FEEDBACK_UTTERANCES[(behavior_id, feedback_type)]


# ----------------------------------------------------------- structural checks

CheckFn = Callable[[BehaviorProgram, Trajectory | None, WorldScenario], bool]


@dataclass(frozen=True)
class StructuralCheck:
    """Automated stand-in for human norm coding; pure in its inputs."""

    name: str
    fn: CheckFn
    needs_trajectory: bool = True


def _uses_person_distance(program: BehaviorProgram, _traj, _scenario) -> bool:
    for stmt in ebl.nodes.iter_statements(
        tuple(s for skill in program.ast.skills for s in skill.body)
    ):
        if isinstance(stmt, ebl.If) and stmt.predicate.target in (
            "person_distance_lt",
            "person_distance",
        ):
            return True
    return False


def _standoff_distance(_program, trajectory: Trajectory, scenario: WorldScenario) -> bool:
    last = trajectory.frames[-1]
    distance = scenario.person_distance(last.t, last.channels["x"], last.channels["y"])
    return distance >= APPROACH_STANDOFF_M


def _no_speech_events(_program, trajectory: Trajectory, _scenario) -> bool:
    return all(e.kind != "speech" for e in trajectory.events)


STRUCTURAL_CHECKS: dict[str, tuple[StructuralCheck, ...]] = {
    "Excuse": (
        StructuralCheck("uses_person_distance", _uses_person_distance, needs_trajectory=False),
    ),
    "Approach": (
        StructuralCheck("standoff_distance", _standoff_distance),
        StructuralCheck("no_speech_events", _no_speech_events),
    ),
    "Acknowledge": (StructuralCheck("no_speech_events", _no_speech_events),),
    "Acknowledge Walk": (StructuralCheck("no_speech_events", _no_speech_events),),
}


def structural_checks(behavior_id: str) -> tuple[StructuralCheck, ...]:
    return STRUCTURAL_CHECKS.get(behavior_id, ())
