"""Scripted world scenarios: where the person is, and what they do, over time.

Scenarios are deterministic given their id. Person motion is piecewise-linear
interpolation over a timed waypoint schedule; annotations are display cues
with no effect on the simulation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

from ..errors import UnknownScenario

SCENARIO_IDS = (
    "empty",
    "person_walks_by",
    "person_stops",
    "person_waves",
    "person_approaches_and_talks",
)


@dataclass(frozen=True)
class WorldScenario:
    id: str
    waypoints: tuple[tuple[float, float, float], ...]  # (t, x, y); empty = no person
    annotations: tuple[tuple[float, str], ...]

    @property
    def has_person(self) -> bool:
        return bool(self.waypoints)

    def person_position(self, t: float) -> tuple[float, float] | None:
        if not self.waypoints:
            return None
        points = self.waypoints
        if t <= points[0][0]:
            return (points[0][1], points[0][2])
        for (t0, x0, y0), (t1, x1, y1) in zip(points, points[1:]):
            if t0 <= t <= t1:
                if t1 == t0:
                    return (x1, y1)
                frac = (t - t0) / (t1 - t0)
                return (x0 + frac * (x1 - x0), y0 + frac * (y1 - y0))
        return (points[-1][1], points[-1][2])

    def person_distance(self, t: float, x: float, y: float) -> float:
        pos = self.person_position(t)
        if pos is None:
            return math.inf
        return math.hypot(pos[0] - x, pos[1] - y)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "waypoints": [list(w) for w in self.waypoints],
            "annotations": [list(a) for a in self.annotations],
        }


def scenario_from_dict(d: dict) -> WorldScenario:
    waypoints = tuple(tuple(float(v) for v in w) for w in d.get("waypoints", []))
    if any(t1 <= t0 for (t0, _, _), (t1, _, _) in zip(waypoints, waypoints[1:])):
        raise ValueError(f"scenario {d['id']!r} waypoints must be time-sorted")
    return WorldScenario(
        d["id"],
        waypoints,
        tuple((float(t), str(cue)) for t, cue in d.get("annotations", [])),
    )


def load_scenario(scenario_id: str) -> WorldScenario:
    if scenario_id not in SCENARIO_IDS:
        raise UnknownScenario(
            f"unknown scenario {scenario_id!r}; known: {', '.join(SCENARIO_IDS)}"
        )
    ref = resources.files("genem.data.scenarios") / f"{scenario_id}.json"
    return scenario_from_dict(json.loads(ref.read_text()))
