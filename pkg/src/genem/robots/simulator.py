"""Deterministic kinematic simulator implementing the primitive executor.

Time advances in fixed 0.1 s steps. Every motion primitive turns into a
linear slew toward its target at the manifest's rate caps, one frame per
step; instantaneous primitives (light changes) mutate state visible from the
next frame and are flushed into a final frame if nothing follows them.
Repeated runs of the same (program, manifest, scenario) produce identical
trajectories; the seed parameter is reserved and unused.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping

from ..domain import FRAME_STEP_S, BehaviorProgram, Event, SkillEntry, StateFrame, Trajectory
from ..errors import ExecutorFault, UnknownSensor
from .. import ebl
from .manifests import EmbodimentManifest
from .scenarios import WorldScenario

VISIBLE_CONE_HALF_ANGLE_DEG = 60.0
VISIBLE_MAX_DISTANCE_M = 5.0


def wrap_deg(angle: float) -> float:
    """Wrap an angle into [-180, 180)."""
    wrapped = math.fmod(angle + 180.0, 360.0)
    if wrapped < 0:
        wrapped += 360.0
    return wrapped - 180.0


class KinematicExecutor:
    """Executor advancing a scripted world one fixed step at a time."""

    def __init__(self, manifest: EmbodimentManifest, scenario: WorldScenario, seed: int = 0):
        self.manifest = manifest
        self.scenario = scenario
        self.seed = seed  # reserved; nothing consumes it yet
        self.step_s = FRAME_STEP_S
        self.kin = manifest.kinematics
        self.steps = 0
        self.events: list[Event] = []
        self.dirty = False
        self.heading_cont = 0.0  # unwrapped; frames store the wrapped value

        self.state: dict[str, float] = {name: 0.0 for name in manifest.channels}
        if "body_height_m" in self.state:
            self.state["body_height_m"] = self.kin["stand_height_m"]
        self.frames: list[StateFrame] = [self._frame()]

    # ------------------------------------------------------------ protocol

    def clock(self) -> float:
        return round(self.steps * self.step_s, 6)

    def signature(self, name: str) -> tuple[str, ...]:
        prim = self.manifest.primitive(name)
        if prim is not None:
            return tuple(p.name for p in prim.params)
        sensor = self.manifest.sensor(name)
        if sensor is not None:
            return tuple(p.name for p in sensor.params)
        raise ExecutorFault(name, "not a primitive of this embodiment")

    def perform(self, name: str, args: Mapping[str, object]) -> None:
        prim = self.manifest.primitive(name)
        if prim is None:
            raise ExecutorFault(name, "not a primitive of this embodiment")
        merged = self._merge_args(name, prim.params, args)
        handler = getattr(self, f"_do_{name}", None)
        if handler is None:
            raise ExecutorFault(name, "no kinematic model for this primitive")
        handler(**merged)

    def eval_sensor(self, name: str, args: Mapping[str, object]) -> bool | float:
        sensor = self.manifest.sensor(name)
        if sensor is None:
            raise UnknownSensor(f"{name!r} is not a sensor of {self.manifest.id}")
        merged = self._merge_args(name, sensor.params, args)
        t = self.clock()
        distance = self.scenario.person_distance(t, self.state["x"], self.state["y"])
        if name == "person_distance":
            return distance
        if name == "person_distance_lt":
            return distance < float(merged["x_m"])
        if name == "person_visible":
            pos = self.scenario.person_position(t)
            if pos is None or distance > VISIBLE_MAX_DISTANCE_M:
                return False
            bearing = math.degrees(math.atan2(pos[1] - self.state["y"], pos[0] - self.state["x"]))
            off = abs(wrap_deg(bearing - wrap_deg(self.heading_cont)))
            return off <= VISIBLE_CONE_HALF_ANGLE_DEG
        raise UnknownSensor(f"no evaluation rule for sensor {name!r}")

    def finish(self) -> Trajectory:
        if self.dirty:
            self._advance(1)
        return Trajectory(
            self.manifest.id,
            self.manifest.channels,
            tuple(self.frames),
            tuple(self.events),
            self.step_s,
        )

    # ------------------------------------------------------------ plumbing

    def _merge_args(self, name, params, args: Mapping[str, object]) -> dict[str, object]:
        merged: dict[str, object] = {}
        for param in params:
            if param.name in args:
                value = args[param.name]
            elif not param.required:
                value = param.default
            else:
                raise ExecutorFault(name, f"missing required argument {param.name!r}")
            if param.type in ("number", "int") and param.range is not None:
                lo, hi = param.range
                if not (lo <= float(value) <= hi):
                    raise ExecutorFault(
                        name, f"{param.name}={value!r} outside range [{lo}, {hi}]"
                    )
            merged[param.name] = value
        return merged

    def _frame(self) -> StateFrame:
        channels = dict(self.state)
        channels["heading_deg"] = wrap_deg(self.heading_cont)
        return StateFrame(self.clock(), channels)

    def _advance(self, steps: int, updater=None) -> None:
        for k in range(1, steps + 1):
            self.steps += 1
            if updater is not None:
                updater(k)
            self.frames.append(self._frame())
        self.dirty = False

    def _steps_for(self, duration_s: float) -> int:
        if duration_s <= 0:
            return 0
        return max(1, math.ceil(duration_s / self.step_s - 1e-9))

    def _slew(self, targets: dict[str, float], rates: dict[str, float]) -> None:
        """Linearly move the named channels to their targets, rate-capped."""
        starts = {name: self.state[name] for name in targets}
        durations = [
            abs(targets[name] - starts[name]) / rates[name] for name in targets
        ]
        steps = self._steps_for(max(durations, default=0.0))
        if steps == 0:
            return

        def update(k: int) -> None:
            frac = k / steps
            for name in targets:
                self.state[name] = starts[name] + frac * (targets[name] - starts[name])

        self._advance(steps, update)

    def _rotate_by(self, angle_deg: float) -> None:
        start = self.heading_cont
        target = start + angle_deg
        steps = self._steps_for(abs(angle_deg) / self.kin["rotate_speed_deg_s"])
        if steps == 0:
            return

        def update(k: int) -> None:
            self.heading_cont = start + (k / steps) * (target - start)

        self._advance(steps, update)

    def _translate_by(self, distance_m: float) -> None:
        half = self.kin["arena_half_extent_m"]
        heading = math.radians(wrap_deg(self.heading_cont))
        dx = math.cos(heading) * distance_m
        dy = math.sin(heading) * distance_m
        end_x, end_y = self.state["x"] + dx, self.state["y"] + dy
        if abs(end_x) > half or abs(end_y) > half:
            raise ExecutorFault(
                "base_translate",
                f"target ({end_x:.2f}, {end_y:.2f}) outside the {2 * half:.0f} m arena",
            )
        start_x, start_y = self.state["x"], self.state["y"]
        steps = self._steps_for(abs(distance_m) / self.kin["base_speed_m_s"])
        if steps == 0:
            return

        def update(k: int) -> None:
            frac = k / steps
            self.state["x"] = start_x + frac * dx
            self.state["y"] = start_y + frac * dy

        self._advance(steps, update)

    def _emit(self, kind: str, payload: str) -> None:
        self.events.append(Event(self.clock(), kind, payload))

    def _set_light(self, rgb: tuple[float, float, float]) -> None:
        self.state["light_r"], self.state["light_g"], self.state["light_b"] = rgb
        self.dirty = True

    # ----------------------------------------------------------- primitives

    def _do_wait(self, duration_s: float) -> None:
        self._advance(self._steps_for(float(duration_s)))

    def _do_head_pan(self, angle_deg: float) -> None:
        self._slew({"head_pan_deg": float(angle_deg)}, {"head_pan_deg": self.kin["head_slew_deg_s"]})

    def _do_head_tilt(self, angle_deg: float) -> None:
        self._slew({"head_tilt_deg": float(angle_deg)}, {"head_tilt_deg": self.kin["head_slew_deg_s"]})

    def _do_base_rotate(self, angle_deg: float) -> None:
        self._rotate_by(float(angle_deg))

    def _do_base_translate(self, distance_m: float) -> None:
        self._translate_by(float(distance_m))

    def _do_navigate_to(self, x_m: float, y_m: float) -> None:
        half = self.kin["arena_half_extent_m"]
        x_m, y_m = float(x_m), float(y_m)
        if abs(x_m) > half or abs(y_m) > half:
            raise ExecutorFault(
                "navigate_to", f"target ({x_m}, {y_m}) outside the {2 * half:.0f} m arena"
            )
        dx, dy = x_m - self.state["x"], y_m - self.state["y"]
        distance = math.hypot(dx, dy)
        if distance < 1e-9:
            return
        bearing = math.degrees(math.atan2(dy, dx))
        self._rotate_by(wrap_deg(bearing - wrap_deg(self.heading_cont)))
        self._translate_by(distance)

    def _do_body_height(self, height_m: float) -> None:
        self._slew(
            {"body_height_m": float(height_m)},
            {"body_height_m": self.kin["height_slew_m_s"]},
        )

    def _pose_slew(self, **targets: float) -> None:
        rates = {}
        for name in targets:
            rates[name] = (
                self.kin["height_slew_m_s"] if name == "body_height_m" else self.kin["pose_slew_deg_s"]
            )
        self._slew(targets, rates)

    def _do_body_pose(self, roll_deg: float, pitch_deg: float, yaw_deg: float) -> None:
        self._pose_slew(
            body_roll_deg=float(roll_deg),
            body_pitch_deg=float(pitch_deg),
            body_yaw_deg=float(yaw_deg),
        )

    def _do_stand(self) -> None:
        self._pose_slew(
            body_roll_deg=0.0,
            body_pitch_deg=0.0,
            body_yaw_deg=0.0,
            body_height_m=self.kin["stand_height_m"],
        )

    def _do_sit(self) -> None:
        self._pose_slew(
            body_roll_deg=0.0,
            body_pitch_deg=self.kin["sit_pitch_deg"],
            body_height_m=self.kin["sit_height_m"],
        )

    def _do_bow(self, pitch_deg: float) -> None:
        self._pose_slew(
            body_roll_deg=0.0,
            body_pitch_deg=float(pitch_deg),
            body_height_m=self.kin["bow_height_m"],
        )

    def _do_light_set(self, color: str) -> None:
        self._emit("light_pattern", f"set:{color}")
        self._set_light(_hex_to_rgb(color))

    def _do_light_off(self) -> None:
        self._emit("light_pattern", "off")
        self._set_light((0.0, 0.0, 0.0))

    def _do_light_pattern(self, name: str, color: str, cycles: int) -> None:
        cycles = int(cycles)
        self._emit("light_pattern", f"{name}:{color}:{cycles}")
        rgb = _hex_to_rgb(color)
        on_steps = 3  # 0.3 s lit + 0.2 s dark = one 0.5 s cycle
        cycle_steps = round(self.kin["light_pattern_cycle_s"] / self.step_s)

        def update(k: int) -> None:
            phase = (k - 1) % cycle_steps
            self._set_light(rgb if phase < on_steps else (0.0, 0.0, 0.0))

        self._advance(cycles * cycle_steps, update)
        self._set_light((0.0, 0.0, 0.0))
        self.dirty = False  # pattern's final frame is already dark

    def _do_say(self, text: str) -> None:
        self._emit("speech", str(text))
        words = max(1, len(str(text).split()))
        duration = max(
            self.kin["say_min_seconds"], words * self.kin["say_seconds_per_word"]
        )
        self._advance(self._steps_for(duration))

    def _do_play_sound(self, name: str) -> None:
        self._emit("sound", str(name))
        self._advance(self._steps_for(self.kin["sound_seconds"]))


def _hex_to_rgb(color: str) -> tuple[float, float, float]:
    color = color.strip()
    if not (len(color) == 7 and color.startswith("#")):
        raise ExecutorFault("light", f"malformed color {color!r}")
    return (
        float(int(color[1:3], 16)),
        float(int(color[3:5], 16)),
        float(int(color[5:7], 16)),
    )


def rate_caps(manifest: EmbodimentManifest) -> dict[str, float]:
    """Per-channel rate caps (units/s) for plausibility checks."""
    kin = manifest.kinematics
    caps = {
        "x": kin["base_speed_m_s"],
        "y": kin["base_speed_m_s"],
        "heading_deg": kin["rotate_speed_deg_s"],
    }
    for channel in manifest.channels:
        if channel.startswith("head_"):
            caps[channel] = kin["head_slew_deg_s"]
        elif channel in ("body_roll_deg", "body_pitch_deg", "body_yaw_deg"):
            caps[channel] = kin["pose_slew_deg_s"]
        elif channel == "body_height_m":
            caps[channel] = kin["height_slew_m_s"]
    return caps


def simulate(
    program: BehaviorProgram,
    manifest: EmbodimentManifest,
    scenario: WorldScenario,
    seed: int = 0,
    library: Iterable[SkillEntry] = (),
    args: Mapping[str, object] | None = None,
    budget: ebl.Budget | None = None,
    stats: ebl.RunStats | None = None,
) -> Trajectory:
    """Execute a validated program in a scenario and return its trajectory."""
    executor = KinematicExecutor(manifest, scenario, seed)
    sources = {entry.name: entry.body for entry in library}
    return ebl.interpret(
        program.ast,
        program.entry_skill,
        args if args is not None else program.default_args(),
        executor,
        budget=budget,
        library=sources,
        stats=stats,
    )
