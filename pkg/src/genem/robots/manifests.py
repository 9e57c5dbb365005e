"""Embodiment manifests: the declared primitive APIs each robot exposes.

Manifests are versioned JSON files shipped with the package. They are the
validator's ground truth, the source of the capability text injected into
prompts, and the place where all kinematic constants live so experiment runs
are reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import UnknownEmbodiment

MANIFEST_IDS = ("mobile_v1", "quadruped_v1")


@dataclass(frozen=True)
class ParamSpec:
    name: str
    type: str  # "number" | "int" | "string" | "color"
    unit: str | None = None
    range: tuple[float, float] | None = None
    required: bool = False
    default: object = None
    description: str = ""


@dataclass(frozen=True)
class PrimitiveSpec:
    name: str
    params: tuple[ParamSpec, ...]
    description: str
    modality: str  # "motion" | "light" | "speech" | "sound" | "time"

    def signature_line(self) -> str:
        parts = []
        for p in self.params:
            unit = f" {p.unit}" if p.unit else ""
            if p.required:
                parts.append(f"{p.name}: {p.type}{unit}")
            else:
                parts.append(f"{p.name}: {p.type}{unit} = {p.default!r}")
        return f"{self.name}({', '.join(parts)})"


@dataclass(frozen=True)
class SensorSpec:
    name: str
    params: tuple[ParamSpec, ...]
    returns: str  # "bool" | "number"
    description: str

    def signature_line(self) -> str:
        parts = [f"{p.name}: {p.type}" + (f" {p.unit}" if p.unit else "") for p in self.params]
        return f"{self.name}({', '.join(parts)}) -> {self.returns}"


@dataclass(frozen=True)
class ChannelRange:
    min: float
    max: float
    wrap: bool = False


@dataclass(frozen=True)
class EmbodimentManifest:
    id: str
    version: int
    modalities: tuple[str, ...]
    primitives: tuple[PrimitiveSpec, ...]
    sensors: tuple[SensorSpec, ...]
    channels: tuple[str, ...]
    channel_ranges: dict[str, ChannelRange]
    kinematics: dict[str, float]

    def primitive(self, name: str) -> PrimitiveSpec | None:
        for p in self.primitives:
            if p.name == name:
                return p
        return None

    def sensor(self, name: str) -> SensorSpec | None:
        for s in self.sensors:
            if s.name == name:
                return s
        return None

    def primitive_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.primitives)

    def capability_prose(self) -> str:
        """Deterministic capability description for prompt assembly.

        Each primitive and sensor name appears exactly once.
        """
        lines = [f"The {self.id} robot exposes these primitive APIs:"]
        for p in self.primitives:
            lines.append(f"- {p.signature_line()}: {p.description}")
        lines.append("Sensors usable in conditionals:")
        for s in self.sensors:
            lines.append(f"- {s.signature_line()}: {s.description}")
        return "\n".join(lines)


def _param_from_dict(d: dict) -> ParamSpec:
    rng = tuple(d["range"]) if d.get("range") else None
    return ParamSpec(
        d["name"],
        d["type"],
        d.get("unit"),
        rng,
        d.get("required", False),
        d.get("default"),
        d.get("description", ""),
    )


def manifest_from_dict(d: dict) -> EmbodimentManifest:
    return EmbodimentManifest(
        id=d["id"],
        version=d["version"],
        modalities=tuple(d["modalities"]),
        primitives=tuple(
            PrimitiveSpec(
                p["name"],
                tuple(_param_from_dict(x) for x in p.get("params", [])),
                p["description"],
                p["modality"],
            )
            for p in d["primitives"]
        ),
        sensors=tuple(
            SensorSpec(
                s["name"],
                tuple(_param_from_dict(x) for x in s.get("params", [])),
                s["returns"],
                s["description"],
            )
            for s in d["sensors"]
        ),
        channels=tuple(d["channels"]),
        channel_ranges={
            name: ChannelRange(r["min"], r["max"], r.get("wrap", False))
            for name, r in d["channel_ranges"].items()
        },
        kinematics={k: float(v) for k, v in d["kinematics"].items()},
    )


def load_manifest(id_or_path: str) -> EmbodimentManifest:
    """Load a shipped manifest by id, or any manifest by file path."""
    if id_or_path in MANIFEST_IDS:
        ref = resources.files("genem.data.manifests") / f"{id_or_path}.json"
        return manifest_from_dict(json.loads(ref.read_text()))
    path = Path(id_or_path)
    if path.suffix == ".json" and path.exists():
        return manifest_from_dict(json.loads(path.read_text()))
    raise UnknownEmbodiment(
        f"unknown embodiment {id_or_path!r}; shipped ids: {', '.join(MANIFEST_IDS)}"
    )
