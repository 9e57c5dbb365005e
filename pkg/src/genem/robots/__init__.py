"""Embodiment manifests, scripted scenarios, and the kinematic simulator."""

from .manifests import (
    MANIFEST_IDS,
    ChannelRange,
    EmbodimentManifest,
    ParamSpec,
    PrimitiveSpec,
    SensorSpec,
    load_manifest,
    manifest_from_dict,
)
from .scenarios import SCENARIO_IDS, WorldScenario, load_scenario, scenario_from_dict
from .simulator import KinematicExecutor, rate_caps, simulate, wrap_deg

__all__ = [
    "MANIFEST_IDS",
    "SCENARIO_IDS",
    "ChannelRange",
    "EmbodimentManifest",
    "KinematicExecutor",
    "ParamSpec",
    "PrimitiveSpec",
    "SensorSpec",
    "WorldScenario",
    "load_manifest",
    "load_scenario",
    "manifest_from_dict",
    "rate_caps",
    "scenario_from_dict",
    "simulate",
    "wrap_deg",
]
