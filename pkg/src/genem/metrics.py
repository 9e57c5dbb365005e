"""Trajectory distance: dynamic time warping over numeric channels plus an
edit distance over discrete events.

The DTW frame cost is a weighted Euclidean distance over channels normalized
to [0, 1]; angular channels are compared by wrapped difference. The total
expressive distance combines the warping cost with a Levenshtein distance
over (kind, payload) event tokens, since speech and light events have no
meaningful interpolation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .domain import Event, Trajectory
from .errors import ChannelMismatch, EmptyTrajectory
from .robots.manifests import ChannelRange, EmbodimentManifest


@dataclass(frozen=True)
class MetricConfig:
    """Channel weights and normalization ranges for trajectory comparison."""

    channel_weights: dict[str, float]
    normalization: dict[str, ChannelRange]
    event_weight: float = 1.0

    def __post_init__(self):
        if not any(w > 0 for w in self.channel_weights.values()):
            raise ValueError("at least one channel weight must be positive")
        if any(w < 0 for w in self.channel_weights.values()):
            raise ValueError("channel weights must be nonnegative")
        for name, rng in self.normalization.items():
            if rng.max <= rng.min:
                raise ValueError(f"degenerate normalization range for {name!r}")

    @classmethod
    def from_manifest(cls, manifest: EmbodimentManifest, event_weight: float = 1.0) -> "MetricConfig":
        weights = {name: 1.0 for name in manifest.channels}
        return cls(weights, dict(manifest.channel_ranges), event_weight)

    @classmethod
    def from_file(cls, path: str) -> "MetricConfig":
        with open(path) as fh:
            d = json.load(fh)
        return cls(
            {k: float(v) for k, v in d["channel_weights"].items()},
            {
                k: ChannelRange(r["min"], r["max"], r.get("wrap", False))
                for k, r in d["normalization"].items()
            },
            float(d.get("event_weight", 1.0)),
        )


def _frame_cost_matrix(a: Trajectory, b: Trajectory, cfg: MetricConfig) -> np.ndarray:
    channels = [c for c in a.channel_names if cfg.channel_weights.get(c, 0.0) > 0]
    n, m = len(a.frames), len(b.frames)
    total = np.zeros((n, m))
    for name in channels:
        rng = cfg.normalization.get(name)
        if rng is None:
            raise ValueError(f"no normalization range for channel {name!r}")
        va = np.array(a.channel(name), dtype=float)
        vb = np.array(b.channel(name), dtype=float)
        diff = va[:, None] - vb[None, :]
        if rng.wrap:
            width = rng.max - rng.min
            diff = (diff + width / 2) % width - width / 2
        diff /= rng.max - rng.min
        total += cfg.channel_weights[name] * diff**2
    return np.sqrt(total)


def dtw_distance(a: Trajectory, b: Trajectory, cfg: MetricConfig) -> float:
    """Optimal monotonic alignment cost with steps (1,0), (0,1), (1,1)."""
    if not a.frames or not b.frames:
        raise EmptyTrajectory("cannot compare an empty trajectory")
    if set(a.channel_names) != set(b.channel_names):
        raise ChannelMismatch(
            f"channel sets differ: {sorted(a.channel_names)} vs {sorted(b.channel_names)}"
        )
    cost = _frame_cost_matrix(a, b, cfg)
    n, m = cost.shape
    acc = np.full((n + 1, m + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            acc[i, j] = cost[i - 1, j - 1] + min(
                acc[i - 1, j - 1], acc[i - 1, j], acc[i, j - 1]
            )
    return float(acc[n, m])


def event_tokens(events: tuple[Event, ...]) -> list[tuple[str, str]]:
    return [(e.kind, e.payload) for e in sorted(events, key=lambda e: e.t)]


def event_edit_distance(a_events: tuple[Event, ...], b_events: tuple[Event, ...]) -> int:
    """Levenshtein distance over (kind, payload) tokens in time order."""
    a = event_tokens(a_events)
    b = event_tokens(b_events)
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, tok_a in enumerate(a, start=1):
        row = [i] + [0] * len(b)
        for j, tok_b in enumerate(b, start=1):
            sub = prev[j - 1] + (0 if tok_a == tok_b else 1)
            row[j] = min(prev[j] + 1, row[j - 1] + 1, sub)
        prev = row
    return prev[-1]


def expressive_distance(candidate: Trajectory, expert: Trajectory, cfg: MetricConfig) -> float:
    """DTW cost plus weighted event edit distance; 0 iff behaviorally identical."""
    dtw = dtw_distance(candidate, expert, cfg)
    edit = event_edit_distance(candidate.events, expert.events)
    return dtw + cfg.event_weight * edit


def distance_breakdown(candidate: Trajectory, expert: Trajectory, cfg: MetricConfig) -> dict:
    dtw = dtw_distance(candidate, expert, cfg)
    edit = event_edit_distance(candidate.events, expert.events)
    return {
        "dtw": dtw,
        "event_edit": edit,
        "total": dtw + cfg.event_weight * edit,
    }
