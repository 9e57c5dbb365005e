import random

import pytest
from hypothesis import given, settings

from genem.domain import Event, StateFrame, Trajectory
from genem.errors import ChannelMismatch
from genem.metrics import (
    MetricConfig,
    distance_breakdown,
    dtw_distance,
    event_edit_distance,
    expressive_distance,
)
from genem.robots import load_manifest, load_scenario, simulate
from genem.robots.manifests import ChannelRange
from genem.domain import BehaviorProgram
from importlib import resources

from oracles import exhaustive_dtw, recursive_levenshtein
from strategies import trajectories

UNIT_CFG = MetricConfig({"v": 1.0}, {"v": ChannelRange(0.0, 1.0)})


def traj(values, embodiment="test_v1"):
    frames = tuple(
        StateFrame(round(i * 0.1, 6), {"v": float(v)}) for i, v in enumerate(values)
    )
    return Trajectory(embodiment, ("v",), frames, ())


def test_known_alignment_is_free():
    # One channel, unit weight: [0,1] aligns onto [0,0,1] at zero cost.
    assert dtw_distance(traj([0, 1]), traj([0, 0, 1]), UNIT_CFG) == pytest.approx(0.0)


def test_identity_is_zero():
    t = traj([0.2, 0.4, 0.9, 0.1])
    assert dtw_distance(t, t, UNIT_CFG) == 0.0


def test_symmetry_on_random_pairs():
    rng = random.Random(7)
    for _ in range(100):
        a = traj([rng.random() for _ in range(rng.randint(1, 8))])
        b = traj([rng.random() for _ in range(rng.randint(1, 8))])
        assert dtw_distance(a, b, UNIT_CFG) == pytest.approx(
            dtw_distance(b, a, UNIT_CFG)
        )


def test_oracle_agreement_randomized():
    """DP result equals exhaustive path enumeration for short trajectories."""
    rng = random.Random(42)
    weights = {"v": 1.0}
    ranges = {"v": (0.0, 1.0, False)}
    for _ in range(500):
        a = [rng.random() for _ in range(rng.randint(1, 6))]
        b = [rng.random() for _ in range(rng.randint(1, 6))]
        got = dtw_distance(traj(a), traj(b), UNIT_CFG)
        want = exhaustive_dtw(
            [{"v": v} for v in a], [{"v": v} for v in b], weights, ranges
        )
        assert got == pytest.approx(want, abs=1e-9)


def test_oracle_agreement_multichannel_wrapped():
    rng = random.Random(9)
    cfg = MetricConfig(
        {"x": 1.0, "heading_deg": 0.5},
        {
            "x": ChannelRange(-5.0, 5.0),
            "heading_deg": ChannelRange(-180.0, 180.0, wrap=True),
        },
    )
    ranges = {"x": (-5.0, 5.0, False), "heading_deg": (-180.0, 180.0, True)}
    weights = {"x": 1.0, "heading_deg": 0.5}
    for _ in range(100):
        def frames():
            return [
                {
                    "x": rng.uniform(-5, 5),
                    "heading_deg": rng.uniform(-180, 180),
                }
                for _ in range(rng.randint(1, 5))
            ]

        fa, fb = frames(), frames()
        ta = Trajectory(
            "m",
            ("x", "heading_deg"),
            tuple(StateFrame(round(i * 0.1, 6), f) for i, f in enumerate(fa)),
            (),
        )
        tb = Trajectory(
            "m",
            ("x", "heading_deg"),
            tuple(StateFrame(round(i * 0.1, 6), f) for i, f in enumerate(fb)),
            (),
        )
        assert dtw_distance(ta, tb, cfg) == pytest.approx(
            exhaustive_dtw(fa, fb, weights, ranges), abs=1e-9
        )


def test_wrapped_heading_uses_angular_difference():
    cfg = MetricConfig(
        {"heading_deg": 1.0}, {"heading_deg": ChannelRange(-180, 180, wrap=True)}
    )
    a = Trajectory("m", ("heading_deg",), (StateFrame(0.0, {"heading_deg": 179.0}),), ())
    b = Trajectory("m", ("heading_deg",), (StateFrame(0.0, {"heading_deg": -179.0}),), ())
    assert dtw_distance(a, b, cfg) == pytest.approx(2.0 / 360.0)


def test_perturbation_upper_bound():
    rng = random.Random(3)
    values = [rng.random() for _ in range(40)]
    eps = 0.01
    noisy = [min(1.0, max(0.0, v + rng.uniform(-eps, eps))) for v in values]
    d = dtw_distance(traj(values), traj(noisy), UNIT_CFG)
    assert d <= eps * len(values) * 1.0 + 1e-12


def test_event_edit_distance_against_oracle():
    rng = random.Random(11)
    kinds = ("speech", "sound", "light_pattern")
    for _ in range(200):
        def events(n):
            return tuple(
                Event(round(i * 0.1, 6), rng.choice(kinds), rng.choice("abc"))
                for i in range(n)
            )

        a = events(rng.randint(0, 5))
        b = events(rng.randint(0, 5))
        got = event_edit_distance(a, b)
        want = recursive_levenshtein(
            [(e.kind, e.payload) for e in a], [(e.kind, e.payload) for e in b]
        )
        assert got == want


def test_event_edit_distance_trivia():
    events = tuple(Event(0.0, "speech", c) for c in "abc")
    assert event_edit_distance(events, events) == 0
    assert event_edit_distance((), events) == 3
    assert event_edit_distance(events, ()) == 3


def test_channel_mismatch_rejected():
    a = traj([0, 1])
    b = Trajectory("q", ("w",), (StateFrame(0.0, {"w": 0.0}),), ())
    with pytest.raises(ChannelMismatch):
        expressive_distance(a, b, UNIT_CFG)


def test_expressive_distance_combines_terms():
    a = traj([0, 1])
    b = traj([0, 1])
    b = Trajectory(b.embodiment_id, b.channel_names, b.frames, (Event(0.0, "speech", "hi"),))
    breakdown = distance_breakdown(a, b, UNIT_CFG)
    assert breakdown["dtw"] == pytest.approx(0.0)
    assert breakdown["event_edit"] == 1
    assert breakdown["total"] == pytest.approx(1.0)


@settings(max_examples=50, deadline=None)
@given(trajectories(max_frames=5), trajectories(max_frames=5))
def test_metric_properties_random(a, b):
    cfg = MetricConfig(
        {"x": 1.0, "y": 1.0, "heading_deg": 1.0},
        {
            "x": ChannelRange(-5, 5),
            "y": ChannelRange(-5, 5),
            "heading_deg": ChannelRange(-180, 180, wrap=True),
        },
    )
    assert dtw_distance(a, a, cfg) == pytest.approx(0.0, abs=1e-12)
    d_ab = dtw_distance(a, b, cfg)
    assert d_ab >= 0
    assert d_ab == pytest.approx(dtw_distance(b, a, cfg))


def test_candidate_ranking_on_reference_programs():
    """A nod matches a delayed nod better than an idle wait of equal length."""
    manifest = load_manifest("mobile_v1")
    scenario = load_scenario("empty")
    cfg = MetricConfig.from_manifest(manifest)
    root = resources.files("genem") / "data" / "reference"
    expert_src = (root / "nod_mobile.ebl").read_text()
    expert = simulate(BehaviorProgram.from_source(expert_src), manifest, scenario)

    delayed = expert_src.replace('repeat 2 {', 'wait 0.3s\n    repeat 2 {')
    delayed_traj = simulate(BehaviorProgram.from_source(delayed), manifest, scenario)

    idle_src = (
        'skill idle() {\n    """Do nothing for as long as the nod takes."""\n'
        f"    wait {expert.duration_s}s\n}}\n"
    )
    idle_traj = simulate(BehaviorProgram.from_source(idle_src), manifest, scenario)

    d_delayed = expressive_distance(delayed_traj, expert, cfg)
    d_idle = expressive_distance(idle_traj, expert, cfg)
    assert d_idle > 0
    assert d_delayed < d_idle
