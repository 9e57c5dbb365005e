"""Command-line entry points: the `genem` experiment runner and the `ebl`
program checker/runner."""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from . import ebl as ebl_lang
from .domain import BehaviorProgram, Trajectory
from .errors import EblError, GenemError
from .gateway import (
    MODE_RECORD,
    Gateway,
    HttpChatBackend,
    Transcript,
    default_transcript_dir,
)
from .harness import (
    run_ablation_suite,
    run_behavior_suite,
    run_composability_suite,
    run_feedback_suite,
    benchmark_catalog,
)
from .metrics import MetricConfig, distance_breakdown
from .robots.manifests import load_manifest
from .robots.scenarios import load_scenario
from .robots.simulator import simulate
from .skills import SkillLibrary


def _build_gateway(backend: str) -> tuple[Gateway, str]:
    if backend == "live":
        return Gateway(MODE_RECORD, HttpChatBackend.from_env(os.environ)), "live"
    if backend.startswith("replay:"):
        directory = backend.split(":", 1)[1]
        return Gateway.replay_dir(directory), backend
    if backend == "replay":
        return Gateway.replay_dir(default_transcript_dir()), "replay"
    raise click.BadParameter(f"backend must be replay, replay:<dir>, or live, got {backend!r}")


@click.group()
def genem():
    """Generate and evaluate expressive robot behaviors."""


@genem.command()
@click.argument("suite", type=click.Choice(["behaviors", "ablation", "compose", "feedback"]))
@click.option("--backend", default="replay", show_default=True, help="replay, replay:<dir>, or live")
@click.option("--n", default=5, show_default=True, help="samples per behavior")
@click.option("--embodiment", default="mobile_v1", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="write the JSON report here")
def suite(suite, backend, n, embodiment, out):
    """Run an experiment suite and print its report table and hash."""
    gateway, label = _build_gateway(backend)
    if suite == "behaviors":
        report = run_behavior_suite(benchmark_catalog(embodiment), n, gateway, label)
    elif suite == "ablation":
        report = run_ablation_suite(benchmark_catalog(embodiment), n, gateway, label)
    elif suite == "compose":
        report = run_composability_suite(n, gateway, label)
    else:
        report = run_feedback_suite(gateway, label)
    click.echo(report.render_table())
    click.echo(f"report hash: {report.report_hash()}")
    if out:
        payload = report.to_dict()
        payload["hash"] = report.report_hash()
        Path(out).write_text(json.dumps(payload, indent=1, sort_keys=True))
        click.echo(f"wrote {out}")


@genem.command()
@click.argument("a", type=click.Path(exists=True, dir_okay=False))
@click.argument("b", type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
def dist(a, b, config_path):
    """Expressive distance between two trajectory JSON files."""
    ta = Trajectory.from_dict(json.loads(Path(a).read_text()))
    tb = Trajectory.from_dict(json.loads(Path(b).read_text()))
    if config_path:
        cfg = MetricConfig.from_file(config_path)
    else:
        cfg = MetricConfig.from_manifest(load_manifest(ta.embodiment_id))
    click.echo(json.dumps(distance_breakdown(ta, tb, cfg)))


@genem.command()
@click.option("--suites", default="behaviors", show_default=True, help="comma-separated suite names")
@click.option("--n", default=5, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), required=True)
def record(suites, n, out):
    """Run suites against the live backend, recording replayable transcripts."""
    from .harness import record_transcripts

    gateway = Gateway(MODE_RECORD, HttpChatBackend.from_env(os.environ))
    names = tuple(s.strip() for s in suites.split(",") if s.strip())
    try:
        record_transcripts(gateway, names, n)
    finally:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        path = outdir / "recorded.json"
        gateway.transcript.save(path)
        click.echo(f"wrote {path} ({len(gateway.transcript.entries)} entries)")


@genem.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--port", type=int, default=None)
@click.option("--store", "store_root", type=click.Path(file_okay=False), default=None)
@click.option("--backend", default=None, help="replay, replay:<dir>, or live")
def serve(config_path, port, store_root, backend):
    """Run the HTTP service."""
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig.load(config_path, os.environ)
    if port is not None:
        config = config.__class__(**{**config.__dict__, "port": port})
    if store_root is not None:
        config = config.__class__(**{**config.__dict__, "store_root": store_root})
    if backend is not None:
        config = config.__class__(**{**config.__dict__, "backend": backend})
    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="warning")


@click.group()
def ebl():
    """Check and run behavior programs."""


def _load_library(path: str | None) -> list:
    if not path:
        return []
    return SkillLibrary.load(path).entries


@ebl.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--manifest", "manifest_id", required=True, help="embodiment id or manifest JSON path")
@click.option("--library", "library_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--forbid", multiple=True, help="forbidden modality (repeatable)")
def check(file, manifest_id, library_path, forbid):
    """Validate a program and print the report as JSON."""
    manifest = load_manifest(manifest_id)
    try:
        program = BehaviorProgram.from_source(Path(file).read_text())
    except EblError as exc:
        click.echo(json.dumps({"valid": False, "parse_error": str(exc)}))
        sys.exit(1)
    report = ebl_lang.validate(
        program.ast, manifest, _load_library(library_path), forbid
    )
    click.echo(json.dumps(report.to_dict(), indent=1))
    sys.exit(0 if report.valid else 1)


@ebl.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--manifest", "manifest_id", required=True)
@click.option("--scenario", "scenario_id", default="empty", show_default=True)
@click.option("--library", "library_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def run(file, manifest_id, scenario_id, library_path, out):
    """Execute a program in the simulator and emit its trajectory JSON."""
    manifest = load_manifest(manifest_id)
    scenario = load_scenario(scenario_id)
    library = _load_library(library_path)
    try:
        program = BehaviorProgram.from_source(Path(file).read_text())
        report = ebl_lang.validate(program.ast, manifest, library)
        if not report.valid:
            click.echo(report.render(), err=True)
            sys.exit(1)
        trajectory = simulate(program, manifest, scenario, library=library)
    except (EblError, GenemError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    payload = json.dumps(trajectory.to_dict())
    if out:
        Path(out).write_text(payload)
        click.echo(f"wrote {out}")
    else:
        click.echo(payload)
