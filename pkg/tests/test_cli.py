import json

from click.testing import CliRunner

from genem.cli import ebl as ebl_cli
from genem.cli import genem as genem_cli

VALID = '''skill nod() {
    """Nod."""
    head_tilt(angle_deg=20deg)
    head_tilt(angle_deg=0deg)
}
'''

INVALID = '''skill nod() {
    """Nod."""
    bob_head()
}
'''


def test_ebl_check_clean(tmp_path):
    path = tmp_path / "nod.ebl"
    path.write_text(VALID)
    result = CliRunner().invoke(ebl_cli, ["check", str(path), "--manifest", "mobile_v1"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report["valid"] is True


def test_ebl_check_reports_errors(tmp_path):
    path = tmp_path / "bad.ebl"
    path.write_text(INVALID)
    result = CliRunner().invoke(ebl_cli, ["check", str(path), "--manifest", "mobile_v1"])
    assert result.exit_code == 1
    report = json.loads(result.output)
    assert report["errors"][0]["code"] == "UndefinedFunction"


def test_ebl_run_emits_trajectory(tmp_path):
    path = tmp_path / "nod.ebl"
    path.write_text(VALID)
    out = tmp_path / "traj.json"
    result = CliRunner().invoke(
        ebl_cli,
        ["run", str(path), "--manifest", "mobile_v1", "--scenario", "empty", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    trajectory = json.loads(out.read_text())
    assert trajectory["embodiment"] == "mobile_v1"
    assert trajectory["step_s"] == 0.1
    assert len(trajectory["frames"]) > 1


def test_genem_dist(tmp_path):
    nod = tmp_path / "nod.ebl"
    nod.write_text(VALID)
    slow = tmp_path / "slow.ebl"
    slow.write_text(VALID.replace("20deg", "40deg"))
    runner = CliRunner()
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert runner.invoke(
        ebl_cli, ["run", str(nod), "--manifest", "mobile_v1", "--out", str(a)]
    ).exit_code == 0
    assert runner.invoke(
        ebl_cli, ["run", str(slow), "--manifest", "mobile_v1", "--out", str(b)]
    ).exit_code == 0
    result = runner.invoke(genem_cli, ["dist", str(a), str(b)])
    assert result.exit_code == 0, result.output
    numbers = json.loads(result.output)
    assert set(numbers) == {"dtw", "event_edit", "total"}
    assert numbers["dtw"] > 0
    same = runner.invoke(genem_cli, ["dist", str(a), str(a)])
    assert json.loads(same.output)["total"] == 0


def test_genem_suite_feedback_cli(tmp_path):
    out = tmp_path / "report.json"
    result = CliRunner().invoke(
        genem_cli, ["suite", "feedback", "--backend", "replay", "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    assert "report hash:" in result.output
    report = json.loads(out.read_text())
    assert len(report["cells"]) == 12


def test_genem_suite_rejects_unknown_backend():
    result = CliRunner().invoke(genem_cli, ["suite", "behaviors", "--backend", "telnet"])
    assert result.exit_code != 0
