import json
import subprocess
import sys

import pytest

from supportpose.cli import main
from supportpose.taxonomy import default_taxonomy_text

from conftest import FIXTURES, fixture_paths


def run(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(capsys):
    assert run(["taxonomy", "validate"], capsys) == (0, "46 classes, 0 violations\n", "")


def test_classify(capsys):
    code, out, _ = run(["taxonomy", "classify", "--supports", "Leg:Foot,Leg:Foot"], capsys)
    assert (code, out) == (0, "2.3\n")
    code, out, _ = run(["taxonomy", "classify", "--supports", "Arm:Palm, Leg:Foot, Leg:Foot"], capsys)
    assert (code, out) == (0, "3.4\n")


def test_classify_unknown_and_malformed(capsys):
    code, _, err = run(["taxonomy", "classify", "--supports", "Leg:Foot,Arm:Hold,Arm:ArmLine"], capsys)
    assert code == 1 and "no taxonomy class" in err
    code, _, err = run(["taxonomy", "classify", "--supports", "Leg-Foot"], capsys)
    assert code == 1 and "Limb:ContactType" in err


def test_neighbors(capsys):
    code, out, _ = run(["taxonomy", "neighbors", "2.3"], capsys)
    assert code == 0 and "1.1" in out.split()
    code, out, err = run(["taxonomy", "neighbors", "5.5"], capsys)
    assert code == 1 and "unknown class id '5.5'" in err


def test_export_and_override(tmp_path, capsys):
    out_file = tmp_path / "t.json"
    assert run(["taxonomy", "export", "--out", str(out_file)], capsys)[0] == 0
    assert json.loads(out_file.read_text()) == json.loads(default_taxonomy_text())

    doc = json.loads(out_file.read_text())
    entry = next(c for c in doc["classes"] if c["id"] == "1.1")
    entry["neighbors"].remove("2.3")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run(["--taxonomy-file", str(bad), "taxonomy", "validate"], capsys)
    assert code == 1
    assert out.splitlines()[0] == "46 classes, 1 violations"
    assert "[symmetry]" in out
    code, _, err = run(["--taxonomy-file", str(bad), "taxonomy", "neighbors", "2.3"], capsys)
    assert code == 1 and "violation" in err


@pytest.mark.parametrize("argv", [
    [],
    ["taxonomy"],
    ["taxonomy", "classify"],
    ["taxonomy", "validate", "--bogus"],
    ["segment", "--motion", "m.json"],
    ["speeds", "--motion", "m.json", "--cutoff-hz", "fast"],
    ["dance"],
])
def test_usage_errors(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2
    assert "usage:" in err


@pytest.mark.parametrize("argv", [
    [], ["taxonomy"], ["taxonomy", "validate"], ["taxonomy", "neighbors"],
    ["taxonomy", "classify"], ["taxonomy", "export"], ["speeds"], ["segment"],
    ["graph"], ["actions"],
])
def test_help(argv, capsys):
    code, out, _ = run(argv + ["--help"], capsys)
    assert code == 0 and out.startswith("usage:")


def test_segment_graph_actions(tmp_path, capsys):
    motion, scene = fixture_paths("stair_walk")
    report = tmp_path / "r.json"
    code, out, _ = run(["segment", "--motion", str(motion), "--scene", str(scene), "--out", str(report)], capsys)
    assert code == 0 and out.startswith("15 segments: 2.3 ")
    doc = json.loads(report.read_text())
    assert doc["segments"][0]["class_id"] == doc["segments"][-1]["class_id"] == "2.3"
    assert doc["config"]["cutoff_hz"] == 1.5 and doc["config"]["speed_threshold"] == 0.15
    assert doc["config"]["contact_epsilon"] == 0.02

    dot, stats = tmp_path / "g.dot", tmp_path / "s.json"
    code, out, _ = run(["graph", "--report", str(report), "--out", str(dot), "--stats", str(stats)], capsys)
    assert code == 0 and "4 steps" in out
    assert dot.read_text().startswith('digraph "transitions" {')
    assert json.loads(stats.read_text())["step_count"] == 4

    acts = tmp_path / "a.json"
    code, out, _ = run(["actions", "--report", str(report), "--motion", str(motion),
                        "--scene", str(scene), "--out", str(acts)], capsys)
    assert (code, out) == (0, "II\n")


def test_segment_overrides_are_echoed(tmp_path, capsys):
    motion, scene = fixture_paths("kick")
    report = tmp_path / "r.json"
    code, _, err = run(["segment", "--motion", str(motion), "--scene", str(scene), "--threshold", "0.2",
                        "--contact-eps", "0.03", "--cutoff-hz", "2.0", "--min-frames", "400",
                        "--out", str(report)], capsys)
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc["config"] == {"cutoff_hz": 2.0, "speed_threshold": 0.2,
                             "contact_epsilon": 0.03, "min_segment_frames": 400}
    assert len(doc["segments"]) == 1
    assert "warning:" in err and "merged" in err


def test_speeds(tmp_path, capsys):
    motion, _ = fixture_paths("kick")
    code, out, _ = run(["speeds", "--motion", str(motion)], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "frame,RightFoot,LeftFoot,RightHand,LeftHand"
    assert len(lines) == 301


def test_bad_inputs_exit_1(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    code, _, err = run(["speeds", "--motion", str(missing)], capsys)
    assert code == 1 and err.startswith("error:")
    broken = tmp_path / "m.json"
    broken.write_text('{"frame_rate": 100, "trajectories": {}}')
    code, _, err = run(["speeds", "--motion", str(broken)], capsys)
    assert code == 1 and "RightFoot" in err
    scene = FIXTURES / "kick.scene.json"
    code, _, err = run(["segment", "--motion", str(FIXTURES / "kick.motion.json"), "--scene", str(scene),
                        "--threshold", "-1", "--out", str(tmp_path / "r.json")], capsys)
    assert code == 1 and "speed_threshold" in err
    code, _, err = run(["graph", "--report", str(scene), "--out", str(tmp_path / "g.dot")], capsys)
    assert code == 1 and "malformed" in err


def test_actions_frame_mismatch(tmp_path, capsys):
    kick_m, kick_s = fixture_paths("kick")
    stair_m, _ = fixture_paths("stair_walk")
    report = tmp_path / "r.json"
    run(["segment", "--motion", str(kick_m), "--scene", str(kick_s), "--out", str(report)], capsys)
    code, _, err = run(["actions", "--report", str(report), "--motion", str(stair_m),
                        "--scene", str(kick_s), "--out", str(tmp_path / "a.json")], capsys)
    assert code == 1 and "frames" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "supportpose", "taxonomy", "validate"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "46 classes, 0 violations\n"
