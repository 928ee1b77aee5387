from pathlib import Path

import pytest

from supportpose.motion import load_motion
from supportpose.scene import load_scene
from supportpose.segmentation import run_pipeline

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
FIXTURE_NAMES = ("stair_walk", "crate_push", "kick")

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE_RESULTS = {}


def fixture_paths(name):
    return FIXTURES / f"{name}.motion.json", FIXTURES / f"{name}.scene.json"


@pytest.fixture(scope="session")
def fixture_data():
    """name -> (motion, scene, labeled report) for every committed fixture."""
    out = {}
    for name in FIXTURE_NAMES:
        motion_path, scene_path = fixture_paths(name)
        motion, scene = load_motion(motion_path), load_scene(scene_path)
        out[name] = (motion, scene, run_pipeline(motion, scene))
    return out


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
