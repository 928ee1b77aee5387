"""Regenerate the committed fixtures under fixtures/.

For each synthetic motion this writes ``<name>.motion.json``,
``<name>.scene.json`` and ``<name>.truth.json`` (the expected support-set
sequence). Output is deterministic; rerunning must not change any file.

    python3 tools/make_fixtures.py [--out fixtures]
"""
import argparse
import json
from pathlib import Path

from supportpose.motion import serialize_motion
from supportpose.scene import serialize_scene
from supportpose.synth import FIXTURES


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=Path(__file__).resolve().parents[1] / "fixtures", type=Path)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, build in FIXTURES.items():
        motion, scene, truth = build()
        (args.out / f"{name}.motion.json").write_text(serialize_motion(motion) + "\n")
        (args.out / f"{name}.scene.json").write_text(serialize_scene(scene) + "\n")
        (args.out / f"{name}.truth.json").write_text(
            json.dumps({"supports": truth}, indent=2) + "\n"
        )
        print(f"{name}: {motion.frame_count} frames, {len(truth)} support phases")


if __name__ == "__main__":
    main()
