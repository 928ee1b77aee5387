"""Motion sequences: named 3D position tracks sampled at a fixed frame rate.

File format (JSON)::

    {"frame_rate": 100.0,
     "trajectories": {"RightFoot": [[x, y, z], ...], ...}}

Positions are meters, frame_rate is Hz. An optional ``frame_count`` key is
checked against the track lengths when present.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import LengthMismatchError, MotionFormatError, NonFiniteError, ShortMotionError

END_EFFECTORS = ("RightFoot", "LeftFoot", "RightHand", "LeftHand")
OPTIONAL_TRACKS = ("Torso", "CoM", "RightKnee", "LeftKnee")

SHORT_NAMES = {
    "RightFoot": "RF",
    "LeftFoot": "LF",
    "RightHand": "RH",
    "LeftHand": "LH",
    "RightKnee": "RK",
    "LeftKnee": "LK",
    "Torso": "T",
}


@dataclass(frozen=True)
class MotionSequence:
    frame_rate: float
    trajectories: Mapping[str, np.ndarray]

    def __post_init__(self):
        if not (isinstance(self.frame_rate, (int, float)) and math.isfinite(self.frame_rate)
                and self.frame_rate > 0):
            raise MotionFormatError(f"frame_rate must be a positive number, got {self.frame_rate!r}")
        missing = [n for n in END_EFFECTORS if n not in self.trajectories]
        if missing:
            raise MotionFormatError(
                f"missing trajectories {missing}; required names are {list(END_EFFECTORS)}"
            )
        tracks = {}
        for name, values in self.trajectories.items():
            arr = np.array(values, dtype=float)
            if arr.ndim != 2 or arr.shape[1] != 3:
                raise MotionFormatError(f"trajectory {name!r} must be a list of [x, y, z] triples")
            arr.setflags(write=False)
            tracks[name] = arr
        n = len(tracks[END_EFFECTORS[0]])
        for name, arr in tracks.items():
            if len(arr) != n:
                raise LengthMismatchError(
                    f"trajectory {name!r} has {len(arr)} frames, expected {n}"
                )
            bad = np.flatnonzero(~np.isfinite(arr).all(axis=1))
            if bad.size:
                raise NonFiniteError(f"trajectory {name!r} has a non-finite value at frame {bad[0]}")
        if n < 2:
            raise ShortMotionError(f"a motion needs at least 2 frames, got {n}")
        object.__setattr__(self, "frame_rate", float(self.frame_rate))
        object.__setattr__(self, "trajectories", MappingProxyType(tracks))

    @property
    def frame_count(self) -> int:
        return len(self.trajectories[END_EFFECTORS[0]])

    @property
    def duration(self) -> float:
        return self.frame_count / self.frame_rate

    def __getitem__(self, name: str) -> np.ndarray:
        return self.trajectories[name]

    def com_track(self) -> np.ndarray | None:
        """CoM track, falling back to Torso; None when neither was recorded."""
        for name in ("CoM", "Torso"):
            if name in self.trajectories:
                return self.trajectories[name]
        return None

    def body_segments(self) -> list[str]:
        """Tracked body parts that may touch objects (everything but the CoM)."""
        return [n for n in self.trajectories if n != "CoM"]

    def to_dict(self) -> dict:
        return {
            "frame_rate": self.frame_rate,
            "frame_count": self.frame_count,
            "trajectories": {name: arr.tolist() for name, arr in self.trajectories.items()},
        }


def parse_motion(content: str | bytes | Mapping) -> MotionSequence:
    """Parse and validate a motion document (JSON text or an already-decoded dict)."""
    if isinstance(content, (str, bytes)):
        try:
            doc = json.loads(content)
        except json.JSONDecodeError as exc:
            raise MotionFormatError(f"line {exc.lineno}: {exc.msg}") from None
    else:
        doc = content
    if not isinstance(doc, Mapping):
        raise MotionFormatError("motion file must be a JSON object")
    for key in ("frame_rate", "trajectories"):
        if key not in doc:
            raise MotionFormatError(f"missing field {key!r}")
    trajectories = doc["trajectories"]
    if not isinstance(trajectories, Mapping):
        raise MotionFormatError("'trajectories' must map names to position lists")
    fr = doc["frame_rate"]
    if isinstance(fr, bool):
        raise MotionFormatError("frame_rate must be a number")
    for name, values in trajectories.items():
        if not isinstance(values, list) or not all(
            isinstance(p, list) and len(p) == 3
            and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in p)
            for p in values
        ):
            raise MotionFormatError(f"trajectory {name!r} must be a list of [x, y, z] number triples")
    motion = MotionSequence(fr, trajectories)
    declared = doc.get("frame_count")
    if declared is not None and declared != motion.frame_count:
        raise LengthMismatchError(
            f"frame_count says {declared} but trajectories have {motion.frame_count} frames"
        )
    return motion


def serialize_motion(motion: MotionSequence, indent: int | None = None) -> str:
    return json.dumps(motion.to_dict(), indent=indent)


def load_motion(path) -> MotionSequence:
    with open(path, encoding="utf-8") as fh:
        return parse_motion(fh.read())
