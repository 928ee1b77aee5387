"""Synthetic motions with known support sequences.

Each builder returns ``(motion, scene, truth)`` where ``truth`` is the
expected sequence of support sets as ``{end_effector: object_name}`` dicts.
Limb moves follow minimum-jerk profiles; swing phases add a vertical lift.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .motion import MotionSequence
from .scene import Box, Capsule, Plane, Role, SceneObject, make_scene


def minimum_jerk(u):
    u = np.clip(u, 0.0, 1.0)
    return u ** 3 * (10 - 15 * u + 6 * u * u)


@dataclass
class Track:
    """Piecewise trajectory: stationary between scheduled moves."""

    start: np.ndarray
    moves: list = field(default_factory=list)

    def __post_init__(self):
        self.start = np.asarray(self.start, dtype=float)

    @property
    def end(self) -> np.ndarray:
        return self.moves[-1][3] if self.moves else self.start

    def move(self, t0, t1, target, lift=0.0, via=None):
        """Go to *target* between t0 and t1, bulging by *lift* m (along *via*, default +z)."""
        if self.moves and t0 < self.moves[-1][1]:
            raise ValueError("moves must not overlap")
        direction = np.array([0.0, 0.0, 1.0]) if via is None else np.asarray(via, dtype=float)
        self.moves.append((t0, t1, self.end, np.asarray(target, dtype=float), lift, direction))
        return self

    def sample(self, times) -> np.ndarray:
        times = np.asarray(times, dtype=float)
        out = np.tile(self.start, (len(times), 1))
        for t0, t1, p0, p1, lift, direction in self.moves:
            s = minimum_jerk((times - t0) / (t1 - t0))
            active = times >= t0
            pos = p0 + s[:, None] * (p1 - p0) + (lift * np.sin(np.pi * s))[:, None] * direction
            out[active] = pos[active]
        return out


def _motion(tracks: dict, duration: float, frame_rate: float, noise: float, seed: int):
    n = int(round(duration * frame_rate))
    times = np.arange(n) / frame_rate
    rng = np.random.default_rng(seed)
    data = {}
    for name, track in tracks.items():
        pos = track.sample(times) if isinstance(track, Track) else track(times)
        if noise:
            pos = pos + rng.normal(0.0, noise, pos.shape)
        data[name] = np.round(pos, 6)
    return MotionSequence(frame_rate, data)


def _stair(name, x0, x1, top, width=0.6):
    return SceneObject(name, Role.ENVIRONMENT, Box(
        center=[(x0 + x1) / 2, 0.0, top / 2], half_extents=[(x1 - x0) / 2, width, top / 2]
    ))


SOLE = 0.005  # foot marker height above the supporting surface


def stair_walk(noise: float = 0.001, seed: int = 7):
    """Four steps up three stairs holding a rail on the right.

    The right hand grips the rail while the right foot is the stance foot
    and lets go while the left foot carries the body; at the end it grips
    again during the final left stance, and both feet finish on the top
    step. 5.5 s at 100 Hz.
    """
    rise, tread = 0.17, 0.30
    scene = make_scene([
        SceneObject("floor", Role.ENVIRONMENT, Plane([0, 0, 0], [0, 0, 1])),
        _stair("stair1", 0.30, 0.60, rise),
        _stair("stair2", 0.60, 0.90, 2 * rise),
        _stair("stair3", 0.90, 1.50, 3 * rise),
        SceneObject("handle", Role.ENVIRONMENT, Capsule(
            [0.0, -0.45, 0.85], [1.5, -0.45, 0.85 + 1.5 * rise / tread], 0.02
        )),
    ])

    def rail(x):
        # grip point 5 mm outside the rail surface
        return [x, -0.45, 0.85 + x * rise / tread + 0.025]

    ry, ly = -0.12, 0.12
    rf = Track([0.10, ry, SOLE])
    lf = Track([0.10, ly, SOLE])
    lf.move(1.15, 1.70, [0.45, ly, rise + SOLE], lift=0.10)
    rf.move(2.05, 2.60, [0.75, ry, 2 * rise + SOLE], lift=0.12)
    lf.move(3.20, 3.70, [1.10, ly, 3 * rise + SOLE], lift=0.12)
    rf.move(3.95, 4.60, [1.10, ry, 3 * rise + SOLE], lift=0.10)

    rh = Track([0.15, -0.30, 0.80])
    rh.move(0.35, 0.75, rail(0.35))
    rh.move(1.45, 3.05, rail(0.75), lift=0.10)
    rh.move(3.40, 4.25, rail(1.15), lift=0.10)
    rh.move(5.00, 5.35, [1.20, -0.30, 0.51 + 0.80])

    def torso(times):
        return (rf.sample(times) + lf.sample(times)) / 2 + [0.0, 0.0, 1.0]

    def left_hand(times):
        return torso(times) + [0.0, 0.30, -0.22]

    motion = _motion(
        {"RightFoot": rf, "LeftFoot": lf, "RightHand": rh, "LeftHand": left_hand, "Torso": torso},
        duration=5.5, frame_rate=100.0, noise=noise, seed=seed,
    )
    F, S1, S2, S3, H = "floor", "stair1", "stair2", "stair3", "handle"
    truth = [
        {"RightFoot": F, "LeftFoot": F},
        {"RightFoot": F, "LeftFoot": F, "RightHand": H},
        {"RightFoot": F, "RightHand": H},
        {"RightFoot": F},
        {"RightFoot": F, "LeftFoot": S1},
        {"LeftFoot": S1},
        {"RightFoot": S2, "LeftFoot": S1},
        {"RightFoot": S2, "LeftFoot": S1, "RightHand": H},
        {"RightFoot": S2, "RightHand": H},
        {"RightFoot": S2},
        {"RightFoot": S2, "LeftFoot": S3},
        {"LeftFoot": S3},
        {"LeftFoot": S3, "RightHand": H},
        {"RightFoot": S3, "LeftFoot": S3, "RightHand": H},
        {"RightFoot": S3, "LeftFoot": S3},
    ]
    return motion, list(scene), truth


def crate_push(noise: float = 0.001, seed: int = 11):
    """Both palms pressed on a heavy crate while the feet step in place.

    Supports alternate between two feet + two palms and one foot + two
    palms; the palms rest on a Manipulable object the whole time, so every
    hand contact is used for balance and for acting on the crate. 4 s.
    """
    scene = make_scene([
        SceneObject("floor", Role.ENVIRONMENT, Plane([0, 0, 0], [0, 0, 1])),
        SceneObject("crate", Role.MANIPULABLE, Box([0.80, 0.0, 0.45], [0.20, 0.40, 0.45])),
    ])
    face = 0.60 - 0.005
    rh = Track([face, -0.20, 0.85])
    lh = Track([face, 0.20, 0.85])
    rf = Track([0.00, -0.12, SOLE])
    lf = Track([0.00, 0.12, SOLE])
    rf.move(0.70, 1.25, [0.10, -0.12, SOLE], lift=0.08)
    lf.move(1.75, 2.30, [0.10, 0.12, SOLE], lift=0.08)
    rf.move(2.80, 3.35, [0.15, -0.12, SOLE], lift=0.08)

    def torso(times):
        return (rf.sample(times) + lf.sample(times)) / 2 + [0.05, 0.0, 1.0]

    def com(times):
        return torso(times) - [0.0, 0.0, 0.05]

    motion = _motion(
        {"RightFoot": rf, "LeftFoot": lf, "RightHand": rh, "LeftHand": lh,
         "Torso": torso, "CoM": com},
        duration=4.0, frame_rate=100.0, noise=noise, seed=seed,
    )
    hands = {"RightHand": "crate", "LeftHand": "crate"}
    truth = [
        {"RightFoot": "floor", "LeftFoot": "floor", **hands},
        {"LeftFoot": "floor", **hands},
        {"RightFoot": "floor", "LeftFoot": "floor", **hands},
        {"RightFoot": "floor", **hands},
        {"RightFoot": "floor", "LeftFoot": "floor", **hands},
        {"LeftFoot": "floor", **hands},
        {"RightFoot": "floor", "LeftFoot": "floor", **hands},
    ]
    return motion, list(scene), truth


def kick(noise: float = 0.001, seed: int = 3):
    """Stand, kick a red box with the left foot, put the foot back. 3 s."""
    scene = make_scene([
        SceneObject("floor", Role.ENVIRONMENT, Plane([0, 0, 0], [0, 0, 1])),
        SceneObject("redbox", Role.MANIPULABLE, Box([0.45, 0.12, 0.10], [0.10, 0.10, 0.10])),
    ])
    rf = Track([0.0, -0.12, SOLE])
    lf = Track([0.0, 0.12, SOLE])
    lf.move(1.00, 1.55, [0.70, 0.12, 0.15])
    lf.move(1.55, 2.25, [0.0, 0.12, SOLE], lift=0.35)

    def torso(times):
        return np.tile([0.0, 0.0, 1.0], (len(times), 1))

    motion = _motion(
        {"RightFoot": rf, "LeftFoot": lf,
         "RightHand": Track([0.0, -0.30, 0.80]), "LeftHand": Track([0.0, 0.30, 0.80]),
         "Torso": torso},
        duration=3.0, frame_rate=100.0, noise=noise, seed=seed,
    )
    truth = [
        {"RightFoot": "floor", "LeftFoot": "floor"},
        {"RightFoot": "floor"},
        {"RightFoot": "floor", "LeftFoot": "floor"},
    ]
    return motion, list(scene), truth


FIXTURES = {
    "stair_walk": stair_walk,
    "crate_push": crate_push,
    "kick": kick,
}
