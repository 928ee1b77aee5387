"""Static scene description: geometric primitives tagged as environment or
manipulable objects.

Scene file (JSON)::

    {"objects": [
        {"name": "floor", "role": "Environment",
         "shape": {"type": "plane", "point": [0, 0, 0], "normal": [0, 0, 1]}},
        {"name": "step1", "role": "Environment",
         "shape": {"type": "box", "center": [...], "half_extents": [...],
                   "orientation": [w, x, y, z]}},
        {"name": "ball", "role": "Manipulable",
         "shape": {"type": "sphere", "center": [...], "radius": 0.1}},
        {"name": "handle", "role": "Environment",
         "shape": {"type": "capsule", "p0": [...], "p1": [...], "radius": 0.02}}
    ]}

A plane is the boundary of the solid half-space behind its normal. Box
orientation is a unit quaternion (scalar first) and defaults to identity.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Union

import numpy as np

from .errors import SceneError


def _vec3(value, what) -> np.ndarray:
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise SceneError(f"{what} must be three numbers") from None
    if arr.shape != (3,) or not np.isfinite(arr).all():
        raise SceneError(f"{what} must be three finite numbers")
    arr.setflags(write=False)
    return arr


def _unit(value, what) -> np.ndarray:
    arr = np.array(_vec3(value, what))
    norm = np.linalg.norm(arr)
    if norm < 1e-12:
        raise SceneError(f"{what} must be nonzero")
    arr = arr / norm
    arr.setflags(write=False)
    return arr


def _positive(value, what) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value) \
            or value <= 0:
        raise SceneError(f"{what} must be a positive number, got {value!r}")
    return float(value)


def quaternion_matrix(q) -> np.ndarray:
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
        [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
        [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
    ])


@dataclass(frozen=True, eq=False)
class Plane:
    point: np.ndarray
    normal: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", _vec3(self.point, "plane point"))
        object.__setattr__(self, "normal", _unit(self.normal, "plane normal"))

    def to_dict(self):
        return {"type": "plane", "point": self.point.tolist(), "normal": self.normal.tolist()}


@dataclass(frozen=True, eq=False)
class Box:
    center: np.ndarray
    half_extents: np.ndarray
    orientation: np.ndarray = (1.0, 0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "center", _vec3(self.center, "box center"))
        half = _vec3(self.half_extents, "box half_extents")
        if (half <= 0).any():
            raise SceneError(f"box half_extents must be positive, got {half.tolist()}")
        object.__setattr__(self, "half_extents", half)
        q = np.array(self.orientation, dtype=float)
        if q.shape != (4,) or not np.isfinite(q).all() or np.linalg.norm(q) < 1e-12:
            raise SceneError("box orientation must be a nonzero quaternion [w, x, y, z]")
        q = q / np.linalg.norm(q)
        q.setflags(write=False)
        object.__setattr__(self, "orientation", q)

    @property
    def rotation(self) -> np.ndarray:
        """Box-to-world rotation matrix."""
        return quaternion_matrix(self.orientation)

    def to_dict(self):
        return {
            "type": "box",
            "center": self.center.tolist(),
            "half_extents": self.half_extents.tolist(),
            "orientation": self.orientation.tolist(),
        }


@dataclass(frozen=True, eq=False)
class Sphere:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _vec3(self.center, "sphere center"))
        object.__setattr__(self, "radius", _positive(self.radius, "sphere radius"))

    def to_dict(self):
        return {"type": "sphere", "center": self.center.tolist(), "radius": self.radius}


@dataclass(frozen=True, eq=False)
class Capsule:
    p0: np.ndarray
    p1: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "p0", _vec3(self.p0, "capsule p0"))
        object.__setattr__(self, "p1", _vec3(self.p1, "capsule p1"))
        object.__setattr__(self, "radius", _positive(self.radius, "capsule radius"))

    def to_dict(self):
        return {
            "type": "capsule",
            "p0": self.p0.tolist(),
            "p1": self.p1.tolist(),
            "radius": self.radius,
        }


Primitive = Union[Plane, Box, Sphere, Capsule]


class Role(str, Enum):
    ENVIRONMENT = "Environment"
    MANIPULABLE = "Manipulable"


@dataclass(frozen=True)
class SceneObject:
    name: str
    role: Role
    shape: Primitive

    def to_dict(self):
        return {"name": self.name, "role": self.role.value, "shape": self.shape.to_dict()}


def _parse_shape(raw, where) -> Primitive:
    if not isinstance(raw, Mapping) or "type" not in raw:
        raise SceneError(f"{where}: shape needs a 'type'")
    kind = raw["type"]
    fields = {
        "plane": (Plane, ("point", "normal"), ()),
        "box": (Box, ("center", "half_extents"), ("orientation",)),
        "sphere": (Sphere, ("center", "radius"), ()),
        "capsule": (Capsule, ("p0", "p1", "radius"), ()),
    }
    if kind not in fields:
        raise SceneError(f"{where}: unknown shape type {kind!r}")
    cls, required, optional = fields[kind]
    missing = [k for k in required if k not in raw]
    if missing:
        raise SceneError(f"{where}: {kind} is missing {missing}")
    kwargs = {k: raw[k] for k in required + optional if k in raw}
    try:
        return cls(**kwargs)
    except SceneError as exc:
        raise SceneError(f"{where}: {exc}") from None


def make_scene(objects) -> tuple[SceneObject, ...]:
    """Freeze a sequence of SceneObjects, rejecting duplicate names."""
    objects = tuple(objects)
    seen = set()
    for obj in objects:
        if obj.name in seen:
            raise SceneError(f"duplicate object name {obj.name!r}")
        seen.add(obj.name)
    return objects


def parse_scene(content: str | bytes | Mapping) -> list[SceneObject]:
    if isinstance(content, (str, bytes)):
        try:
            doc = json.loads(content)
        except json.JSONDecodeError as exc:
            raise SceneError(f"line {exc.lineno}: {exc.msg}") from None
    else:
        doc = content
    if not isinstance(doc, Mapping) or not isinstance(doc.get("objects"), list):
        raise SceneError("scene file must be an object with an 'objects' list")
    objects = []
    for i, raw in enumerate(doc["objects"]):
        where = f"objects[{i}]"
        if not isinstance(raw, Mapping):
            raise SceneError(f"{where}: must be an object")
        name = raw.get("name")
        if not isinstance(name, str) or not name:
            raise SceneError(f"{where}: 'name' must be a nonempty string")
        try:
            role = Role(raw.get("role", Role.ENVIRONMENT.value))
        except ValueError:
            raise SceneError(f"{where}: unknown role {raw.get('role')!r}") from None
        objects.append(SceneObject(name, role, _parse_shape(raw.get("shape"), f"{where} ({name})")))
    return list(make_scene(objects))


def serialize_scene(objects, indent: int | None = 2) -> str:
    return json.dumps({"objects": [o.to_dict() for o in objects]}, indent=indent)


def load_scene(path) -> list[SceneObject]:
    with open(path, encoding="utf-8") as fh:
        return parse_scene(fh.read())
