"""Point-to-primitive distance queries and contact probing against a scene.

All distance functions accept a single point ``(3,)`` or a batch ``(N, 3)``
and return ``(distance, closest_point, normal)`` with matching leading
shape. Distances are unsigned and clamp to 0 inside solids; the normal is
the outward surface normal at the returned closest point.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import singledispatch

import numpy as np

from .errors import UnknownSegmentError
from .scene import Box, Capsule, Plane, SceneObject, Sphere
from .taxonomy import ContactType

DEFAULT_EPSILON = 0.02

_TINY = 1e-12
_UP = np.array([0.0, 0.0, 1.0])


def _batch(point):
    p = np.asarray(point, dtype=float)
    single = p.ndim == 1
    return np.atleast_2d(p), single


def _unbatch(single, dist, closest, normal):
    if single:
        return float(dist[0]), closest[0], normal[0]
    return dist, closest, normal


@singledispatch
def _distance(shape, points):
    raise TypeError(f"unsupported primitive {type(shape).__name__}")


@_distance.register
def _(shape: Plane, points):
    signed = (points - shape.point) @ shape.normal
    closest = points - signed[:, None] * shape.normal
    normal = np.broadcast_to(shape.normal, points.shape).copy()
    return np.maximum(signed, 0.0), closest, normal


@_distance.register
def _(shape: Sphere, points):
    v = points - shape.center
    length = np.linalg.norm(v, axis=1)
    direction = np.tile(_UP, (len(points), 1))
    away = length > _TINY
    direction[away] = v[away] / length[away, None]
    closest = shape.center + shape.radius * direction
    return np.maximum(length - shape.radius, 0.0), closest, direction


def _perpendicular(axis):
    axis = axis / np.linalg.norm(axis)
    helper = _UP if abs(axis @ _UP) < 0.9 else np.array([1.0, 0.0, 0.0])
    u = np.cross(axis, helper)
    return u / np.linalg.norm(u)


@_distance.register
def _(shape: Capsule, points):
    d = shape.p1 - shape.p0
    dd = d @ d
    if dd > _TINY:
        t = np.clip(((points - shape.p0) @ d) / dd, 0.0, 1.0)
        fallback = _perpendicular(d)
    else:
        t = np.zeros(len(points))
        fallback = _UP
    on_axis = shape.p0 + t[:, None] * d
    v = points - on_axis
    length = np.linalg.norm(v, axis=1)
    direction = np.tile(fallback, (len(points), 1))
    away = length > _TINY
    direction[away] = v[away] / length[away, None]
    closest = on_axis + shape.radius * direction
    return np.maximum(length - shape.radius, 0.0), closest, direction


@_distance.register
def _(shape: Box, points):
    rot = shape.rotation
    half = shape.half_extents
    local = (points - shape.center) @ rot
    clamped = np.clip(local, -half, half)
    delta = local - clamped
    dist = np.linalg.norm(delta, axis=1)
    outside = dist > _TINY

    closest_local = clamped.copy()
    normal_local = np.zeros_like(local)
    normal_local[outside] = delta[outside] / dist[outside, None]

    # inside or on the surface: snap to the nearest face
    inside = ~outside
    if inside.any():
        margin = half - np.abs(local[inside])
        axis = np.argmin(margin, axis=1)
        rows = np.flatnonzero(inside)
        sign = np.where(local[rows, axis] < 0, -1.0, 1.0)
        closest_local[rows, axis] = sign * half[axis]
        normal_local[rows, axis] = sign
        dist[inside] = 0.0

    closest = shape.center + closest_local @ rot.T
    normal = normal_local @ rot.T
    return dist, closest, normal


def distance_to(point, primitive):
    """Distance, closest surface point and outward normal for one point or a batch."""
    points, single = _batch(point)
    return _unbatch(single, *_distance(primitive, points))


@dataclass(frozen=True, eq=False)
class ContactHit:
    object: SceneObject
    distance: float
    point: np.ndarray
    normal: np.ndarray
    contact_type: ContactType | None = None

    @property
    def object_name(self) -> str:
        return self.object.name


def infer_contact_type(segment: str, hit: ContactHit) -> ContactType:
    """Feet give Foot, knees Knee; hands Hold on a capsule (handle), Palm elsewhere."""
    if segment in ("RightFoot", "LeftFoot"):
        return ContactType.FOOT
    if segment in ("RightKnee", "LeftKnee"):
        return ContactType.KNEE
    if segment in ("RightHand", "LeftHand"):
        return ContactType.HOLD if isinstance(hit.object.shape, Capsule) else ContactType.PALM
    raise UnknownSegmentError(segment)


def probe_track(points, scene, epsilon: float = DEFAULT_EPSILON, segment: str | None = None):
    """Nearest object within *epsilon* for every point of a track.

    Returns a list with one ContactHit (or None) per point. Equal distances
    go to the object declared first.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    points, _ = _batch(points)
    if not scene:
        return [None] * len(points)
    results = [_distance(obj.shape, points) for obj in scene]
    dists = np.stack([r[0] for r in results])
    masked = np.where(dists <= epsilon, dists, np.inf)
    best = np.argmin(masked, axis=0)
    hits = []
    for i, k in enumerate(best):
        if not np.isfinite(masked[k, i]):
            hits.append(None)
            continue
        hit = ContactHit(scene[k], float(dists[k, i]), results[k][1][i], results[k][2][i])
        if segment is not None:
            hit = ContactHit(hit.object, hit.distance, hit.point, hit.normal,
                             infer_contact_type(segment, hit))
        hits.append(hit)
    return hits


def probe(point, scene, epsilon: float = DEFAULT_EPSILON, segment: str | None = None):
    """Closest scene object within *epsilon* of a single point, or None."""
    return probe_track(np.asarray(point, dtype=float)[None, :], scene, epsilon, segment)[0]
