"""Split a segmented motion into manipulation (I), locomotion (II) and
combined loco-manipulation (III) actions.

Manipulation contacts are proximity runs between any tracked body part and
a Manipulable scene object. A run is *dual use* when the body part is also
supporting the body on that same object.
"""
from __future__ import annotations

import bisect
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .contact import distance_to
from .motion import MotionSequence
from .scene import Role
from .segmentation import (
    FrameSupport,
    PipelineConfig,
    SegmentReport,
    detect_supports,
    ordered_segments,
)

TYPE_I, TYPE_II, TYPE_III = "I", "II", "III"


@dataclass(frozen=True)
class ManipulationContact:
    start: int  # inclusive frame
    end: int  # exclusive frame
    segment: str
    object: str
    dual_use: bool

    def to_dict(self) -> dict:
        return {
            "start": self.start,
            "end": self.end,
            "segment": self.segment,
            "object": self.object,
            "dual_use": self.dual_use,
        }


@dataclass(frozen=True)
class ActionSpan:
    first_segment: int
    end_segment: int  # exclusive
    type: str
    contacts: tuple[ManipulationContact, ...]
    transitions: int

    @property
    def segment_count(self) -> int:
        return self.end_segment - self.first_segment

    def to_dict(self, report: SegmentReport | None = None) -> dict:
        d = {
            "type": self.type,
            "segments": [self.first_segment, self.end_segment],
            "transitions": self.transitions,
            "contacts": [c.to_dict() for c in self.contacts],
        }
        if report is not None:
            segs = report.segments[self.first_segment:self.end_segment]
            d["frames"] = [segs[0].start, segs[-1].end]
            d["class_ids"] = [s.class_id for s in segs]
        return d


def _runs(mask: np.ndarray, values: np.ndarray):
    """Yield (start, end, value) for maximal runs where mask holds and value is constant."""
    n = len(mask)
    i = 0
    while i < n:
        if not mask[i]:
            i += 1
            continue
        j = i + 1
        while j < n and mask[j] and values[j] == values[i]:
            j += 1
        yield i, j, bool(values[i])
        i = j


def detect_manipulation_contacts(motion: MotionSequence, scene: Sequence,
                                 config: PipelineConfig = PipelineConfig(),
                                 frames: Sequence[FrameSupport] | None = None
                                 ) -> list[ManipulationContact]:
    movable = [o for o in scene if o.role is Role.MANIPULABLE]
    if not movable:
        return []
    if frames is None:
        frames = detect_supports(motion, scene, config)
    found = []
    for seg_name in ordered_segments(motion.body_segments()):
        track = motion[seg_name]
        for obj in movable:
            near = distance_to(track, obj.shape)[0] <= config.contact_epsilon
            if not near.any():
                continue
            supporting = np.array([
                (hit := fs.supports.get(seg_name)) is not None and hit.object_name == obj.name
                for fs in frames
            ])
            for start, end, dual in _runs(near, supporting):
                found.append(ManipulationContact(start, end, seg_name, obj.name, dual))
    order = {name: i for i, name in enumerate(ordered_segments(motion.body_segments()))}
    objs = {o.name: i for i, o in enumerate(movable)}
    found.sort(key=lambda c: (c.start, order[c.segment], objs[c.object]))
    return found


def classify_actions(report: SegmentReport,
                     contacts: Sequence[ManipulationContact]) -> list[ActionSpan]:
    """Type each segment, then group consecutive segments into spans.

    A segment is type III when it overlaps a dual-use contact or a contact
    that spans a support transition, type I when it only holds contacts that
    begin and end inside it, and type II otherwise. Consecutive II or III
    segments form one span; each type-I segment is a span of its own since
    a manipulation action keeps a single support class.
    """
    segs = report.segments
    starts = [s.start for s in segs]

    def seg_index(frame):
        return bisect.bisect_right(starts, frame) - 1

    touching = [[] for _ in segs]
    combined = [False] * len(segs)
    for c in contacts:
        first, last = seg_index(c.start), seg_index(c.end - 1)
        for i in range(first, last + 1):
            touching[i].append(c)
            if c.dual_use or last > first:
                combined[i] = True
    kinds = [
        TYPE_III if combined[i] else TYPE_I if touching[i] else TYPE_II
        for i in range(len(segs))
    ]

    spans = []
    i = 0
    while i < len(segs):
        j = i + 1
        if kinds[i] != TYPE_I:
            while j < len(segs) and kinds[j] == kinds[i]:
                j += 1
        evidence = []
        for k in range(i, j):
            evidence.extend(c for c in touching[k] if c not in evidence)
        spans.append(ActionSpan(i, j, kinds[i], tuple(evidence), j - i - 1))
        i = j
    return spans


def actions_json(report: SegmentReport, contacts, spans) -> str:
    doc = {
        "spans": [s.to_dict(report) for s in spans],
        "contacts": [c.to_dict() for c in contacts],
    }
    return json.dumps(doc, indent=2) + "\n"
