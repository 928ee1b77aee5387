"""Support detection and support-pose segmentation of a motion.

Pipeline: low-pass filter -> differentiate -> speed -> per-frame support
sets -> segments at support-set changes -> taxonomy labels.

An end-effector supports the body at a frame when its filtered speed is
below ``speed_threshold`` *and* it lies within ``contact_epsilon`` of a scene
object. Speed wins over proximity: a hand sliding along a rail is close
to it but is not a support.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

from .contact import ContactHit, probe_track
from .errors import ReportFormatError, UnknownPose
from .motion import END_EFFECTORS, SHORT_NAMES, MotionSequence
from .signals import FilterSpec, speed_traces
from .taxonomy import ContactType, TaxonomyGraph, collapse_sides, default_taxonomy

UNCLASSIFIED = "unclassified"

_SEGMENT_ORDER = {name: i for i, name in enumerate(
    END_EFFECTORS + ("RightKnee", "LeftKnee", "Torso")
)}


def ordered_segments(names):
    return sorted(names, key=lambda n: (_SEGMENT_ORDER.get(n, len(_SEGMENT_ORDER)), n))


@dataclass(frozen=True)
class PipelineConfig:
    cutoff_hz: float = 1.5
    speed_threshold: float = 0.15
    contact_epsilon: float = 0.02
    min_segment_frames: int = 1

    def __post_init__(self):
        for name in ("cutoff_hz", "speed_threshold", "contact_epsilon"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
                raise ValueError(f"{name} must be positive, got {value!r}")
        if isinstance(self.min_segment_frames, bool) or not isinstance(self.min_segment_frames, int) \
                or self.min_segment_frames < 1:
            raise ValueError(f"min_segment_frames must be an integer >= 1, got {self.min_segment_frames!r}")

    @property
    def filter_spec(self) -> FilterSpec:
        return FilterSpec(self.cutoff_hz)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: Mapping) -> "PipelineConfig":
        known = {k: d[k] for k in ("cutoff_hz", "speed_threshold", "contact_epsilon",
                                   "min_segment_frames") if k in d}
        return cls(**known)


@dataclass(frozen=True)
class FrameSupport:
    frame: int
    supports: Mapping[str, ContactHit]

    @property
    def key(self) -> frozenset[tuple[str, str]]:
        return frozenset((ee, hit.object_name) for ee, hit in self.supports.items())


@dataclass(frozen=True)
class SupportEntry:
    object: str
    contact_type: ContactType


@dataclass(frozen=True)
class Segment:
    start: int
    end: int
    supports: Mapping[str, SupportEntry] = field(default_factory=dict)
    class_id: str | None = None

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError(f"empty segment [{self.start}, {self.end})")
        object.__setattr__(self, "supports", MappingProxyType(
            {ee: self.supports[ee] for ee in ordered_segments(self.supports)}
        ))

    @property
    def length(self) -> int:
        return self.end - self.start

    @property
    def middle(self) -> int:
        return (self.start + self.end - 1) // 2

    @property
    def key(self) -> frozenset[tuple[str, str]]:
        return frozenset((ee, e.object) for ee, e in self.supports.items())

    @property
    def label(self) -> str:
        """Short limb label such as ``RF+LF+RH``; ``-`` for no support."""
        return "+".join(SHORT_NAMES.get(ee, ee) for ee in self.supports) or "-"

    def contact_types(self) -> dict[str, ContactType]:
        return {ee: e.contact_type for ee, e in self.supports.items()}

    def to_dict(self) -> dict:
        return {
            "start": self.start,
            "end": self.end,
            "middle": self.middle,
            "length": self.length,
            "supports": {
                ee: {"object": e.object, "contact_type": e.contact_type.value}
                for ee, e in self.supports.items()
            },
            "class_id": self.class_id,
        }


@dataclass(frozen=True)
class SegmentReport:
    config: PipelineConfig
    frame_count: int
    segments: tuple[Segment, ...]
    warnings: tuple[str, ...] = ()

    @property
    def labeled(self) -> bool:
        return all(s.class_id is not None for s in self.segments)

    def class_ids(self) -> list[str | None]:
        return [s.class_id for s in self.segments]

    def boundaries(self) -> list[int]:
        return [s.start for s in self.segments[1:]]

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "frame_count": self.frame_count,
            "segments": [s.to_dict() for s in self.segments],
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: Mapping) -> "SegmentReport":
        try:
            segments = tuple(
                Segment(
                    int(s["start"]), int(s["end"]),
                    {ee: SupportEntry(v["object"], ContactType(v["contact_type"]))
                     for ee, v in s.get("supports", {}).items()},
                    s.get("class_id"),
                )
                for s in doc["segments"]
            )
            report = cls(
                PipelineConfig.from_dict(doc.get("config", {})),
                int(doc["frame_count"]),
                segments,
                tuple(doc.get("warnings", ())),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ReportFormatError(f"malformed segment report: {exc}") from None
        pos = 0
        for s in report.segments:
            if s.start != pos:
                raise ReportFormatError(f"segments do not partition the motion at frame {pos}")
            pos = s.end
        if pos != report.frame_count:
            raise ReportFormatError("segments do not cover every frame")
        return report

    @classmethod
    def from_json(cls, text: str) -> "SegmentReport":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ReportFormatError(f"line {exc.lineno}: {exc.msg}") from None
        return cls.from_dict(doc)


def detect_supports(motion: MotionSequence, scene: Sequence, config: PipelineConfig = PipelineConfig(),
                    speeds: Mapping | None = None) -> list[FrameSupport]:
    """Per-frame support sets for the four end-effectors.

    The first and last frame copy the decision of their interior neighbor,
    whose speed comes from central rather than one-sided differences.
    """
    if speeds is None:
        speeds = speed_traces(motion, config.filter_spec)
    hits = {
        ee: probe_track(motion[ee], scene, config.contact_epsilon, segment=ee)
        for ee in END_EFFECTORS
    }
    n = motion.frame_count
    decisions = []
    for f in range(n):
        decisions.append({
            ee: hits[ee][f] for ee in END_EFFECTORS
            if speeds[ee][f] < config.speed_threshold and hits[ee][f] is not None
        })
    if n >= 3:
        decisions[0] = decisions[1]
        decisions[-1] = decisions[-2]
    return [FrameSupport(f, MappingProxyType(d)) for f, d in enumerate(decisions)]


def changed_segments(a: Segment, b: Segment) -> list[str]:
    ees = set(a.supports) | set(b.supports)
    return ordered_segments(
        ee for ee in ees
        if (a.supports.get(ee) is None) != (b.supports.get(ee) is None)
        or (ee in a.supports and ee in b.supports and a.supports[ee] != b.supports[ee])
    )


def _coalesce(segs: list[Segment]) -> list[Segment]:
    out = []
    for s in segs:
        if out and out[-1].key == s.key:
            prev = out.pop()
            s = Segment(prev.start, s.end, prev.supports)
        out.append(s)
    return out


def segment(frames: Sequence[FrameSupport], config: PipelineConfig = PipelineConfig()) -> SegmentReport:
    """Split at every frame whose (end-effector, object) set differs from the previous frame."""
    if not frames:
        raise ValueError("cannot segment an empty frame list")
    segs = []
    start = 0
    for i in range(1, len(frames) + 1):
        if i == len(frames) or frames[i].key != frames[start].key:
            first = frames[start]
            segs.append(Segment(start, i, {
                ee: SupportEntry(hit.object_name, hit.contact_type)
                for ee, hit in first.supports.items()
            }))
            start = i

    warnings = []
    k = config.min_segment_frames
    while k > 1 and len(segs) > 1:
        idx = next((i for i, s in enumerate(segs) if s.length < k), None)
        if idx is None:
            break
        short = segs[idx]
        if idx == 0:
            nxt = segs[1]
            segs[0:2] = [Segment(short.start, nxt.end, nxt.supports)]
            into = "following"
        else:
            prev = segs[idx - 1]
            segs[idx - 1:idx + 1] = [Segment(prev.start, short.end, prev.supports)]
            into = "preceding"
        warnings.append(
            f"frame {short.start}: {short.length}-frame segment [{short.label}] merged into "
            f"{into} segment (min_segment_frames={k})"
        )
        segs = _coalesce(segs)

    for a, b in zip(segs, segs[1:]):
        changed = changed_segments(a, b)
        if len(changed) > 1:
            warnings.append(
                f"frame {b.start}: multi-change transition ({', '.join(changed)})"
            )
    return SegmentReport(config, len(frames), tuple(segs), tuple(warnings))


def label(report: SegmentReport, graph: TaxonomyGraph | None = None) -> SegmentReport:
    """Attach taxonomy class ids; unknown support combinations become "unclassified"."""
    graph = graph or default_taxonomy()
    segments = []
    warnings = list(report.warnings)
    for i, s in enumerate(report.segments):
        spec = collapse_sides(s.contact_types())
        try:
            cid = graph.classify(spec)
        except UnknownPose:
            cid = UNCLASSIFIED
            warnings.append(
                f"segment {i} [{s.start}, {s.end}): supports {spec} match no taxonomy class"
            )
        segments.append(Segment(s.start, s.end, s.supports, cid))
    return SegmentReport(report.config, report.frame_count, tuple(segments), tuple(warnings))


def run_pipeline(motion: MotionSequence, scene: Sequence, config: PipelineConfig = PipelineConfig(),
                 taxonomy: TaxonomyGraph | None = None) -> SegmentReport:
    frames = detect_supports(motion, scene, config)
    return label(segment(frames, config), taxonomy)
