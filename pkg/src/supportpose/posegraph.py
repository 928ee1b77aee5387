"""Pose-transition multigraph of a segmented motion, with DOT export."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import EmptyReportError
from .segmentation import Segment, SegmentReport, changed_segments
from .taxonomy import ContactType, TaxonomyGraph, default_taxonomy, id_key

FOOT_COLORS = {"LeftFoot": "blue", "RightFoot": "red"}


@dataclass(frozen=True)
class TransitionEdge:
    source: str
    target: str
    order: int
    changed: tuple[str, ...]
    kind: str  # added | removed | retyped | multi

    @property
    def changed_label(self) -> str:
        return "+".join(self.changed)

    @property
    def foot(self) -> str | None:
        """The single foot this transition is about, if exactly one foot changed."""
        feet = [ee for ee in self.changed if ee in FOOT_COLORS]
        return feet[0] if len(feet) == 1 else None


@dataclass(frozen=True)
class Visit:
    class_id: str
    supports: tuple[tuple[str, ContactType], ...]
    length: int


@dataclass(frozen=True)
class TransitionGraph:
    nodes: frozenset[str]
    edges: tuple[TransitionEdge, ...]
    visits: tuple[Visit, ...] = field(default=())

    def sorted_nodes(self) -> list[str]:
        return sorted(self.nodes, key=lambda n: (id_key(n), n))


@dataclass(frozen=True)
class GraphStats:
    visit_counts: dict[str, int]
    step_count: int
    steps_per_foot: dict[str, int]
    compliance_ratio: float
    flagged_edges: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "visit_counts": self.visit_counts,
            "step_count": self.step_count,
            "steps_per_foot": self.steps_per_foot,
            "compliance_ratio": self.compliance_ratio,
            "flagged_edges": list(self.flagged_edges),
        }


def _change_kind(a: Segment, b: Segment, changed: list[str]) -> str:
    if len(changed) != 1:
        return "multi"
    ee = changed[0]
    if ee not in a.supports:
        return "added"
    if ee not in b.supports:
        return "removed"
    return "retyped"


def build_graph(report: SegmentReport) -> TransitionGraph:
    segs = report.segments
    if not segs:
        raise EmptyReportError("report has no segments")
    ids = [s.class_id if s.class_id is not None else "unlabeled" for s in segs]
    edges = []
    for k, (a, b) in enumerate(zip(segs, segs[1:]), start=1):
        changed = changed_segments(a, b)
        edges.append(TransitionEdge(ids[k - 1], ids[k], k, tuple(changed), _change_kind(a, b, changed)))
    visits = tuple(
        Visit(cid, tuple((ee, e.contact_type) for ee, e in s.supports.items()), s.length)
        for cid, s in zip(ids, segs)
    )
    return TransitionGraph(frozenset(ids), tuple(edges), visits)


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: TransitionGraph, name: str = "transitions", show_changes: bool = False) -> str:
    """Render as a DOT digraph. Edge labels are transition orders; edges
    about the left foot are blue, the right foot red."""
    lines = [f"digraph {_quote(name)} {{"]
    for node in graph.sorted_nodes():
        lines.append(f"  {_quote(node)};")
    for e in graph.edges:
        attrs = [f"label={_quote(str(e.order))}"]
        color = FOOT_COLORS.get(e.foot)
        if color:
            attrs.append(f"color={color}")
        if show_changes:
            attrs.append(f"tooltip={_quote(f'{e.kind} {e.changed_label}')}")
        lines.append(f"  {_quote(e.source)} -> {_quote(e.target)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _single_foot(visit: Visit) -> str | None:
    legs = [(ee, ct) for ee, ct in visit.supports
            if ee in ("RightFoot", "LeftFoot", "RightKnee", "LeftKnee")]
    if len(legs) == 1 and legs[0][1] is ContactType.FOOT:
        return legs[0][0]
    return None


def stats(graph: TransitionGraph, taxonomy: TaxonomyGraph | None = None) -> GraphStats:
    """Visit counts, steps and taxonomy compliance.

    A step is an entry into a single-foot stance (exactly one leg support,
    which is a foot, arms free to do anything); staying on the same foot
    while hands come and go does not count again.
    """
    taxonomy = taxonomy or default_taxonomy()
    counts = Counter(v.class_id for v in graph.visits)
    per_foot = Counter()
    prev = None
    for v in graph.visits:
        foot = _single_foot(v)
        if foot is not None and foot != prev:
            per_foot[foot] += 1
        prev = foot

    flagged = []
    for e in graph.edges:
        if e.source not in taxonomy or e.target not in taxonomy[e.source].neighbors:
            flagged.append(e.order)
    ratio = 1.0 if not graph.edges else 1.0 - len(flagged) / len(graph.edges)
    return GraphStats(
        visit_counts={cid: counts[cid] for cid in sorted(counts, key=lambda c: (id_key(c), c))},
        step_count=sum(per_foot.values()),
        steps_per_foot={foot: per_foot[foot] for foot in ("RightFoot", "LeftFoot")},
        compliance_ratio=ratio,
        flagged_edges=tuple(flagged),
    )
