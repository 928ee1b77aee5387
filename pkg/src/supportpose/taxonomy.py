"""Whole-body support-pose taxonomy.

A support class is identified by the multiset of (limb, contact type) pairs
that hold the body up, with left/right symmetric cases folded together.
Classes are linked when one support can be added, removed or retyped on a
single limb to go from one to the other.

The default table ships as ``data/taxonomy.json`` and is loaded with
:func:`default_taxonomy`.
"""
from __future__ import annotations

import json
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import (
    NoPath,
    TaxonomyParseError,
    TaxonomyValidationError,
    UnknownId,
    UnknownPose,
    UnknownSegmentError,
)

FLIGHT_ID = "0.0"


class ContactModel(str, Enum):
    POINT_WITH_FRICTION = "PointWithFriction"
    LINE_WITH_FRICTION = "LineWithFriction"
    PLANE = "Plane"
    BILATERAL = "Bilateral"


class ContactType(str, Enum):
    HOLD = "Hold"
    PALM = "Palm"
    ARM_LINE = "ArmLine"
    FOOT = "Foot"
    KNEE = "Knee"

    @property
    def model(self) -> ContactModel:
        return _CONTACT_MODEL[self]


_CONTACT_MODEL = {
    ContactType.HOLD: ContactModel.BILATERAL,
    ContactType.PALM: ContactModel.PLANE,
    ContactType.ARM_LINE: ContactModel.LINE_WITH_FRICTION,
    ContactType.FOOT: ContactModel.PLANE,
    ContactType.KNEE: ContactModel.POINT_WITH_FRICTION,
}


class LimbClass(str, Enum):
    ARM = "Arm"
    LEG = "Leg"

    @property
    def admissible(self) -> frozenset[ContactType]:
        return ADMISSIBLE[self]


ADMISSIBLE = {
    LimbClass.ARM: frozenset({ContactType.HOLD, ContactType.PALM, ContactType.ARM_LINE}),
    LimbClass.LEG: frozenset({ContactType.FOOT, ContactType.KNEE}),
}

# Body segments that can carry a support, and the limb they belong to.
SEGMENT_LIMB = {
    "RightFoot": LimbClass.LEG,
    "LeftFoot": LimbClass.LEG,
    "RightKnee": LimbClass.LEG,
    "LeftKnee": LimbClass.LEG,
    "RightHand": LimbClass.ARM,
    "LeftHand": LimbClass.ARM,
}


class Category(str, Enum):
    STANDING = "Standing"
    KNEELING = "Kneeling"
    RESTING = "Resting"
    # only used by the "0.0" pseudo-class
    FLIGHT = "Flight"


_LIMB_ORDER = {LimbClass.LEG: 0, LimbClass.ARM: 1}
_CONTACT_ORDER = {ct: i for i, ct in enumerate(ContactType)}

Support = tuple[LimbClass, ContactType]


def _support_key(pair: Support) -> tuple[int, int]:
    return _LIMB_ORDER[pair[0]], _CONTACT_ORDER[pair[1]]


@dataclass(frozen=True)
class SupportSpec:
    """Side-free multiset of supports, plus whether the torso touches.

    The ``supports`` tuple is always stored sorted, so two specs holding the
    same multiset compare and hash equal.
    """

    supports: tuple[Support, ...] = ()
    torso_contact: bool = False

    def __post_init__(self):
        pairs = tuple(
            (LimbClass(limb), ContactType(ct)) for limb, ct in self.supports
        )
        object.__setattr__(self, "supports", tuple(sorted(pairs, key=_support_key)))

    @classmethod
    def of(cls, *pairs: Support, torso: bool = False) -> "SupportSpec":
        return cls(tuple(pairs), torso)

    @classmethod
    def parse(cls, text: str) -> "SupportSpec":
        """Parse ``"Leg:Foot,Arm:Palm"``; a bare ``Torso`` token marks torso contact."""
        pairs = []
        torso = False
        for token in filter(None, (t.strip() for t in text.split(","))):
            if token.lower() == "torso":
                torso = True
                continue
            limb, sep, ct = token.partition(":")
            if not sep:
                raise ValueError(f"expected Limb:ContactType, got {token!r}")
            try:
                pairs.append((LimbClass(limb.strip()), ContactType(ct.strip())))
            except ValueError:
                raise ValueError(f"unknown limb or contact type in {token!r}") from None
        return cls(tuple(pairs), torso)

    @property
    def count(self) -> int:
        return len(self.supports)

    def counter(self) -> Counter:
        return Counter(self.supports)

    def limb_count(self, limb: LimbClass) -> int:
        return sum(1 for lb, _ in self.supports if lb is limb)

    def contact_count(self, ct: ContactType) -> int:
        return sum(1 for _, c in self.supports if c is ct)

    def inadmissible(self) -> list[Support]:
        return [(lb, ct) for lb, ct in self.supports if ct not in ADMISSIBLE[lb]]

    def collapsed(self) -> "SupportSpec":
        # already side-free; kept so callers can collapse unconditionally
        return SupportSpec(self.supports, self.torso_contact)

    def __str__(self):
        parts = [f"{lb.value}:{ct.value}" for lb, ct in self.supports]
        if self.torso_contact:
            parts.append("Torso")
        return ",".join(parts) or "{}"


def collapse_sides(
    contacts: Mapping[str, ContactType], torso: bool = False
) -> SupportSpec:
    """Fold a per-segment contact map (``{"RightFoot": Foot, ...}``) into a SupportSpec."""
    pairs = []
    for segment, ct in contacts.items():
        try:
            limb = SEGMENT_LIMB[segment]
        except KeyError:
            raise UnknownSegmentError(segment) from None
        pairs.append((limb, ContactType(ct)))
    return SupportSpec(tuple(pairs), torso)


def contact_change(a: SupportSpec, b: SupportSpec) -> str | None:
    """Return "added", "removed" or "retyped" when *a* and *b* differ by one
    support change, else None."""
    if a.torso_contact != b.torso_contact:
        return None
    ca, cb = a.counter(), b.counter()
    only_a = list((ca - cb).elements())
    only_b = list((cb - ca).elements())
    if not only_a and len(only_b) == 1:
        return "added"
    if len(only_a) == 1 and not only_b:
        return "removed"
    if len(only_a) == 1 and len(only_b) == 1 and only_a[0][0] is only_b[0][0]:
        return "retyped"
    return None


_ID_RE = re.compile(r"^(?:(\d+)\.(\d+)|r\.(\d+))$")


def id_key(class_id: str) -> tuple[int, int, int]:
    """Sort key: numeric rows first by (row, column), then resting ids."""
    m = _ID_RE.match(class_id)
    if m is None:
        return (2, 0, 0)
    if m.group(3) is not None:
        return (1, int(m.group(3)), 0)
    return (0, int(m.group(1)), int(m.group(2)))


def _sorted_ids(ids: Iterable[str]) -> list[str]:
    return sorted(ids, key=lambda i: (id_key(i), i))


@dataclass(frozen=True)
class SupportClass:
    id: str
    category: Category
    spec: SupportSpec
    neighbors: tuple[str, ...] = ()
    cross_category: frozenset[str] = frozenset()
    tier: str | None = None

    @property
    def row(self) -> int | None:
        m = _ID_RE.match(self.id)
        if m is None or m.group(1) is None:
            return None
        return int(m.group(1))


@dataclass(frozen=True)
class Violation:
    kind: str
    ids: tuple[str, ...]
    message: str

    def __str__(self):
        return f"[{self.kind}] {', '.join(self.ids)}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    category_counts: dict[str, int]
    edge_count: int
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def class_count(self) -> int:
        return sum(self.category_counts.values())

    def summary(self) -> str:
        return f"{self.class_count} classes, {len(self.violations)} violations"


EXPECTED_COUNTS = {Category.STANDING: 18, Category.KNEELING: 18, Category.RESTING: 10}


@dataclass(frozen=True)
class TaxonomyGraph:
    """Immutable id -> SupportClass map, including the "0.0" flight pseudo-class."""

    classes: Mapping[str, SupportClass]
    _by_spec: Mapping[SupportSpec, str] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "classes", MappingProxyType(dict(self.classes)))
        by_spec = {}
        for cid in _sorted_ids(self.classes):
            by_spec.setdefault(self.classes[cid].spec, cid)
        object.__setattr__(self, "_by_spec", MappingProxyType(by_spec))

    def __contains__(self, class_id):
        return class_id in self.classes

    def __getitem__(self, class_id) -> SupportClass:
        try:
            return self.classes[class_id]
        except KeyError:
            raise UnknownId(class_id) from None

    def ids(self, category: Category | None = None) -> list[str]:
        return _sorted_ids(
            cid for cid, c in self.classes.items()
            if category is None or c.category is category
        )

    def classify(self, spec: SupportSpec) -> str:
        """Return the id of the class whose spec equals *spec* (after side collapse)."""
        bad = spec.inadmissible()
        if bad:
            raise ValueError(f"inadmissible limb/contact pairs: {bad}")
        try:
            return self._by_spec[spec.collapsed()]
        except KeyError:
            raise UnknownPose(f"no taxonomy class with supports {spec}") from None

    def neighbors(self, class_id: str) -> list[str]:
        return _sorted_ids(self[class_id].neighbors)

    def support_count(self, class_id: str) -> int:
        return self[class_id].spec.count

    def transition_path(self, start: str, goal: str) -> list[str]:
        """Shortest neighbor path from *start* to *goal*.

        Among equally short paths, the one whose hops come first in id order
        wins.
        """
        self[start], self[goal]
        if start == goal:
            return [start]
        # distances to goal, then greedy walk from start picking the
        # smallest-id neighbor that gets one step closer
        dist = {goal: 0}
        queue = deque([goal])
        while queue:
            node = queue.popleft()
            for nb in self.classes[node].neighbors:
                if nb not in dist:
                    dist[nb] = dist[node] + 1
                    queue.append(nb)
        if start not in dist:
            raise NoPath(f"no transition path from {start} to {goal}")
        path = [start]
        while path[-1] != goal:
            here = dist[path[-1]]
            path.append(next(nb for nb in self.neighbors(path[-1]) if dist.get(nb) == here - 1))
        return path

    def edges(self) -> list[tuple[str, str]]:
        """Undirected declared edges, each listed once with the smaller id first."""
        seen = set()
        for cid, cls in self.classes.items():
            for nb in cls.neighbors:
                a, b = sorted((cid, nb), key=id_key)
                seen.add((a, b))
        return sorted(seen, key=lambda e: (id_key(e[0]), id_key(e[1])))

    def to_dict(self) -> dict:
        """File representation; the flight pseudo-class is implicit and left out."""
        out = []
        for cid in self.ids():
            c = self.classes[cid]
            if c.category is Category.FLIGHT:
                continue
            entry = {
                "id": c.id,
                "category": c.category.value,
                "supports": [
                    {"limb": lb.value, "contact": ct.value} for lb, ct in c.spec.supports
                ],
                "torso_contact": c.spec.torso_contact,
                "neighbors": [n for n in _sorted_ids(c.neighbors) if n != FLIGHT_ID],
            }
            if c.tier is not None:
                entry["tier"] = c.tier
            out.append(entry)
        return {"classes": out}


def validate(graph: TaxonomyGraph) -> ValidationReport:
    """Check every taxonomy invariant; violations are returned, never raised."""
    violations = []
    classes = graph.classes

    counts = Counter(c.category for c in classes.values() if c.category is not Category.FLIGHT)
    for cat, expected in EXPECTED_COUNTS.items():
        if counts[cat] != expected:
            violations.append(Violation(
                "count", (cat.value,), f"expected {expected} {cat.value} classes, found {counts[cat]}"
            ))

    seen_specs: dict[SupportSpec, str] = {}
    for cid in graph.ids():
        c = classes[cid]
        spec = c.spec
        m = _ID_RE.match(cid)
        if m is None:
            violations.append(Violation("id-format", (cid,), "id must look like '<row>.<col>' or 'r.<n>'"))
        bad = spec.inadmissible()
        if bad:
            pairs = ", ".join(f"{lb.value}:{ct.value}" for lb, ct in bad)
            violations.append(Violation("admissibility", (cid,), f"inadmissible supports {pairs}"))
        for limb in LimbClass:
            if spec.limb_count(limb) > 2:
                violations.append(Violation(
                    "limb-count", (cid,), f"more than 2 {limb.value} supports"
                ))
        if spec in seen_specs:
            violations.append(Violation(
                "duplicate-spec", (seen_specs[spec], cid), f"both classes have supports {spec}"
            ))
        else:
            seen_specs[spec] = cid

        feet = spec.contact_count(ContactType.FOOT)
        knees = spec.contact_count(ContactType.KNEE)
        if c.category is Category.STANDING:
            if feet < 1 or knees or spec.torso_contact:
                violations.append(Violation(
                    "category", (cid,), "Standing needs >=1 Foot, no Knee and no torso contact"
                ))
        elif c.category is Category.KNEELING:
            if knees < 1 or spec.torso_contact:
                violations.append(Violation(
                    "category", (cid,), "Kneeling needs >=1 Knee and no torso contact"
                ))
        elif c.category is Category.RESTING:
            if not spec.torso_contact:
                violations.append(Violation("category", (cid,), "Resting needs torso contact"))
            if m is not None and m.group(3) is None:
                violations.append(Violation("id-format", (cid,), "Resting ids use the 'r.<n>' form"))
            if c.neighbors:
                violations.append(Violation(
                    "resting-edge", (cid,), "resting classes declare no transitions"
                ))
        elif c.category is Category.FLIGHT:
            if spec.count or spec.torso_contact:
                violations.append(Violation("category", (cid,), "flight pseudo-class has no supports"))

        if c.category in (Category.STANDING, Category.KNEELING):
            if m is None or m.group(1) is None or int(m.group(1)) != spec.count:
                violations.append(Violation(
                    "row", (cid,), f"row number must equal support count {spec.count}"
                ))

        for nb in c.neighbors:
            if nb == cid:
                violations.append(Violation("self-loop", (cid,), "class lists itself as neighbor"))
                continue
            other = classes.get(nb)
            if other is None:
                violations.append(Violation("unknown-neighbor", (cid, nb), "neighbor id is not defined"))
                continue
            if cid not in other.neighbors:
                violations.append(Violation(
                    "symmetry", (cid, nb), f"{nb} does not list {cid} back"
                ))
            # each undirected edge is rule-checked once
            if id_key(cid) < id_key(nb) and contact_change(c.spec, other.spec) is None:
                violations.append(Violation(
                    "one-change", (cid, nb),
                    f"edge joins {c.spec} and {other.spec}, which differ by more than one contact change",
                ))

    return ValidationReport(
        category_counts={cat.value: counts[cat] for cat in EXPECTED_COUNTS},
        edge_count=len(graph.edges()),
        violations=tuple(violations),
    )


def _parse_error(message, path):
    return TaxonomyParseError(f"{path}: {message}")


def _parse_class(raw, path) -> SupportClass:
    if not isinstance(raw, dict):
        raise _parse_error("class entry must be an object", path)
    for key in ("id", "category", "supports"):
        if key not in raw:
            raise _parse_error(f"missing field {key!r}", path)
    cid = raw["id"]
    if not isinstance(cid, str):
        raise _parse_error("id must be a string", f"{path}.id")
    try:
        category = Category(raw["category"])
    except ValueError:
        raise _parse_error(f"unknown category {raw['category']!r}", f"{path}.category") from None
    if category is Category.FLIGHT:
        raise _parse_error("the flight pseudo-class is implicit", f"{path}.category")
    if not isinstance(raw["supports"], list):
        raise _parse_error("supports must be a list", f"{path}.supports")
    pairs = []
    for j, s in enumerate(raw["supports"]):
        spath = f"{path}.supports[{j}]"
        if not isinstance(s, dict) or "limb" not in s or "contact" not in s:
            raise _parse_error("support needs 'limb' and 'contact'", spath)
        try:
            pairs.append((LimbClass(s["limb"]), ContactType(s["contact"])))
        except ValueError as exc:
            raise _parse_error(str(exc), spath) from None
    torso = raw.get("torso_contact", False)
    if not isinstance(torso, bool):
        raise _parse_error("torso_contact must be a boolean", f"{path}.torso_contact")
    neighbors = raw.get("neighbors", [])
    if not isinstance(neighbors, list) or not all(isinstance(n, str) for n in neighbors):
        raise _parse_error("neighbors must be a list of ids", f"{path}.neighbors")
    tier = raw.get("tier")
    if tier is not None and not isinstance(tier, str):
        raise _parse_error("tier must be a string", f"{path}.tier")
    return SupportClass(
        id=cid,
        category=category,
        spec=SupportSpec(tuple(pairs), torso),
        neighbors=tuple(dict.fromkeys(neighbors)),
        tier=tier,
    )


def _with_flight_and_crossings(classes: dict[str, SupportClass]) -> dict[str, SupportClass]:
    """Attach the "0.0" pseudo-class to every 1-support class and fill in cross-category sets."""
    singles = [
        cid for cid, c in classes.items()
        if c.spec.count == 1 and c.category in (Category.STANDING, Category.KNEELING)
    ]
    out = {}
    for cid, c in classes.items():
        nbs = c.neighbors + ((FLIGHT_ID,) if cid in singles else ())
        out[cid] = SupportClass(c.id, c.category, c.spec, nbs, frozenset(), c.tier)
    out[FLIGHT_ID] = SupportClass(
        FLIGHT_ID, Category.FLIGHT, SupportSpec(), tuple(_sorted_ids(singles))
    )
    for cid, c in out.items():
        cross = frozenset(
            nb for nb in c.neighbors
            if nb in out and out[nb].category is not c.category
            and Category.FLIGHT not in (c.category, out[nb].category)
        )
        out[cid] = SupportClass(c.id, c.category, c.spec, c.neighbors, cross, c.tier)
    return out


def load_taxonomy(source: str | None = None, *, check: bool = True) -> TaxonomyGraph:
    """Parse taxonomy JSON text into a graph.

    ``source=None`` loads the shipped default table. With ``check`` set, any
    invariant violation raises TaxonomyValidationError carrying the full
    report.
    """
    if source is None:
        source = default_taxonomy_text()
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise TaxonomyParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("classes"), list):
        raise TaxonomyParseError("top level must be an object with a 'classes' list", line=1)

    classes: dict[str, SupportClass] = {}
    duplicates = []
    for i, raw in enumerate(doc["classes"]):
        cls = _parse_class(raw, f"classes[{i}]")
        if cls.id in classes or cls.id == FLIGHT_ID:
            duplicates.append(Violation("duplicate-id", (cls.id,), "id declared more than once"))
            continue
        classes[cls.id] = cls

    graph = TaxonomyGraph(_with_flight_and_crossings(classes))
    if check:
        report = validate(graph)
        if duplicates or not report.ok:
            report = ValidationReport(
                report.category_counts, report.edge_count, tuple(duplicates) + report.violations
            )
            raise TaxonomyValidationError(report)
    return graph


def default_taxonomy_text() -> str:
    return resources.files("supportpose").joinpath("data/taxonomy.json").read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def default_taxonomy() -> TaxonomyGraph:
    return load_taxonomy(None)
