"""Contacts and instantiated support poses.

A pose instance bundles a taxonomy class id with the CoM location, the
concrete contacts (link, model, location, surface normal) and the ids of the
neighboring classes.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import CountMismatchError
from .taxonomy import ContactModel, ContactType, TaxonomyGraph, default_taxonomy


@dataclass(frozen=True, eq=False)
class Contact:
    link: str
    model: ContactModel
    position: np.ndarray
    normal: np.ndarray

    def __post_init__(self):
        pos = np.array(self.position, dtype=float)
        n = np.array(self.normal, dtype=float)
        if pos.shape != (3,) or n.shape != (3,):
            raise ValueError("contact position and normal must be 3-vectors")
        if abs(np.linalg.norm(n) - 1.0) > 1e-6:
            raise ValueError(f"contact normal must have unit length, got |n|={np.linalg.norm(n)}")
        object.__setattr__(self, "model", ContactModel(self.model))
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "normal", n)

    @classmethod
    def from_hit(cls, link: str, hit) -> "Contact":
        """Build a contact from a probe hit; the model follows the hit's contact type."""
        if hit.contact_type is None:
            raise ValueError("hit carries no contact type")
        return cls(link, ContactType(hit.contact_type).model, hit.point, hit.normal)


@dataclass(frozen=True, eq=False)
class SupportPoseInstance:
    class_id: str
    # None when the motion carries neither a CoM nor a Torso track
    com: np.ndarray | None
    contacts: tuple[Contact, ...]
    neighbor_ids: tuple[str, ...]

    @property
    def com_known(self) -> bool:
        return self.com is not None


def instantiate_pose(class_id: str, com, contacts, graph: TaxonomyGraph | None = None
                     ) -> SupportPoseInstance:
    graph = graph or default_taxonomy()
    cls = graph[class_id]
    contacts = tuple(contacts)
    if len(contacts) != cls.spec.count:
        raise CountMismatchError(
            f"class {class_id} has {cls.spec.count} supports but {len(contacts)} contacts were given"
        )
    expected = Counter(ct.model for _, ct in cls.spec.supports)
    given = Counter(c.model for c in contacts)
    if given != expected:
        raise ValueError(
            f"contact models {sorted(m.value for m in given.elements())} do not fit class {class_id}"
        )
    if com is not None:
        com = np.array(com, dtype=float)
        if com.shape != (3,):
            raise ValueError("com must be a 3-vector")
    return SupportPoseInstance(class_id, com, contacts, tuple(graph.neighbors(class_id)))
