"""Support-pose taxonomy and motion segmentation toolkit."""
from .actions import TYPE_I, TYPE_II, TYPE_III, ActionSpan, ManipulationContact, classify_actions, \
    detect_manipulation_contacts
from .contact import ContactHit, distance_to, probe, probe_track
from .errors import SupportPoseError
from .motion import END_EFFECTORS, MotionSequence, load_motion, parse_motion
from .pose import Contact, SupportPoseInstance, instantiate_pose
from .posegraph import GraphStats, TransitionGraph, build_graph, stats, to_dot
from .scene import Box, Capsule, Plane, Role, SceneObject, Sphere, load_scene, parse_scene
from .segmentation import PipelineConfig, Segment, SegmentReport, detect_supports, label, run_pipeline, segment
from .signals import FilterSpec, differentiate, lowpass, speed, speed_traces
from .taxonomy import ContactType, LimbClass, SupportClass, SupportSpec, TaxonomyGraph, default_taxonomy, \
    load_taxonomy, validate

__version__ = "0.1.0"

__all__ = [
    "TYPE_I", "TYPE_II", "TYPE_III", "ActionSpan", "ManipulationContact", "classify_actions",
    "detect_manipulation_contacts",
    "ContactHit", "distance_to", "probe", "probe_track",
    "SupportPoseError",
    "END_EFFECTORS", "MotionSequence", "load_motion", "parse_motion",
    "Contact", "SupportPoseInstance", "instantiate_pose",
    "GraphStats", "TransitionGraph", "build_graph", "stats", "to_dot",
    "Box", "Capsule", "Plane", "Role", "SceneObject", "Sphere", "load_scene", "parse_scene",
    "PipelineConfig", "Segment", "SegmentReport", "detect_supports", "label", "run_pipeline", "segment",
    "FilterSpec", "differentiate", "lowpass", "speed", "speed_traces",
    "ContactType", "LimbClass", "SupportClass", "SupportSpec", "TaxonomyGraph", "default_taxonomy",
    "load_taxonomy", "validate",
]
