"""Command-line front end.

    supportpose [--taxonomy-file T] taxonomy validate
    supportpose taxonomy neighbors 2.3
    supportpose taxonomy classify --supports "Leg:Foot,Leg:Foot"
    supportpose taxonomy export [--out T.json]
    supportpose speeds --motion M.json [--cutoff-hz 1.5] [--out S.csv]
    supportpose segment --motion M.json --scene S.json --out R.json
    supportpose graph --report R.json --out G.dot [--stats ST.json]
    supportpose actions --report R.json --motion M.json --scene S.json --out A.json

Exit status: 0 on success, 1 when an input fails validation, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import actions, posegraph, segmentation, signals
from .errors import SupportPoseError
from .motion import load_motion
from .scene import load_scene
from .segmentation import PipelineConfig, SegmentReport
from .taxonomy import SupportSpec, load_taxonomy, validate

_DEFAULTS = PipelineConfig()


class _Failure(Exception):
    """Input or validation failure reported with exit status 1."""


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _taxonomy(args, check=True):
    source = _read(args.taxonomy_file) if args.taxonomy_file else None
    return load_taxonomy(source, check=check)


def _load_report(path) -> SegmentReport:
    return SegmentReport.from_json(_read(path))


def cmd_validate(args):
    graph = _taxonomy(args, check=False)
    report = validate(graph)
    print(report.summary())
    for v in report.violations:
        print(f"  {v}")
    return 0 if report.ok else 1


def cmd_neighbors(args):
    graph = _taxonomy(args)
    for cid in graph.neighbors(args.id):
        print(cid)
    return 0


def cmd_classify(args):
    graph = _taxonomy(args)
    print(graph.classify(SupportSpec.parse(args.supports)))
    return 0


def cmd_export(args):
    graph = _taxonomy(args)
    _write(args.out, json.dumps(graph.to_dict(), indent=2) + "\n")
    return 0


def cmd_speeds(args):
    motion = load_motion(args.motion)
    traces = signals.speed_traces(motion, signals.FilterSpec(args.cutoff_hz))
    _write(args.out, signals.speeds_csv(traces))
    return 0


def cmd_segment(args):
    graph = _taxonomy(args)
    motion = load_motion(args.motion)
    scene = load_scene(args.scene)
    config = PipelineConfig(args.cutoff_hz, args.threshold, args.contact_eps, args.min_frames)
    report = segmentation.run_pipeline(motion, scene, config, graph)
    _write(args.out, report.to_json())
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"{len(report.segments)} segments: {' '.join(report.class_ids())}")
    return 0


def cmd_graph(args):
    graph = _taxonomy(args)
    report = _load_report(args.report)
    tg = posegraph.build_graph(report)
    _write(args.out, posegraph.to_dot(tg, show_changes=args.show_changes))
    st = posegraph.stats(tg, graph)
    if args.stats:
        _write(args.stats, json.dumps(st.to_dict(), indent=2) + "\n")
    print(f"{len(tg.nodes)} classes, {len(tg.edges)} transitions, {st.step_count} steps, "
          f"compliance {st.compliance_ratio:.3f}")
    return 0


def cmd_actions(args):
    report = _load_report(args.report)
    motion = load_motion(args.motion)
    scene = load_scene(args.scene)
    if report.frame_count != motion.frame_count:
        raise _Failure(
            f"report covers {report.frame_count} frames but the motion has {motion.frame_count}"
        )
    contacts = actions.detect_manipulation_contacts(motion, scene, report.config)
    spans = actions.classify_actions(report, contacts)
    _write(args.out, actions.actions_json(report, contacts, spans))
    print(" ".join(s.type for s in spans))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="supportpose",
        description="Support-pose taxonomy queries and motion segmentation by support contacts.",
    )
    parser.add_argument("--taxonomy-file", metavar="PATH",
                        help="taxonomy JSON to use instead of the built-in table")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    tax = sub.add_parser("taxonomy", help="inspect the support-pose taxonomy")
    tsub = tax.add_subparsers(dest="action", required=True, metavar="ACTION")
    p = tsub.add_parser("validate", help="check every taxonomy invariant")
    p.set_defaults(func=cmd_validate)
    p = tsub.add_parser("neighbors", help="list the neighbor classes of a class id")
    p.add_argument("id", help='class id, e.g. "2.3"')
    p.set_defaults(func=cmd_neighbors)
    p = tsub.add_parser("classify", help="class id for a support combination")
    p.add_argument("--supports", required=True,
                   help='comma-separated Limb:ContactType tokens, e.g. "Leg:Foot,Arm:Hold"; '
                        'add a Torso token for torso contact')
    p.set_defaults(func=cmd_classify)
    p = tsub.add_parser("export", help="write the taxonomy as JSON")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("speeds", help="filtered end-effector speeds as CSV")
    p.add_argument("--motion", required=True, help="motion JSON")
    p.add_argument("--cutoff-hz", type=float, default=_DEFAULTS.cutoff_hz,
                   help=f"low-pass cutoff in Hz (default: {_DEFAULTS.cutoff_hz})")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_speeds)

    p = sub.add_parser("segment", help="segment a motion into support poses")
    p.add_argument("--motion", required=True, help="motion JSON")
    p.add_argument("--scene", required=True, help="scene JSON")
    p.add_argument("--cutoff-hz", type=float, default=_DEFAULTS.cutoff_hz,
                   help=f"low-pass cutoff in Hz (default: {_DEFAULTS.cutoff_hz})")
    p.add_argument("--threshold", type=float, default=_DEFAULTS.speed_threshold,
                   help=f"support speed threshold in m/s (default: {_DEFAULTS.speed_threshold})")
    p.add_argument("--contact-eps", type=float, default=_DEFAULTS.contact_epsilon,
                   help=f"contact distance tolerance in m (default: {_DEFAULTS.contact_epsilon})")
    p.add_argument("--min-frames", type=int, default=_DEFAULTS.min_segment_frames,
                   help="merge segments shorter than this many frames (default: 1, keep all)")
    p.add_argument("--out", required=True, help="report JSON path")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("graph", help="pose-transition graph of a segment report as DOT")
    p.add_argument("--report", required=True, help="segment report JSON")
    p.add_argument("--out", required=True, help="DOT output path")
    p.add_argument("--stats", help="also write visit/step/compliance statistics as JSON")
    p.add_argument("--show-changes", action="store_true",
                   help="add the changed end-effectors to each edge as a tooltip")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("actions", help="classify a segmented motion into action types I/II/III")
    p.add_argument("--report", required=True, help="segment report JSON")
    p.add_argument("--motion", required=True, help="motion JSON the report was made from")
    p.add_argument("--scene", required=True, help="scene JSON")
    p.add_argument("--out", required=True, help="actions JSON path")
    p.set_defaults(func=cmd_actions)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SupportPoseError, _Failure, ValueError, KeyError, OSError) as exc:
        plain_key = isinstance(exc, KeyError) and not isinstance(exc, SupportPoseError)
        msg = exc.args[0] if plain_key and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
