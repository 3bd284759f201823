"""Command-line front end.

Subcommands:

    generate        synthesize a labeled scenario dataset
    decode          pretty-print a CAN ID or a dataset's frames/transfers
    analyze         summary statistics and/or the frequency detector
    export-candump  convert a labeled dataset to the capture-log form
    validate        strict format check with positional issue reports

Exit codes: 0 success, 1 validation/detection of file errors, 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import analysis, dataset, scenarios, traffic
from .attacks import Fidelity
from .errors import CanForgeError, FormatError
from .frame import AnonymousMessageId, MessageId, ServiceId, decode_can_id
from .transfer import Reassembler, ReassemblyError, Transfer, decode_tail


def _load_spec(args) -> scenarios.ScenarioSpec:
    if args.scenario is not None:
        return scenarios.builtin_scenario(args.scenario)
    with open(args.spec, encoding="utf-8") as handle:
        return scenarios.spec_from_dict(json.load(handle))


def _load_profile(path: str | None) -> traffic.TrafficProfile:
    if path is None:
        return traffic.DEFAULT_PROFILE
    with open(path, encoding="utf-8") as handle:
        return scenarios.profile_from_dict(json.load(handle))


def _cmd_generate(args) -> int:
    spec = _load_spec(args)
    if args.label_mode is not None:
        spec = replace(spec, label_mode=scenarios.LabelMode(args.label_mode))
    if args.fidelity is not None:
        fidelity = Fidelity(args.fidelity)
        spec = replace(
            spec, attacks=tuple(replace(cfg, fidelity=fidelity) for cfg in spec.attacks)
        )
    profile = _load_profile(args.profile)
    tape = None
    if args.tape is not None:
        tape = dataset.load_tape(args.tape)
    elif spec.needs_tape():
        tape = traffic.leftward_command_tape()
    records = scenarios.run_scenario(
        spec, profile, seed=args.seed, tape=tape, interface=args.interface
    )
    count = dataset.write_labeled(records, args.out)
    print(f"wrote {count} records to {args.out}")
    return 0


def _describe_id(can_id: int) -> str:
    fid = decode_can_id(can_id)
    if isinstance(fid, MessageId):
        return (
            f"{can_id:08x}  message    priority={fid.priority} "
            f"type={fid.message_type_id} source={fid.source_node_id}"
        )
    if isinstance(fid, AnonymousMessageId):
        return (
            f"{can_id:08x}  anonymous  priority={fid.priority} "
            f"discriminator={fid.discriminator} type_low={fid.message_type_low}"
        )
    assert isinstance(fid, ServiceId)
    kind = "request" if fid.request_not_response else "response"
    return (
        f"{can_id:08x}  service    priority={fid.priority} type={fid.service_type_id} "
        f"{kind} dest={fid.destination_node_id} source={fid.source_node_id}"
    )


def _cmd_decode(args) -> int:
    if args.id is not None:
        print(_describe_id(int(args.id, 16)))
        return 0

    try:
        records = dataset.read_labeled(args.input)
    except FormatError:
        records = [
            scenarios.LabeledFrame(scenarios.Label.NORMAL, frame, iface)
            for iface, frame in dataset.read_candump(args.input)
        ]
    profile = _load_profile(args.profile)
    machine = Reassembler(
        signatures=profile.signatures(), strict_transfer_id=args.strict
    )
    shown = 0
    transfers = errors = 0
    for record in records:
        frame = record.frame
        if args.frames and (args.limit is None or shown < args.limit):
            tail = decode_tail(frame.data[-1]) if frame.dlc else None
            tail_text = (
                f" tail[start={int(tail.start_of_transfer)} end={int(tail.end_of_transfer)}"
                f" toggle={int(tail.toggle)} tid={tail.transfer_id}]"
                if tail
                else ""
            )
            print(
                f"{frame.timestamp:>12.6f} {record.label.value:>6} "
                f"{_describe_id(frame.can_id)} dlc={frame.dlc} data={frame.data.hex()}{tail_text}"
            )
            shown += 1
        for event in machine.push(frame):
            if isinstance(event, Transfer):
                transfers += 1
                if args.limit is None or shown < args.limit:
                    print(
                        f"{event.timestamp:>12.6f} TRANSFER {_describe_id_of(event)} "
                        f"tid={event.transfer_id} crc_ok={event.crc_ok} "
                        f"payload={event.payload.hex()}"
                    )
                    shown += 1
            else:
                errors += 1
                if args.errors and (args.limit is None or shown < args.limit):
                    print(
                        f"{event.timestamp:>12.6f} ERROR    {event.kind.value} "
                        f"id={event.can_id:08x} {event.detail}"
                    )
                    shown += 1
    print(f"{len(records)} frames, {transfers} transfers, {errors} reassembly diagnostics")
    return 0


def _describe_id_of(event: Transfer) -> str:
    fid = event.frame_id
    if isinstance(fid, MessageId):
        return f"message type={fid.message_type_id} source={fid.source_node_id}"
    if isinstance(fid, AnonymousMessageId):
        return f"anonymous discriminator={fid.discriminator}"
    return f"service type={fid.service_type_id} source={fid.source_node_id}"


def _print_summary(path: str, summary: analysis.DatasetSummary, kv: bool) -> None:
    if kv:
        print(f"file={path}")
        print(f"total_time={summary.total_time:.6f}")
        print(f"total_frames={summary.total_frames}")
        print(f"normal_frames={summary.normal_frames}")
        print(f"attack_frames={summary.attack_frames}")
        stats = summary.inter_arrival
        print(
            f"inter_arrival_mean={stats.mean:.9f} inter_arrival_min={stats.min:.9f} "
            f"inter_arrival_max={stats.max:.9f} inter_arrival_stddev={stats.stddev:.9f}"
        )
        for can_id in sorted(summary.per_id_counts):
            print(f"id_{can_id:08x}={summary.per_id_counts[can_id]}")
        return
    print(f"== {path}")
    print(f"  duration      {summary.total_time:.6f} s")
    print(f"  frames        {summary.total_frames} "
          f"(normal {summary.normal_frames}, attack {summary.attack_frames})")
    stats = summary.inter_arrival
    print(f"  inter-arrival mean {stats.mean * 1e3:.3f} ms, min {stats.min * 1e3:.3f} ms, "
          f"max {stats.max * 1e3:.3f} ms, stddev {stats.stddev * 1e3:.3f} ms")
    for label, stats in summary.inter_arrival_by_label.items():
        print(f"  {label.value.lower():<7} gaps  mean {stats.mean * 1e3:.3f} ms, "
              f"stddev {stats.stddev * 1e3:.3f} ms")
    top = sorted(summary.per_id_counts.items(), key=lambda kv_: (-kv_[1], kv_[0]))[:8]
    for can_id, count in top:
        print(f"  {can_id:08x}  {count}")


def _cmd_analyze(args) -> int:
    if args.detect is not None and len(args.detect) not in (0, 2):
        print("--detect takes zero or two values: WINDOW THRESHOLD", file=sys.stderr)
        return 2
    status = 0
    for path in args.inputs:
        try:
            records = dataset.read_labeled(path)
        except FormatError as exc:
            print(f"{path}: {exc}", file=sys.stderr)
            status = 1
            continue
        if not records:
            print(f"{path}: empty dataset", file=sys.stderr)
            status = 1
            continue
        if args.summary or args.detect is None:
            _print_summary(path, analysis.summarize(records), args.kv)
        if args.detect is not None:
            window = float(args.detect[0]) if args.detect else analysis.DEFAULT_DETECTION_WINDOW
            threshold = float(args.detect[1]) if args.detect else analysis.DEFAULT_DETECTION_THRESHOLD
            target = int(args.target_id, 16)
            alarms = analysis.detect_frequency(records, window, threshold, target)
            score = analysis.evaluate_detection(records, alarms)
            if args.kv:
                print(f"alarms={len(alarms)}")
                for alarm in alarms:
                    print(f"alarm={alarm.start:.6f}..{alarm.end:.6f}")
                print(f"precision={score.precision:.6f}")
                print(f"recall={score.recall:.6f}")
            else:
                print(f"  {len(alarms)} alarm(s), window {window} s, threshold {threshold} f/s")
                for alarm in alarms:
                    print(f"    {alarm.start:10.3f} .. {alarm.end:10.3f} s")
                print(f"  precision {score.precision:.4f}  recall {score.recall:.4f}")
    return status


def _cmd_export_candump(args) -> int:
    try:
        records = dataset.read_labeled(args.input)
    except FormatError as exc:
        print(f"{args.input}: {exc}", file=sys.stderr)
        return 1
    count = dataset.export_candump(records, args.out)
    print(f"wrote {count} lines to {args.out}")
    return 0


def _cmd_validate(args) -> int:
    status = 0
    for path in args.inputs:
        records, issues = dataset.scan_labeled(path)
        for issue in issues:
            print(f"{path}:{issue.line_no}: {issue.message}")
        if issues:
            status = 1
            print(f"{path}: INVALID ({len(issues)} issue(s), {len(records)} good records)")
        else:
            print(f"{path}: OK ({len(records)} records)")
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="canforge",
        description="DroneCAN (UAVCAN v0) traffic toolkit and intrusion-dataset synthesizer",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="synthesize a labeled scenario dataset")
    pick = gen.add_mutually_exclusive_group(required=True)
    pick.add_argument("--scenario", type=int, metavar="N", help="built-in scenario 1..10")
    pick.add_argument("--spec", metavar="FILE", help="scenario JSON file")
    gen.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    gen.add_argument("--label-mode", choices=[m.value for m in scenarios.LabelMode],
                     help="override the spec's labeling mode")
    gen.add_argument("--fidelity", choices=[f.value for f in Fidelity],
                     help="override every attack's tail fidelity")
    gen.add_argument("--profile", metavar="FILE", help="traffic profile JSON file")
    gen.add_argument("--tape", metavar="FILE",
                     help="replay tape (labeled or capture-log file); "
                          "defaults to the bundled synthetic tape")
    gen.add_argument("--interface", default="can0", help="interface name column")
    gen.add_argument("--out", required=True, metavar="FILE", help="output dataset path")
    gen.set_defaults(func=_cmd_generate)

    dec = sub.add_parser("decode", help="pretty-print a CAN ID or a dataset")
    what = dec.add_mutually_exclusive_group(required=True)
    what.add_argument("--id", metavar="HEX", help="decode one 29-bit CAN ID")
    what.add_argument("input", nargs="?", help="labeled dataset or capture-log file")
    dec.add_argument("--frames", action="store_true", help="print every frame")
    dec.add_argument("--errors", action="store_true", help="print reassembly diagnostics")
    dec.add_argument("--profile", metavar="FILE",
                     help="traffic profile JSON supplying checksum signatures")
    dec.add_argument("--strict", action="store_true",
                     help="flag out-of-order transfer IDs")
    dec.add_argument("--limit", type=int, help="maximum lines to print")
    dec.set_defaults(func=_cmd_decode)

    ana = sub.add_parser("analyze", help="summaries and frequency detection")
    ana.add_argument("inputs", nargs="+", metavar="FILE")
    ana.add_argument("--summary", action="store_true", help="print summary statistics")
    ana.add_argument("--detect", nargs="*", metavar="V",
                     help="run the detector; optionally WINDOW THRESHOLD")
    ana.add_argument("--target-id", default="05040601", metavar="HEX",
                     help="detector target CAN ID (default 05040601)")
    ana.add_argument("--kv", action="store_true", help="machine-readable key=value output")
    ana.set_defaults(func=_cmd_analyze)

    exp = sub.add_parser("export-candump", help="drop labels, emit capture-log lines")
    exp.add_argument("input", metavar="FILE")
    exp.add_argument("--out", required=True, metavar="FILE")
    exp.set_defaults(func=_cmd_export_candump)

    val = sub.add_parser("validate", help="strict dataset format check")
    val.add_argument("inputs", nargs="+", metavar="FILE")
    val.set_defaults(func=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnknownScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CanForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
