"""Labeled dataset files and the unlabeled capture-log export.

Canonical labeled format, one record per line, LF-terminated:

    label,timestamp,interface,can_id,dlc,data
    Normal,0.000000,can0,05040601,8,a635000000000080

* label is exactly "Normal" or "Attack";
* timestamp has six decimal places (microseconds);
* can_id is eight lowercase hex digits (29-bit extended ID);
* dlc is decimal and must equal the byte count of the data column;
* data is the frame body as lowercase hex pairs, empty when dlc is 0.

The capture-log export drops the label and mirrors the classic Linux CAN
dump line, uppercase hex:

    (1.500000) can0 05040601#A635000000000080
"""

from __future__ import annotations

import io
import re
from contextlib import contextmanager
from os import PathLike
from typing import Iterable, TextIO, Union

from .attacks import RecordedTape, TapeEntry
from .errors import (
    BadHexError,
    BadLabelError,
    DlcMismatchError,
    FormatError,
    MalformedLineError,
)
from .frame import MAX_CAN_ID, CanFrame
from .scenarios import Label, LabeledFrame

HEADER = "label,timestamp,interface,can_id,dlc,data"

Source = Union[str, PathLike, TextIO]
_HEX_DIGITS = frozenset("0123456789abcdefABCDEF")


@contextmanager
def _opened(source: Source, mode: str):
    if isinstance(source, (str, PathLike)):
        with open(source, mode, encoding="ascii", newline="") as handle:
            yield handle
    else:
        yield source


def format_record(record: LabeledFrame) -> str:
    frame = record.frame
    return (
        f"{record.label.value},{frame.timestamp:.6f},{record.interface},"
        f"{frame.can_id:08x},{frame.dlc},{frame.data.hex()}"
    )


def write_labeled(records: Iterable[LabeledFrame], sink: Source) -> int:
    """Write the header plus one line per record; returns the record count."""
    count = 0
    with _opened(sink, "w") as handle:
        handle.write(HEADER + "\n")
        for record in records:
            handle.write(format_record(record) + "\n")
            count += 1
    return count


def _parse_line(line_no: int, line: str) -> LabeledFrame:
    fields = line.split(",")
    if len(fields) != 6:
        raise MalformedLineError(line_no, f"expected 6 fields, found {len(fields)}")
    label_text, ts_text, interface, id_text, dlc_text, data_text = fields

    try:
        label = Label(label_text)
    except ValueError:
        raise BadLabelError(line_no, f"label must be Normal or Attack, got {label_text!r}") from None

    try:
        timestamp = float(ts_text)
    except ValueError:
        raise MalformedLineError(line_no, f"bad timestamp {ts_text!r}") from None
    if not timestamp >= 0.0:
        raise MalformedLineError(line_no, f"timestamp must be >= 0, got {ts_text}")

    if not interface:
        raise MalformedLineError(line_no, "empty interface name")

    if len(id_text) != 8 or not set(id_text) <= _HEX_DIGITS:
        raise BadHexError(line_no, f"CAN ID must be 8 hex digits, got {id_text!r}")
    can_id = int(id_text, 16)
    if can_id > MAX_CAN_ID:
        raise MalformedLineError(line_no, f"CAN ID {id_text} exceeds 29 bits")

    try:
        dlc = int(dlc_text)
    except ValueError:
        raise MalformedLineError(line_no, f"bad DLC {dlc_text!r}") from None
    if not 0 <= dlc <= 8:
        raise MalformedLineError(line_no, f"DLC must be 0..8, got {dlc}")

    if len(data_text) % 2 or not set(data_text) <= _HEX_DIGITS:
        raise BadHexError(line_no, f"data must be hex byte pairs, got {data_text!r}")
    data = bytes.fromhex(data_text)
    if len(data) != dlc:
        raise DlcMismatchError(line_no, f"DLC {dlc} but {len(data)} data bytes")

    return LabeledFrame(label, CanFrame(can_id, data, timestamp), interface)


def _iter_lines(handle: TextIO):
    text = handle.read()
    lines = text.split("\n")
    while lines and lines[-1] == "":  # terminating newline and trailing blanks
        lines.pop()
    return lines


def read_labeled(source: Source) -> list[LabeledFrame]:
    """Strict parse: raises a positional FormatError at the first defect."""
    with _opened(source, "r") as handle:
        lines = _iter_lines(handle)
    if not lines or lines[0] != HEADER:
        raise MalformedLineError(1, f"missing header {HEADER!r}")
    return [_parse_line(n, line) for n, line in enumerate(lines[1:], start=2)]


def scan_labeled(source: Source) -> tuple[list[LabeledFrame], list[FormatError]]:
    """Lenient parse: skips bad lines and returns them as positional issues."""
    with _opened(source, "r") as handle:
        lines = _iter_lines(handle)
    issues: list[FormatError] = []
    records: list[LabeledFrame] = []
    if not lines or lines[0] != HEADER:
        issues.append(MalformedLineError(1, f"missing header {HEADER!r}"))
        start = 1
    else:
        start = 2
        lines = lines[1:]
    for n, line in enumerate(lines, start=start):
        try:
            records.append(_parse_line(n, line))
        except FormatError as issue:
            issues.append(issue)
    return records, issues


def export_candump(records: Iterable[LabeledFrame], sink: Source) -> int:
    """Write the label-free capture-log form; returns the record count."""
    count = 0
    with _opened(sink, "w") as handle:
        for record in records:
            frame = record.frame
            handle.write(
                f"({frame.timestamp:.6f}) {record.interface} "
                f"{frame.can_id:08X}#{frame.data.hex().upper()}\n"
            )
            count += 1
    return count


_CANDUMP_LINE = re.compile(
    r"^\((?P<ts>\d+\.\d{6})\) (?P<iface>\S+) (?P<id>[0-9A-Fa-f]{8})#(?P<data>[0-9A-Fa-f]*)$"
)


def read_candump(source: Source) -> list[tuple[str, CanFrame]]:
    """Parse capture-log lines back into (interface, frame) pairs."""
    with _opened(source, "r") as handle:
        lines = _iter_lines(handle)
    out: list[tuple[str, CanFrame]] = []
    for n, line in enumerate(lines, start=1):
        match = _CANDUMP_LINE.match(line)
        if match is None:
            raise MalformedLineError(n, f"not a capture-log line: {line!r}")
        data_text = match["data"]
        if len(data_text) % 2:
            raise BadHexError(n, "data must be whole bytes")
        can_id = int(match["id"], 16)
        if can_id > MAX_CAN_ID:
            raise MalformedLineError(n, f"CAN ID {match['id']} exceeds 29 bits")
        out.append(
            (match["iface"], CanFrame(can_id, bytes.fromhex(data_text), float(match["ts"])))
        )
    return out


def load_tape(source: Source) -> RecordedTape:
    """Read a tape from either supported file form (auto-detected).

    Labeled files contribute every frame regardless of label; capture logs
    contribute every line.
    """
    with _opened(source, "r") as handle:
        text = handle.read()
    first = text.split("\n", 1)[0]
    if first == HEADER:
        records = read_labeled(io.StringIO(text))
        frames = [r.frame for r in records]
    else:
        frames = [frame for _, frame in read_candump(io.StringIO(text))]
    return RecordedTape(tuple(TapeEntry(f.timestamp, f.data, f.can_id) for f in frames))
