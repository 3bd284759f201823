import io

import pytest

from canforge import (
    BadHexError,
    BadLabelError,
    CanFrame,
    DlcMismatchError,
    Label,
    LabeledFrame,
    MalformedLineError,
    export_candump,
    load_tape,
    make_frame,
    read_candump,
    read_labeled,
    scan_labeled,
    write_labeled,
)
from canforge.dataset import HEADER, format_record

import oracles


def listing_record(ts=0.0, label=Label.NORMAL):
    frame = make_frame(0x05040601, bytes.fromhex("a635000000000080"), ts)
    return LabeledFrame(label, frame, "can0")


class TestWrite:
    def test_exact_line_format(self):
        assert (
            format_record(listing_record())
            == "Normal,0.000000,can0,05040601,8,a635000000000080"
        )

    def test_header_and_count(self):
        sink = io.StringIO()
        count = write_labeled([listing_record(), listing_record(1.5, Label.ATTACK)], sink)
        assert count == 2
        lines = sink.getvalue().split("\n")
        assert lines[0] == HEADER
        assert lines[1].startswith("Normal,0.000000,")
        assert lines[2].startswith("Attack,1.500000,")
        assert lines[3] == ""  # single trailing LF

    def test_empty_list_writes_header_only(self):
        sink = io.StringIO()
        assert write_labeled([], sink) == 0
        assert sink.getvalue() == HEADER + "\n"

    def test_dlc_zero_has_empty_data_field(self):
        record = LabeledFrame(Label.NORMAL, make_frame(0x1, b"", 0.0))
        assert format_record(record).endswith(",0,")


class TestRead:
    def write_and_read(self, records):
        sink = io.StringIO()
        write_labeled(records, sink)
        return read_labeled(io.StringIO(sink.getvalue()))

    def test_round_trip_identity(self):
        records = [listing_record(), listing_record(1.5, Label.ATTACK)]
        assert self.write_and_read(records) == records

    def test_byte_exact_round_trip(self):
        sink = io.StringIO()
        write_labeled([listing_record(12.345678, Label.ATTACK)], sink)
        text = sink.getvalue()
        again = io.StringIO()
        write_labeled(read_labeled(io.StringIO(text)), again)
        assert again.getvalue() == text

    def test_trailing_blank_line_tolerated(self):
        text = HEADER + "\n" + format_record(listing_record()) + "\n\n"
        assert len(read_labeled(io.StringIO(text))) == 1

    def test_missing_header(self):
        with pytest.raises(MalformedLineError) as err:
            read_labeled(io.StringIO(format_record(listing_record()) + "\n"))
        assert err.value.line_no == 1

    def test_lowercase_label_rejected(self):
        text = HEADER + "\nattack,0.000000,can0,05040601,8,a635000000000080\n"
        with pytest.raises(BadLabelError) as err:
            read_labeled(io.StringIO(text))
        assert err.value.line_no == 2

    def test_dlc_mismatch(self):
        text = HEADER + "\nNormal,0.000000,can0,05040601,8,a6350000000000\n"
        with pytest.raises(DlcMismatchError):
            read_labeled(io.StringIO(text))

    def test_bad_hex(self):
        text = HEADER + "\nNormal,0.000000,can0,0504xx01,8,a635000000000080\n"
        with pytest.raises(BadHexError):
            read_labeled(io.StringIO(text))

    def test_odd_hex_data(self):
        text = HEADER + "\nNormal,0.000000,can0,05040601,8,a63\n"
        with pytest.raises(BadHexError):
            read_labeled(io.StringIO(text))

    def test_field_count(self):
        text = HEADER + "\nNormal,0.000000,can0,05040601,8\n"
        with pytest.raises(MalformedLineError):
            read_labeled(io.StringIO(text))

    def test_id_exceeding_29_bits(self):
        text = HEADER + "\nNormal,0.000000,can0,ffffffff,0,\n"
        with pytest.raises(MalformedLineError):
            read_labeled(io.StringIO(text))

    def test_bad_timestamp(self):
        text = HEADER + "\nNormal,zero,can0,05040601,0,\n"
        with pytest.raises(MalformedLineError):
            read_labeled(io.StringIO(text))


class TestScan:
    def test_collects_issues_and_good_records(self):
        lines = [
            HEADER,
            format_record(listing_record()),
            "attack,0.000000,can0,05040601,8,a635000000000080",
            format_record(listing_record(2.0)),
            "Normal,1.000000,can0,05040601,7,a635000000000080",
        ]
        records, issues = scan_labeled(io.StringIO("\n".join(lines) + "\n"))
        assert len(records) == 2
        assert [i.line_no for i in issues] == [3, 5]
        assert isinstance(issues[0], BadLabelError)
        assert isinstance(issues[1], DlcMismatchError)

    def test_clean_file_has_no_issues(self):
        sink = io.StringIO()
        write_labeled([listing_record()], sink)
        records, issues = scan_labeled(io.StringIO(sink.getvalue()))
        assert len(records) == 1 and issues == []


class TestCandump:
    def test_exact_line(self):
        sink = io.StringIO()
        export_candump([listing_record(1.5)], sink)
        assert sink.getvalue() == "(1.500000) can0 05040601#A635000000000080\n"

    def test_empty_input(self):
        sink = io.StringIO()
        assert export_candump([], sink) == 0
        assert sink.getvalue() == ""

    def test_lines_parse_under_independent_grammar(self):
        records = [listing_record(0.25), listing_record(1.5, Label.ATTACK)]
        sink = io.StringIO()
        export_candump(records, sink)
        for line, record in zip(sink.getvalue().splitlines(), records):
            ts, iface, can_id, data = oracles.parse_candump_line(line)
            assert ts == record.frame.timestamp
            assert iface == record.interface
            assert can_id == record.frame.can_id
            assert data == record.frame.data

    def test_reimport_preserves_fields(self):
        records = [listing_record(0.25), listing_record(1.5, Label.ATTACK)]
        sink = io.StringIO()
        export_candump(records, sink)
        parsed = read_candump(io.StringIO(sink.getvalue()))
        assert [(i, f) for i, f in parsed] == [
            (r.interface, r.frame) for r in records
        ]

    def test_rejects_garbage(self):
        with pytest.raises(MalformedLineError):
            read_candump(io.StringIO("hello world\n"))


class TestLoadTape:
    def test_from_labeled_file(self, tmp_path):
        path = tmp_path / "tape.csv"
        write_labeled([listing_record(0.0), listing_record(0.5, Label.ATTACK)], path)
        tape = load_tape(path)
        assert len(tape) == 2
        assert tape.entries[0].can_id == 0x05040601

    def test_from_candump_file(self, tmp_path):
        path = tmp_path / "tape.log"
        export_candump([listing_record(0.0), listing_record(0.5)], path)
        tape = load_tape(path)
        assert [e.timestamp for e in tape.entries] == [0.0, 0.5]


def test_path_based_write_and_read(tmp_path):
    path = tmp_path / "data.csv"
    records = [listing_record(i * 0.125) for i in range(5)]
    assert write_labeled(records, path) == 5
    assert read_labeled(path) == records


def test_ordering_preserved_verbatim():
    frames = [
        LabeledFrame(Label.NORMAL, CanFrame(0x10, b"", 5.0)),
        LabeledFrame(Label.NORMAL, CanFrame(0x11, b"", 1.0)),
    ]
    sink = io.StringIO()
    write_labeled(frames, sink)  # writer does not reorder
    assert [r.frame.can_id for r in read_labeled(io.StringIO(sink.getvalue()))] == [0x10, 0x11]
