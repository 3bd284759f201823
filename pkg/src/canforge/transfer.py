"""Tail-byte codec, payload segmentation, and multi-frame reassembly.

Every frame's last byte is the tail byte:

    bit 7  start of transfer
    bit 6  end of transfer
    bit 5  toggle
    bits 4..0  transfer ID (wraps 0..31)

A payload of up to 7 bytes travels in one frame whose tail has start=end=1
and toggle=0.  Longer payloads are split: the first frame carries the 2-byte
transfer checksum (low byte first) plus the first 5 payload bytes and tail
{start=1, end=0, toggle=0}; continuation frames carry up to 7 payload bytes
each, toggling 1,0,1,... with end=1 only on the last.  Anonymous frames may
not start multi-frame transfers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union

from .crc import transfer_crc
from .errors import FieldOverflowError, PayloadTooLongError, WrongFrameKindError
from .frame import (
    AnonymousMessageId,
    CanFrame,
    FrameId,
    MessageId,
    decode_can_id,
    encode_can_id,
)

TRANSFER_ID_MODULUS = 32
SINGLE_FRAME_MAX_PAYLOAD = 7
#: Safety bound on transfer payloads; the modeled traffic never exceeds 11.
DEFAULT_MAX_PAYLOAD = 256

#: Published 64-bit signature of the ESC throttle command type (ID 1030).
RAW_COMMAND_SIGNATURE = 0x217F5C87D7EC951D
RAW_COMMAND_TYPE_ID = 1030


@dataclass(frozen=True, slots=True)
class TailByte:
    start_of_transfer: bool
    end_of_transfer: bool
    toggle: bool
    transfer_id: int

    def __post_init__(self):
        if not 0 <= self.transfer_id < TRANSFER_ID_MODULUS:
            raise FieldOverflowError(f"transfer_id={self.transfer_id} must be in 0..31")


def encode_tail(tail: TailByte) -> int:
    return (
        (0x80 if tail.start_of_transfer else 0)
        | (0x40 if tail.end_of_transfer else 0)
        | (0x20 if tail.toggle else 0)
        | tail.transfer_id
    )


def decode_tail(byte: int) -> TailByte:
    if not 0 <= byte <= 0xFF:
        raise FieldOverflowError(f"tail byte {byte:#x} out of range")
    return TailByte(
        start_of_transfer=bool(byte & 0x80),
        end_of_transfer=bool(byte & 0x40),
        toggle=bool(byte & 0x20),
        transfer_id=byte & 0x1F,
    )


@dataclass(frozen=True, slots=True)
class Transfer:
    """An assembled application-level message."""

    frame_id: FrameId
    payload: bytes
    transfer_id: int
    #: Checksum verification result; always True for single-frame transfers.
    crc_ok: bool
    #: Timestamp of the transfer's first frame.
    timestamp: float = 0.0


def split_transfer(
    frame_id: FrameId,
    payload: bytes,
    transfer_id: int,
    signature: int,
    timestamp: float = 0.0,
    *,
    max_payload: int = DEFAULT_MAX_PAYLOAD,
) -> list[CanFrame]:
    """Segment a payload into wire frames sharing one CAN ID and timestamp."""
    payload = bytes(payload)
    if len(payload) > max_payload:
        raise PayloadTooLongError(f"payload of {len(payload)} bytes exceeds {max_payload}")
    can_id = encode_can_id(frame_id)

    if len(payload) <= SINGLE_FRAME_MAX_PAYLOAD:
        tail = encode_tail(TailByte(True, True, False, transfer_id))
        return [CanFrame(can_id, payload + bytes([tail]), timestamp)]

    if isinstance(frame_id, AnonymousMessageId):
        raise WrongFrameKindError("anonymous frames are limited to single-frame transfers")

    crc = transfer_crc(signature, payload)
    first = bytes([crc & 0xFF, crc >> 8]) + payload[:5]
    tail = encode_tail(TailByte(True, False, False, transfer_id))
    frames = [CanFrame(can_id, first + bytes([tail]), timestamp)]

    toggle = True
    for offset in range(5, len(payload), 7):
        chunk = payload[offset : offset + 7]
        last = offset + 7 >= len(payload)
        tail = encode_tail(TailByte(False, last, toggle, transfer_id))
        frames.append(CanFrame(can_id, chunk + bytes([tail]), timestamp))
        toggle = not toggle
    return frames


class ReassemblyErrorKind(enum.Enum):
    TOGGLE_MISMATCH = "toggle-mismatch"
    TRANSFER_ID_MISMATCH = "transfer-id-mismatch"
    ORPHAN_CONTINUATION = "orphan-continuation"
    CRC_MISMATCH = "crc-mismatch"
    #: Strict-mode only: a new transfer's ID broke the 0..31 succession.
    OUT_OF_ORDER_TRANSFER_ID = "out-of-order-transfer-id"


@dataclass(frozen=True, slots=True)
class ReassemblyError:
    """In-stream diagnostic; the affected assembly is discarded, not the stream."""

    kind: ReassemblyErrorKind
    can_id: int
    timestamp: float
    detail: str = ""


ReassemblyEvent = Union[Transfer, ReassemblyError]


@dataclass
class _Assembly:
    transfer_id: int
    stored_crc: int
    chunks: list[bytes]
    expect_toggle: bool
    started_at: float


class Reassembler:
    """Streaming reassembler keeping one assembly slot per 29-bit CAN ID.

    Checksums are verified against the signature registered for the frame's
    message type; unregistered types fall back to *default_signature*.  With
    strict_transfer_id=True, a completed transfer whose ID does not succeed
    the previous one on the same CAN ID (mod 32) raises an out-of-order
    diagnostic; the attack listings violate this counter, so it is off by
    default.  Frames without a tail byte (DLC 0) are ignored.
    """

    def __init__(
        self,
        signatures: Optional[Mapping[int, int]] = None,
        default_signature: int = RAW_COMMAND_SIGNATURE,
        strict_transfer_id: bool = False,
    ):
        if signatures is None:
            signatures = {RAW_COMMAND_TYPE_ID: RAW_COMMAND_SIGNATURE}
        self._signatures = dict(signatures)
        self._default_signature = default_signature
        self._strict = strict_transfer_id
        self._slots: dict[int, _Assembly] = {}
        self._last_tid: dict[int, int] = {}

    def _signature_for(self, frame_id: FrameId) -> int:
        if isinstance(frame_id, MessageId):
            return self._signatures.get(frame_id.message_type_id, self._default_signature)
        return self._default_signature

    def _tid_succession(self, frame: CanFrame, tid: int) -> list[ReassemblyError]:
        events = []
        last = self._last_tid.get(frame.can_id)
        if self._strict and last is not None and tid != (last + 1) % TRANSFER_ID_MODULUS:
            events.append(
                ReassemblyError(
                    ReassemblyErrorKind.OUT_OF_ORDER_TRANSFER_ID,
                    frame.can_id,
                    frame.timestamp,
                    f"expected transfer ID {(last + 1) % TRANSFER_ID_MODULUS}, got {tid}",
                )
            )
        self._last_tid[frame.can_id] = tid
        return events

    def push(self, frame: CanFrame) -> list[ReassemblyEvent]:
        """Feed one frame; returns completed transfers and/or diagnostics."""
        if frame.dlc == 0:
            return []
        tail = decode_tail(frame.data[-1])
        body = frame.data[:-1]

        if tail.start_of_transfer and tail.end_of_transfer:
            self._slots.pop(frame.can_id, None)
            events = self._tid_succession(frame, tail.transfer_id)
            events.append(
                Transfer(
                    frame_id=decode_can_id(frame.can_id),
                    payload=body,
                    transfer_id=tail.transfer_id,
                    crc_ok=True,
                    timestamp=frame.timestamp,
                )
            )
            return events

        if tail.start_of_transfer:
            self._slots.pop(frame.can_id, None)
            if tail.toggle:
                return [
                    ReassemblyError(
                        ReassemblyErrorKind.TOGGLE_MISMATCH,
                        frame.can_id,
                        frame.timestamp,
                        "transfer must open with toggle 0",
                    )
                ]
            if len(body) < 2:
                return [
                    ReassemblyError(
                        ReassemblyErrorKind.CRC_MISMATCH,
                        frame.can_id,
                        frame.timestamp,
                        "first frame too short to carry the transfer checksum",
                    )
                ]
            self._slots[frame.can_id] = _Assembly(
                transfer_id=tail.transfer_id,
                stored_crc=body[0] | (body[1] << 8),
                chunks=[body[2:]],
                expect_toggle=True,
                started_at=frame.timestamp,
            )
            return []

        # Continuation frame.
        slot = self._slots.get(frame.can_id)
        if slot is None:
            return [
                ReassemblyError(
                    ReassemblyErrorKind.ORPHAN_CONTINUATION,
                    frame.can_id,
                    frame.timestamp,
                    "continuation without an open transfer",
                )
            ]
        if tail.transfer_id != slot.transfer_id:
            del self._slots[frame.can_id]
            return [
                ReassemblyError(
                    ReassemblyErrorKind.TRANSFER_ID_MISMATCH,
                    frame.can_id,
                    frame.timestamp,
                    f"expected transfer ID {slot.transfer_id}, got {tail.transfer_id}",
                )
            ]
        if tail.toggle != slot.expect_toggle:
            del self._slots[frame.can_id]
            return [
                ReassemblyError(
                    ReassemblyErrorKind.TOGGLE_MISMATCH,
                    frame.can_id,
                    frame.timestamp,
                    f"expected toggle {int(slot.expect_toggle)}, got {int(tail.toggle)}",
                )
            ]
        slot.chunks.append(body)
        slot.expect_toggle = not slot.expect_toggle
        if not tail.end_of_transfer:
            return []

        del self._slots[frame.can_id]
        frame_id = decode_can_id(frame.can_id)
        payload = b"".join(slot.chunks)
        computed = transfer_crc(self._signature_for(frame_id), payload)
        crc_ok = computed == slot.stored_crc
        events = self._tid_succession(frame, tail.transfer_id)
        if not crc_ok:
            events.append(
                ReassemblyError(
                    ReassemblyErrorKind.CRC_MISMATCH,
                    frame.can_id,
                    frame.timestamp,
                    f"stored {slot.stored_crc:#06x}, computed {computed:#06x}",
                )
            )
        events.append(
            Transfer(
                frame_id=frame_id,
                payload=payload,
                transfer_id=tail.transfer_id,
                crc_ok=crc_ok,
                timestamp=slot.started_at,
            )
        )
        return events


def reassemble(
    frames: Iterable[CanFrame],
    signatures: Optional[Mapping[int, int]] = None,
    default_signature: int = RAW_COMMAND_SIGNATURE,
    strict_transfer_id: bool = False,
) -> Iterator[ReassemblyEvent]:
    """Reassemble a frame stream in bus order into transfers and diagnostics."""
    machine = Reassembler(signatures, default_signature, strict_transfer_id)
    for frame in frames:
        yield from machine.push(frame)
