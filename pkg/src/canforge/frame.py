"""CAN 2.0B frame model and the three 29-bit arbitration-ID layouts.

The extended identifier packs, from most to least significant bit:

    message    [28:24] priority | [23:8] message type ID     | [7]=0 | [6:0] source
    anonymous  [28:24] priority | [23:10] discriminator
               | [9:8] type ID low bits                      | [7]=0 | [6:0]=0
    service    [28:24] priority | [23:16] service type ID
               | [15] request-not-response | [14:8] destination | [7]=1 | [6:0] source

Bit 7 (service-not-message) selects service frames.  A zero source field on a
non-service frame marks it anonymous, so node 0 is reserved and ordinary
message frames use sources 1..127.  Every 29-bit value therefore decodes to
exactly one of the three variants.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import (
    DataTooLongError,
    FieldOverflowError,
    IdOutOfRangeError,
    InvalidSourceError,
)

MAX_CAN_ID = (1 << 29) - 1
MAX_DATA_BYTES = 8

#: Timestamps are relative seconds held at microsecond resolution.
TIMESTAMP_RESOLUTION = 1e-6


def _quantize(seconds: float) -> float:
    return round(seconds * 1e6) / 1e6


@dataclass(frozen=True, slots=True)
class CanFrame:
    """One CAN 2.0B extended frame: 29-bit ID, 0..8 data bytes, timestamp."""

    can_id: int
    data: bytes
    timestamp: float = 0.0

    def __post_init__(self):
        if not 0 <= self.can_id <= MAX_CAN_ID:
            raise IdOutOfRangeError(f"CAN ID {self.can_id:#x} does not fit in 29 bits")
        if not isinstance(self.data, bytes):
            object.__setattr__(self, "data", bytes(self.data))
        if len(self.data) > MAX_DATA_BYTES:
            raise DataTooLongError(f"{len(self.data)} data bytes exceed the CAN limit of 8")
        if not self.timestamp >= 0.0:
            raise ValueError(f"timestamp must be >= 0, got {self.timestamp}")
        object.__setattr__(self, "timestamp", _quantize(self.timestamp))

    @property
    def dlc(self) -> int:
        return len(self.data)


def make_frame(can_id: int, data: bytes, timestamp: float = 0.0) -> CanFrame:
    """Validate and build a frame; the DLC is implied by the data length."""
    return CanFrame(can_id, bytes(data), timestamp)


def _check_width(name: str, value: int, bits: int) -> None:
    if not 0 <= value < (1 << bits):
        raise FieldOverflowError(f"{name}={value} does not fit in {bits} bits")


@dataclass(frozen=True, slots=True)
class MessageId:
    """Broadcast message identifier (e.g. an ESC throttle command)."""

    priority: int
    message_type_id: int
    source_node_id: int

    def __post_init__(self):
        _check_width("priority", self.priority, 5)
        _check_width("message_type_id", self.message_type_id, 16)
        if self.source_node_id == 0:
            raise InvalidSourceError(
                "source node 0 is reserved for anonymous frames; use AnonymousMessageId"
            )
        _check_width("source_node_id", self.source_node_id, 7)


@dataclass(frozen=True, slots=True)
class AnonymousMessageId:
    """Message from an unaddressed node; the source field is implicitly 0."""

    priority: int
    discriminator: int
    message_type_low: int

    def __post_init__(self):
        _check_width("priority", self.priority, 5)
        _check_width("discriminator", self.discriminator, 14)
        _check_width("message_type_low", self.message_type_low, 2)


@dataclass(frozen=True, slots=True)
class ServiceId:
    """Service request/response identifier; bit 7 of the CAN ID is 1."""

    priority: int
    service_type_id: int
    request_not_response: bool
    destination_node_id: int
    source_node_id: int

    def __post_init__(self):
        _check_width("priority", self.priority, 5)
        _check_width("service_type_id", self.service_type_id, 8)
        if self.request_not_response not in (0, 1):
            raise FieldOverflowError("request_not_response is a single bit")
        object.__setattr__(self, "request_not_response", bool(self.request_not_response))
        _check_width("destination_node_id", self.destination_node_id, 7)
        _check_width("source_node_id", self.source_node_id, 7)


FrameId = Union[MessageId, AnonymousMessageId, ServiceId]


def decode_can_id(can_id: int) -> FrameId:
    """Split a 29-bit arbitration ID into its typed field set.

    Dispatch is total: bit 7 selects service frames, otherwise a zero source
    field selects anonymous frames and anything else is a plain message.
    """
    if not 0 <= can_id <= MAX_CAN_ID:
        raise IdOutOfRangeError(f"CAN ID {can_id:#x} does not fit in 29 bits")
    priority = (can_id >> 24) & 0x1F
    source = can_id & 0x7F
    if can_id & 0x80:
        return ServiceId(
            priority=priority,
            service_type_id=(can_id >> 16) & 0xFF,
            request_not_response=bool((can_id >> 15) & 1),
            destination_node_id=(can_id >> 8) & 0x7F,
            source_node_id=source,
        )
    if source == 0:
        return AnonymousMessageId(
            priority=priority,
            discriminator=(can_id >> 10) & 0x3FFF,
            message_type_low=(can_id >> 8) & 0x3,
        )
    return MessageId(
        priority=priority,
        message_type_id=(can_id >> 8) & 0xFFFF,
        source_node_id=source,
    )


def encode_can_id(frame_id: FrameId) -> int:
    """Pack a typed field set back into the 29-bit arbitration ID.

    Inverse of decode_can_id; field widths are enforced by the dataclass
    constructors, so any instance encodes cleanly.
    """
    if isinstance(frame_id, MessageId):
        return (
            (frame_id.priority << 24)
            | (frame_id.message_type_id << 8)
            | frame_id.source_node_id
        )
    if isinstance(frame_id, AnonymousMessageId):
        return (
            (frame_id.priority << 24)
            | (frame_id.discriminator << 10)
            | (frame_id.message_type_low << 8)
        )
    if isinstance(frame_id, ServiceId):
        return (
            (frame_id.priority << 24)
            | (frame_id.service_type_id << 16)
            | (int(frame_id.request_not_response) << 15)
            | (frame_id.destination_node_id << 8)
            | 0x80
            | frame_id.source_node_id
        )
    raise TypeError(f"not a frame ID: {frame_id!r}")
