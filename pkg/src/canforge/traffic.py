"""Synthetic normal bus traffic: a periodic message catalog shaped by flight phases.

The quadcopter's steady-state bus load is modeled as a catalog of periodic
message emitters (throttle commands, ESC status, power status, heartbeats,
magnetometer), each a transfer stream at a fixed rate with a small seeded
timing jitter.  Flight phases scale the rates: the bus is nearly silent
while booting, slightly busier during takeoff, and a touch quieter on
landing.  The default catalog is calibrated so a 180-second flight with the
default timeline lands near 91,000 frames.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .attacks import DEFAULT_TARGET_ID, RecordedTape, capture_tape, derive_seed
from .frame import CanFrame, MessageId, encode_can_id
from .transfer import RAW_COMMAND_SIGNATURE, RAW_COMMAND_TYPE_ID, split_transfer

#: Relative jitter applied to each period (uniform in 1 +/- this).
TIMING_JITTER = 0.10

MAX_TEMPLATE_BYTES = 11


def frames_per_transfer(payload_len: int) -> int:
    """Wire frames needed for one transfer of the given payload length."""
    if payload_len <= 7:
        return 1
    return 1 + -(-(payload_len - 5) // 7)


@dataclass(frozen=True)
class PhaseMultipliers:
    """Rate scaling per flight phase."""

    boot: float = 0.05
    takeoff: float = 1.1
    cruise: float = 1.0
    landing: float = 0.9


@dataclass(frozen=True)
class FlightTimeline:
    """Phase boundaries in seconds: boot < takeoff < cruise < landing."""

    boot_end: float
    takeoff_end: float
    landing_start: float

    def multiplier_at(self, t: float, m: PhaseMultipliers) -> float:
        if t < self.boot_end:
            return m.boot
        if t < self.takeoff_end:
            return m.takeoff
        if t < self.landing_start:
            return m.cruise
        return m.landing


def default_timeline(duration: float) -> FlightTimeline:
    """Scenario-shaped boundaries for long runs; cruise-only for short ones."""
    if duration >= 60:
        return FlightTimeline(20.0, 50.0, duration - 10.0)
    return FlightTimeline(0.0, 0.0, duration)


@dataclass(frozen=True)
class TrafficEntry:
    """One periodic emitter in the catalog."""

    name: str
    message_type_id: int
    source_node_id: int
    priority: int
    payload: bytes
    #: Transfers per second at multiplier 1.0.
    rate: float
    signature: int

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError(f"rate must be > 0, got {self.rate}")
        if len(self.payload) > MAX_TEMPLATE_BYTES:
            raise ValueError(f"payload template limited to {MAX_TEMPLATE_BYTES} bytes")

    @property
    def frames_each(self) -> int:
        return frames_per_transfer(len(self.payload))

    @property
    def can_id(self) -> int:
        return encode_can_id(
            MessageId(self.priority, self.message_type_id, self.source_node_id)
        )


@dataclass(frozen=True)
class TrafficProfile:
    catalog: tuple[TrafficEntry, ...]
    multipliers: PhaseMultipliers = field(default_factory=PhaseMultipliers)

    def steady_frame_rate(self) -> float:
        """Aggregate frames/second at multiplier 1.0."""
        return sum(e.rate * e.frames_each for e in self.catalog)

    def frame_rate_for_type(self, message_type_id: int) -> float:
        return sum(
            e.rate * e.frames_each
            for e in self.catalog
            if e.message_type_id == message_type_id
        )

    def signatures(self) -> dict[int, int]:
        """Message type ID -> signature map for reassembly."""
        return {e.message_type_id: e.signature for e in self.catalog}


# Signatures other than the command type's are synthetic placeholders: only
# the command signature is published, and single-frame transfers never use
# theirs on the wire.
_ESC_STATUS_SIGNATURE = 0x4A2138E1C2E613A6
_POWER_STATUS_SIGNATURE = 0x3A2FBBBD29C07D3B

_HOVER_COMMAND = b"\x10\x27" * 4 + b"\x00\x00\x00"  # four mid-range setpoints
_LEFTWARD_COMMAND = b"\x98\x3a\x10\x27\x98\x3a\x10\x27\x00\x00\x00"

DEFAULT_PROFILE = TrafficProfile(
    catalog=(
        TrafficEntry("esc-command", RAW_COMMAND_TYPE_ID, 1, 5, _HOVER_COMMAND, 140.0, RAW_COMMAND_SIGNATURE),
        TrafficEntry("esc-status-10", 1034, 10, 7, b"\x00\x2c\x01\x4b\x00\x32", 50.0, _ESC_STATUS_SIGNATURE),
        TrafficEntry("esc-status-11", 1034, 11, 7, b"\x00\x2c\x01\x4b\x00\x33", 50.0, _ESC_STATUS_SIGNATURE),
        TrafficEntry("esc-status-12", 1034, 12, 7, b"\x00\x2c\x01\x4b\x00\x34", 50.0, _ESC_STATUS_SIGNATURE),
        TrafficEntry("esc-status-13", 1034, 13, 7, b"\x00\x2c\x01\x4b\x00\x35", 50.0, _ESC_STATUS_SIGNATURE),
        TrafficEntry("power-status", 1092, 2, 16, b"\x64\x00\x0b\x2c\x01\x00\x00\x00\x00\x00\x01", 30.0, _POWER_STATUS_SIGNATURE),
        TrafficEntry("node-status-1", 341, 1, 20, bytes(7), 1.0, 0),
        TrafficEntry("node-status-2", 341, 2, 20, bytes(7), 1.0, 0),
        TrafficEntry("node-status-10", 341, 10, 20, bytes(7), 1.0, 0),
        TrafficEntry("node-status-11", 341, 11, 20, bytes(7), 1.0, 0),
        TrafficEntry("node-status-12", 341, 12, 20, bytes(7), 1.0, 0),
        TrafficEntry("node-status-13", 341, 13, 20, bytes(7), 1.0, 0),
        TrafficEntry("mag-field", 1002, 2, 16, b"\x3c\x00\x1e\x00\xc8\x0f\x00", 12.0, 0),
    )
)


def normal_stream(
    profile: TrafficProfile,
    duration: float,
    seed: int,
    timeline: FlightTimeline | None = None,
) -> list[CanFrame]:
    """Generate normal bus frames over [0, duration), sorted by timestamp.

    Each catalog entry emits transfers at its phase-adjusted rate with a
    uniform +/-10% period jitter; per-entry transfer IDs increment mod 32.
    Fully determined by (profile, duration, seed, timeline).
    """
    if duration < 0:
        raise ValueError(f"duration must be >= 0, got {duration}")
    if timeline is None:
        timeline = default_timeline(duration)

    frames: list[CanFrame] = []
    for index, entry in enumerate(profile.catalog):
        rng = random.Random(derive_seed(seed, index))
        frame_id = MessageId(entry.priority, entry.message_type_id, entry.source_node_id)
        period = 1.0 / entry.rate
        tid = 0
        t = rng.uniform(0.0, period / timeline.multiplier_at(0.0, profile.multipliers))
        while t < duration:
            frames.extend(split_transfer(frame_id, entry.payload, tid, entry.signature, t))
            tid = (tid + 1) % 32
            m = timeline.multiplier_at(t, profile.multipliers)
            t += (period / m) * rng.uniform(1.0 - TIMING_JITTER, 1.0 + TIMING_JITTER)
    frames.sort(key=lambda f: f.timestamp)
    return frames


#: Fixed seed of the bundled tape, so every run ships the same capture.
_TAPE_SEED = 0xCA7B0A7


def leftward_command_tape(duration: float = 45.0, seed: int = _TAPE_SEED) -> RecordedTape:
    """Synthetic stand-in for a recorded capture of leftward-motion commands.

    Runs the traffic model with the command entry alone, payload switched to
    an asymmetric throttle mix, then captures the command CAN ID.  Bundled
    because the original flight recording is not published.
    """
    command = replace(DEFAULT_PROFILE.catalog[0], payload=_LEFTWARD_COMMAND)
    profile = TrafficProfile(catalog=(command,))
    frames = normal_stream(profile, duration, seed, FlightTimeline(0.0, 0.0, duration))
    return capture_tape(frames, DEFAULT_TARGET_ID)
