"""Flight scenario timelines and labeled stream assembly.

A scenario is a flight timeline (boot, takeoff, cruise, landing) with an
ordered list of attack windows inside the cruise phase.  Running one merges
the normal-traffic stream with each attack generator's output into a single
labeled, time-sorted record list.

Labeling modes:

* ORIGIN - a frame is Attack iff an attack generator produced it.
* WINDOW - a frame is Attack iff its timestamp falls inside any attack
  window, normal background traffic included.  This reproduces how the
  datasets this format mirrors were labeled, and is the default.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from .attacks import (
    AttackConfig,
    AttackKind,
    Fidelity,
    RecordedTape,
    attack_stream,
    derive_seed,
)
from .errors import MissingTapeError, UnknownScenarioError
from .frame import CanFrame
from .traffic import (
    DEFAULT_PROFILE,
    FlightTimeline,
    PhaseMultipliers,
    TrafficEntry,
    TrafficProfile,
    normal_stream,
)


class Label(enum.Enum):
    NORMAL = "Normal"
    ATTACK = "Attack"


class LabelMode(enum.Enum):
    ORIGIN = "origin"
    WINDOW = "window"


@dataclass(frozen=True, slots=True)
class LabeledFrame:
    """One dataset record: label, frame, capture interface."""

    label: Label
    frame: CanFrame
    interface: str = "can0"


@dataclass(frozen=True)
class ScenarioSpec:
    scenario_id: int
    total_time: float
    boot_end: float
    takeoff_end: float
    landing_start: float
    attacks: tuple[AttackConfig, ...] = field(default_factory=tuple)
    label_mode: LabelMode = LabelMode.WINDOW

    def __post_init__(self):
        object.__setattr__(self, "attacks", tuple(self.attacks))
        if not 0 <= self.boot_end <= self.takeoff_end <= self.landing_start <= self.total_time:
            raise ValueError("phase boundaries must be ordered within the total time")
        last_end = None
        for cfg in self.attacks:
            if cfg.start < self.takeoff_end or cfg.end > self.landing_start:
                raise ValueError(
                    f"attack window [{cfg.start}, {cfg.end}] leaves the flight phase"
                )
            if last_end is not None and cfg.start < last_end:
                raise ValueError("attack windows must be ordered and disjoint")
            last_end = cfg.end

    def timeline(self) -> FlightTimeline:
        return FlightTimeline(self.boot_end, self.takeoff_end, self.landing_start)

    def needs_tape(self) -> bool:
        return any(cfg.kind is AttackKind.REPLAY for cfg in self.attacks)

    def windows(self) -> list[tuple[float, float]]:
        return [(cfg.start, cfg.end) for cfg in self.attacks]


_FLOOD = AttackKind.FLOODING
_FUZZ = AttackKind.FUZZY
_REPLAY = AttackKind.REPLAY

# (total, boot_end, takeoff_end, landing_start, [(kind, start, duration, interval)])
_BUILTINS: dict[int, tuple] = {
    1: (180, 20, 50, 170, [(_FLOOD, 50, 30, 0.0015), (_FLOOD, 90, 30, 0.0015), (_FLOOD, 130, 30, 0.0015)]),
    2: (180, 20, 50, 170, [(_FLOOD, 50, 30, 0.005), (_FLOOD, 90, 30, 0.005), (_FLOOD, 130, 30, 0.005)]),
    3: (180, 20, 50, 170, [(_FUZZ, 50, 30, 0.0015), (_FUZZ, 90, 30, 0.0015), (_FUZZ, 130, 30, 0.0015)]),
    4: (180, 20, 50, 170, [(_FUZZ, 50, 30, 0.005), (_FUZZ, 90, 30, 0.005), (_FUZZ, 130, 30, 0.005)]),
    5: (210, 30, 60, 200, [(_REPLAY, 60, 40, 0.005), (_REPLAY, 110, 30, 0.005), (_REPLAY, 160, 40, 0.005)]),
    6: (280, 30, 60, 270, [(_REPLAY, 60, 40, 0.005), (_REPLAY, 110, 40, 0.005), (_REPLAY, 170, 40, 0.005), (_REPLAY, 220, 40, 0.005)]),
    7: (240, 30, 50, 230, [(_FLOOD, 50, 40, 0.005), (_FUZZ, 100, 30, 0.005), (_FLOOD, 140, 40, 0.005), (_FUZZ, 190, 30, 0.005)]),
    8: (240, 30, 60, 230, [(_FUZZ, 60, 40, 0.005), (_REPLAY, 110, 30, 0.005), (_FUZZ, 150, 40, 0.005), (_REPLAY, 200, 30, 0.005)]),
    9: (270, 30, 60, 260, [(_FLOOD, 60, 50, 0.005), (_REPLAY, 120, 30, 0.005), (_FLOOD, 160, 40, 0.005), (_REPLAY, 210, 40, 0.005)]),
    10: (220, 30, 60, 210, [(_FLOOD, 60, 50, 0.005), (_FUZZ, 120, 40, 0.005), (_REPLAY, 170, 30, 0.005)]),
}


def builtin_scenario(number: int) -> ScenarioSpec:
    """One of the ten canned attack timelines."""
    try:
        total, boot_end, takeoff_end, landing_start, windows = _BUILTINS[number]
    except (KeyError, TypeError) as exc:
        raise UnknownScenarioError(f"scenario {number!r} is not one of 1..10") from exc
    attacks = tuple(
        AttackConfig(kind=kind, start=float(start), duration=float(dur), interval=interval)
        for kind, start, dur, interval in windows
    )
    return ScenarioSpec(
        scenario_id=number,
        total_time=float(total),
        boot_end=float(boot_end),
        takeoff_end=float(takeoff_end),
        landing_start=float(landing_start),
        attacks=attacks,
    )


def _in_any_window(t: float, windows: list[tuple[float, float]]) -> bool:
    return any(start <= t < end for start, end in windows)


def run_scenario(
    spec: ScenarioSpec,
    profile: TrafficProfile | None = None,
    seed: int = 0,
    tape: RecordedTape | None = None,
    interface: str = "can0",
) -> list[LabeledFrame]:
    """Generate the labeled frame sequence for one scenario.

    The normal stream and every attack stream get seeds derived from the
    master seed (explicit AttackConfig seeds win), then everything is
    stable-sorted by timestamp with normal frames ahead of attack frames on
    ties.  Output is byte-exactly determined by (spec, profile, seed, tape).
    """
    if spec.needs_tape() and tape is None:
        raise MissingTapeError("scenario contains a replay attack; supply a tape")
    if profile is None:
        profile = DEFAULT_PROFILE

    windows = spec.windows()
    window_mode = spec.label_mode is LabelMode.WINDOW

    def normal_label(t: float) -> Label:
        if window_mode and _in_any_window(t, windows):
            return Label.ATTACK
        return Label.NORMAL

    keyed: list[tuple[float, int, int, LabeledFrame]] = []
    seq = 0
    for frame in normal_stream(profile, spec.total_time, derive_seed(seed, 0), spec.timeline()):
        keyed.append((frame.timestamp, 0, seq, LabeledFrame(normal_label(frame.timestamp), frame, interface)))
        seq += 1
    for index, cfg in enumerate(spec.attacks):
        if cfg.kind is AttackKind.FUZZY and cfg.seed is None:
            cfg = replace(cfg, seed=derive_seed(seed, index + 1))
        for frame in attack_stream(cfg, tape):
            keyed.append((frame.timestamp, 1, seq, LabeledFrame(Label.ATTACK, frame, interface)))
            seq += 1

    keyed.sort(key=lambda item: (item[0], item[1], item[2]))
    return [item[3] for item in keyed]


# ---------------------------------------------------------------------------
# Config-file (de)serialization.  Scenario and profile files are plain JSON
# dictionaries; the schema is documented in the README.

def spec_to_dict(spec: ScenarioSpec) -> dict:
    return {
        "scenario_id": spec.scenario_id,
        "total_time": spec.total_time,
        "boot_end": spec.boot_end,
        "takeoff_end": spec.takeoff_end,
        "landing_start": spec.landing_start,
        "label_mode": spec.label_mode.value,
        "attacks": [
            {
                "kind": cfg.kind.value,
                "start": cfg.start,
                "duration": cfg.duration,
                "interval": cfg.interval,
                "seed": cfg.seed,
                "fidelity": cfg.fidelity.value,
                "target_id": f"{cfg.target_id:08x}",
                "signature": f"{cfg.signature:016x}",
            }
            for cfg in spec.attacks
        ],
    }


def spec_from_dict(data: dict) -> ScenarioSpec:
    attacks = tuple(
        AttackConfig(
            kind=AttackKind(a["kind"]),
            start=float(a["start"]),
            duration=float(a["duration"]),
            interval=float(a["interval"]),
            seed=a.get("seed"),
            fidelity=Fidelity(a.get("fidelity", Fidelity.REPLICA.value)),
            target_id=int(a.get("target_id", "05040601"), 16),
            signature=int(a.get("signature", "217f5c87d7ec951d"), 16),
        )
        for a in data.get("attacks", [])
    )
    return ScenarioSpec(
        scenario_id=int(data["scenario_id"]),
        total_time=float(data["total_time"]),
        boot_end=float(data["boot_end"]),
        takeoff_end=float(data["takeoff_end"]),
        landing_start=float(data["landing_start"]),
        attacks=attacks,
        label_mode=LabelMode(data.get("label_mode", LabelMode.WINDOW.value)),
    )


def profile_to_dict(profile: TrafficProfile) -> dict:
    return {
        "multipliers": {
            "boot": profile.multipliers.boot,
            "takeoff": profile.multipliers.takeoff,
            "cruise": profile.multipliers.cruise,
            "landing": profile.multipliers.landing,
        },
        "catalog": [
            {
                "name": e.name,
                "message_type_id": e.message_type_id,
                "source_node_id": e.source_node_id,
                "priority": e.priority,
                "payload": e.payload.hex(),
                "rate": e.rate,
                "signature": f"{e.signature:016x}",
            }
            for e in profile.catalog
        ],
    }


def profile_from_dict(data: dict) -> TrafficProfile:
    mults = data.get("multipliers", {})
    return TrafficProfile(
        catalog=tuple(
            TrafficEntry(
                name=e["name"],
                message_type_id=int(e["message_type_id"]),
                source_node_id=int(e["source_node_id"]),
                priority=int(e["priority"]),
                payload=bytes.fromhex(e["payload"]),
                rate=float(e["rate"]),
                signature=int(e.get("signature", "0"), 16),
            )
            for e in data["catalog"]
        ),
        multipliers=PhaseMultipliers(
            boot=float(mults.get("boot", 0.05)),
            takeoff=float(mults.get("takeoff", 1.1)),
            cruise=float(mults.get("cruise", 1.0)),
            landing=float(mults.get("landing", 0.9)),
        ),
    )
