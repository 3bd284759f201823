"""Dataset summary statistics, a rate-threshold detector, and its scoring.

The detector is a deliberately simple baseline: tumbling windows over the
timestamps of one CAN ID, alarm when the window's frame rate exceeds a
threshold.  The default threshold is twice the default profile's
steady-state rate for the command ID, which the flooding and fuzzy
injections exceed by an order of magnitude.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from .attacks import DEFAULT_TARGET_ID
from .errors import EmptyDatasetError
from .scenarios import Label, LabeledFrame
from .traffic import DEFAULT_PROFILE
from .transfer import RAW_COMMAND_TYPE_ID

DEFAULT_DETECTION_WINDOW = 1.0
#: Twice the calibrated normal frame rate of the command ID (2 * 280 f/s).
DEFAULT_DETECTION_THRESHOLD = 2.0 * DEFAULT_PROFILE.frame_rate_for_type(RAW_COMMAND_TYPE_ID)


@dataclass(frozen=True, slots=True)
class IntervalStats:
    """Inter-arrival statistics in seconds; all zero when under two samples."""

    mean: float = 0.0
    min: float = 0.0
    max: float = 0.0
    stddev: float = 0.0


def _interval_stats(times: list[float]) -> IntervalStats:
    gaps = [b - a for a, b in zip(times, times[1:])]
    if not gaps:
        return IntervalStats()
    return IntervalStats(
        mean=statistics.fmean(gaps),
        min=min(gaps),
        max=max(gaps),
        stddev=statistics.pstdev(gaps),
    )


@dataclass(frozen=True)
class DatasetSummary:
    total_time: float
    normal_frames: int
    attack_frames: int
    per_id_counts: dict[int, int]
    inter_arrival: IntervalStats
    inter_arrival_by_label: dict[Label, IntervalStats]

    @property
    def total_frames(self) -> int:
        return self.normal_frames + self.attack_frames


def summarize(records: list[LabeledFrame]) -> DatasetSummary:
    """Exact counts and inter-arrival stats for a sorted record list."""
    if not records:
        raise EmptyDatasetError("cannot summarize an empty dataset")
    per_id: dict[int, int] = {}
    times: list[float] = []
    times_by_label: dict[Label, list[float]] = {Label.NORMAL: [], Label.ATTACK: []}
    normal = attack = 0
    for record in records:
        if record.label is Label.ATTACK:
            attack += 1
        else:
            normal += 1
        frame = record.frame
        per_id[frame.can_id] = per_id.get(frame.can_id, 0) + 1
        times.append(frame.timestamp)
        times_by_label[record.label].append(frame.timestamp)
    return DatasetSummary(
        total_time=times[-1] - times[0],
        normal_frames=normal,
        attack_frames=attack,
        per_id_counts=per_id,
        inter_arrival=_interval_stats(times),
        inter_arrival_by_label={
            label: _interval_stats(ts) for label, ts in times_by_label.items()
        },
    )


@dataclass(frozen=True, slots=True)
class AlarmWindow:
    start: float
    end: float

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError(f"alarm window [{self.start}, {self.end}] is empty")


def detect_frequency(
    records: list[LabeledFrame],
    window: float = DEFAULT_DETECTION_WINDOW,
    threshold: float = DEFAULT_DETECTION_THRESHOLD,
    target_id: int = DEFAULT_TARGET_ID,
) -> list[AlarmWindow]:
    """Alarm every tumbling window where the target ID's rate exceeds threshold.

    Windows are anchored at the first record's timestamp; adjacent alarmed
    windows merge into one alarm.
    """
    if not window > 0:
        raise ValueError(f"window must be > 0, got {window}")
    if not threshold > 0:
        raise ValueError(f"threshold must be > 0, got {threshold}")
    if not records:
        return []
    t0 = records[0].frame.timestamp
    counts: dict[int, int] = {}
    for record in records:
        frame = record.frame
        if frame.can_id == target_id:
            bin_index = int((frame.timestamp - t0) // window)
            counts[bin_index] = counts.get(bin_index, 0) + 1

    alarmed = sorted(i for i, n in counts.items() if n / window > threshold)
    alarms: list[AlarmWindow] = []
    run_start = prev = None
    for i in alarmed:
        if run_start is None:
            run_start = prev = i
        elif i == prev + 1:
            prev = i
        else:
            alarms.append(AlarmWindow(t0 + run_start * window, t0 + (prev + 1) * window))
            run_start = prev = i
    if run_start is not None:
        alarms.append(AlarmWindow(t0 + run_start * window, t0 + (prev + 1) * window))
    return alarms


@dataclass(frozen=True, slots=True)
class DetectionScore:
    precision: float
    recall: float


def evaluate_detection(records: list[LabeledFrame], alarms: list[AlarmWindow]) -> DetectionScore:
    """Frame-level precision/recall of alarms against the Attack label.

    A frame is predicted positive iff its timestamp lies in an alarm window.
    Conventions (documented, division-by-zero free): precision is 1.0 when
    nothing is predicted positive, recall is 1.0 when nothing is labeled
    Attack.
    """
    tp = fp = fn = 0
    for record in records:
        t = record.frame.timestamp
        predicted = any(a.start <= t < a.end for a in alarms)
        actual = record.label is Label.ATTACK
        if predicted and actual:
            tp += 1
        elif predicted:
            fp += 1
        elif actual:
            fn += 1
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    return DetectionScore(precision=precision, recall=recall)
