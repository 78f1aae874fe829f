"""1 Hz keyframe schedules: which (video, second) pairs to run inference on."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import ScheduleError


@dataclass(frozen=True)
class ScheduleConfig:
    """Inclusive sampling window in integer seconds.

    The defaults cover the standard 902..1798 s annotated segment of AVA
    movies at a 1-second interval, i.e. 897 keyframes per video.
    """

    start_s: int = 902
    end_s: int = 1798
    interval_s: int = 1

    def __post_init__(self) -> None:
        if self.start_s > self.end_s:
            raise ScheduleError(f"start_s {self.start_s} must not exceed end_s {self.end_s}")
        if self.interval_s < 1:
            raise ScheduleError(f"interval_s must be >= 1, got {self.interval_s}")

    def timestamps(self) -> range:
        return range(self.start_s, self.end_s + 1, self.interval_s)


@dataclass(frozen=True)
class KeyframeSchedule:
    """Ascending keyframe timestamps per video id."""

    by_video: Mapping[str, tuple[int, ...]]

    @property
    def total_keyframes(self) -> int:
        return sum(len(ts) for ts in self.by_video.values())

    def __len__(self) -> int:
        return len(self.by_video)


def build_schedule(video_ids: Iterable[str], config: ScheduleConfig | None = None) -> KeyframeSchedule:
    """Assign every video the window's timestamps; duplicate ids are an error."""
    if config is None:
        config = ScheduleConfig()
    stamps = tuple(config.timestamps())
    by_video: dict[str, tuple[int, ...]] = {}
    for vid in video_ids:
        if not vid or "," in vid or "\n" in vid:
            raise ScheduleError(f"bad video id {vid!r}")
        if vid in by_video:
            raise ScheduleError(f"duplicate video id {vid!r}")
        by_video[vid] = stamps
    if not by_video:
        raise ScheduleError("no video ids given")
    return KeyframeSchedule(by_video)


def serialize_schedule(schedule: KeyframeSchedule) -> bytes:
    """Render ``video_id,timestamp`` rows, videos sorted, timestamps ascending."""
    out = io.StringIO()
    for vid in sorted(schedule.by_video):
        for ts in schedule.by_video[vid]:
            out.write(f"{vid},{ts:04d}\n")
    return out.getvalue().encode("utf-8")
