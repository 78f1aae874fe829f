"""Readers for the schedule/prompt CSVs and the detection CSV writer.

These mirror the toolkit's external file contracts; the adapter talks to the
evaluation side only through these formats.
"""

from __future__ import annotations

import logging
from pathlib import Path

from .records import AdapterError, DetectionRow

logger = logging.getLogger(__name__)


def read_schedule(path: str | Path) -> list[tuple[str, int]]:
    """``video_id,timestamp`` rows, in file order."""
    keyframes: list[tuple[str, int]] = []
    for line_no, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        vid, sep, raw_ts = line.partition(",")
        if not sep or not vid:
            raise AdapterError(f"{path}: line {line_no}: expected 'video_id,timestamp'")
        try:
            keyframes.append((vid, int(raw_ts)))
        except ValueError:
            raise AdapterError(f"{path}: line {line_no}: bad timestamp {raw_ts!r}") from None
    if not keyframes:
        raise AdapterError(f"{path}: schedule is empty")
    return keyframes


def read_prompt_bank(path: str | Path) -> dict[int, str]:
    """``action_id,question`` rows into an id -> question mapping."""
    bank: dict[int, str] = {}
    for line_no, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        raw_id, sep, question = line.partition(",")
        if not sep or not question:
            raise AdapterError(f"{path}: line {line_no}: expected 'action_id,question'")
        try:
            action_id = int(raw_id)
        except ValueError:
            raise AdapterError(f"{path}: line {line_no}: bad action id {raw_id!r}") from None
        if action_id in bank:
            raise AdapterError(f"{path}: line {line_no}: duplicate action id {action_id}")
        bank[action_id] = question
    if not bank:
        raise AdapterError(f"{path}: prompt bank is empty")
    return bank


def _clean_text(value: str) -> str:
    # the CSV schema has no quoting, so commas and newlines cannot survive
    return " ".join(value.replace(",", " ").split())


def detection_sort_key(row: DetectionRow):
    return (row.video_id, row.timestamp_s, row.action_id, -row.score)


def write_detection_csv(rows, path: str | Path) -> int:
    """Write rows sorted by (video, timestamp, action, descending score).

    The output parses on the evaluation side with zero rejected rows;
    coordinates and scores carry 6 decimals, timestamps are zero-padded.
    """
    ordered = sorted(rows, key=detection_sort_key)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        for row in ordered:
            box = row.box
            handle.write(
                f"{row.video_id},{row.timestamp_s:04d},{box.x1:.6f},{box.y1:.6f},"
                f"{box.x2:.6f},{box.y2:.6f},{row.action_id},{row.score:.6f},"
                f"{_clean_text(row.answer_text)}\n"
            )
    logger.info("wrote %d detection rows to %s", len(ordered), path)
    return len(ordered)
