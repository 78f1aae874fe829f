"""Shared helpers for the adapter test suite."""

import sys
from pathlib import Path

import numpy as np

VOCAB5 = "action_id,name\n4,dance\n10,run\n11,sit\n12,stand\n14,walk\n"


def primary_cli(*args: object) -> list[str]:
    """Command line for the evaluation-side CLI, run as a subprocess."""
    return [sys.executable, "-m", "actioneval.cli", *[str(a) for a in args]]


def make_video(path: Path, seconds: int = 12, fps: float = 4.0) -> Path:
    import cv2

    writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"MJPG"), fps, (64, 48))
    assert writer.isOpened()
    for index in range(int(seconds * fps)):
        frame = np.full((48, 64, 3), (index * 5) % 256, dtype=np.uint8)
        writer.write(frame)
    writer.release()
    return path
