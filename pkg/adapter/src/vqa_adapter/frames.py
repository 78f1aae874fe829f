"""Keyframe extraction: one image per scheduled second, nearest decoded frame."""

from __future__ import annotations

import logging
from pathlib import Path

import cv2

from .records import AdapterError

logger = logging.getLogger(__name__)


def frame_name(video_id: str, timestamp_s: int) -> str:
    return f"{video_id}_{timestamp_s:04d}.jpg"


def extract_frames(
    video_path: str | Path,
    video_id: str,
    timestamps: list[int],
    out_dir: str | Path,
) -> list[Path]:
    """Save the frame nearest each requested second as ``{video_id}_{ts:04d}.jpg``.

    Timestamps beyond the clip are skipped with a warning. Seek accuracy is
    codec dependent; intra-coded formats (MJPG and friends) seek exactly.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    capture = cv2.VideoCapture(str(video_path))
    if not capture.isOpened():
        raise AdapterError(f"cannot decode video {video_path}")
    try:
        fps = capture.get(cv2.CAP_PROP_FPS)
        if fps <= 0:
            raise AdapterError(f"{video_path}: video reports no frame rate")
        frame_count = int(capture.get(cv2.CAP_PROP_FRAME_COUNT))
        written: list[Path] = []
        for ts in sorted(set(timestamps)):
            index = round(ts * fps)
            if index >= frame_count:
                logger.warning(
                    "%s: timestamp %ds is beyond the clip (%d frames at %.2f fps), skipped",
                    video_id, ts, frame_count, fps,
                )
                continue
            capture.set(cv2.CAP_PROP_POS_FRAMES, index)
            ok, frame = capture.read()
            if not ok:
                logger.warning("%s: failed to decode frame %d, skipped", video_id, index)
                continue
            path = out_dir / frame_name(video_id, ts)
            if not cv2.imwrite(str(path), frame):
                raise AdapterError(f"cannot write frame image {path}")
            written.append(path)
        return written
    finally:
        capture.release()
