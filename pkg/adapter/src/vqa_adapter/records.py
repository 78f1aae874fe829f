"""Request/response/record types shared across the adapter."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple


class AdapterError(Exception):
    """Unrecoverable adapter failure (bad inputs, undecodable video, model load)."""


class Box(NamedTuple):
    """Axis-aligned box in normalized image coordinates."""

    x1: float
    y1: float
    x2: float
    y2: float

    def is_valid(self) -> bool:
        return 0.0 <= self.x1 < self.x2 <= 1.0 and 0.0 <= self.y1 < self.y2 <= 1.0


class InferenceRequest(NamedTuple):
    """One question about one keyframe."""

    video_id: str
    timestamp_s: int
    frame_path: Path | None
    action_id: int
    question: str


class InferenceResponse(NamedTuple):
    """What the model said: answer text, its confidence, grounded boxes."""

    answer_text: str
    confidence: float
    boxes: tuple[Box, ...]


class DetectionRow(NamedTuple):
    """One row of the detection CSV."""

    video_id: str
    timestamp_s: int
    box: Box
    action_id: int
    score: float
    answer_text: str


DEFAULT_AFFIRMATIVE = frozenset({"yes", "true"})


@dataclass(frozen=True)
class AdapterConfig:
    """Run configuration.

    ``backend`` selects the detection source: ``stub`` is the deterministic
    offline fake, ``real_vqa`` loads a user-supplied model entry point
    (``module:function``, see backends.load_backend). Answers whose
    normalized text is in ``affirmative`` and whose confidence reaches
    ``confidence_floor`` become detections, one per returned box.
    """

    backend: str = "stub"
    affirmative: frozenset[str] = DEFAULT_AFFIRMATIVE
    confidence_floor: float = 0.0
    stub_seed: int = 0
    frames_dir: Path | None = None
    model_entry: str | None = None

    def __post_init__(self) -> None:
        if self.backend not in ("stub", "real_vqa"):
            raise AdapterError(f"unknown backend {self.backend!r}")
        if not self.affirmative:
            raise AdapterError("affirmative lexicon must not be empty")
        if not 0.0 <= self.confidence_floor <= 1.0:
            raise AdapterError(f"confidence floor must be in [0, 1], got {self.confidence_floor}")
