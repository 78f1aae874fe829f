"""vqa_adapter: run a VQA model over scheduled keyframes and emit detections.

Consumes the schedule and prompt-bank CSVs produced by the actioneval
toolkit, asks the configured backend every question for every keyframe, and
writes the detection CSV the toolkit evaluates. A deterministic stub backend
makes the whole pipeline testable without model weights or real videos.
"""

__version__ = "0.1.0"

from .backends import StubBackend, VqaBackend, load_backend
from .files import read_prompt_bank, read_schedule, write_detection_csv
from .frames import extract_frames
from .pipeline import InferenceSummary, answer_to_detections, run_inference, run_to_csv
from .records import (
    AdapterConfig,
    AdapterError,
    Box,
    DetectionRow,
    InferenceRequest,
    InferenceResponse,
)

__all__ = [
    "AdapterConfig",
    "AdapterError",
    "Box",
    "DetectionRow",
    "InferenceRequest",
    "InferenceResponse",
    "InferenceSummary",
    "StubBackend",
    "VqaBackend",
    "answer_to_detections",
    "extract_frames",
    "load_backend",
    "read_prompt_bank",
    "read_schedule",
    "run_inference",
    "run_to_csv",
    "write_detection_csv",
]
