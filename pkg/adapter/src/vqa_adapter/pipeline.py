"""Inference driver: every prompt against every scheduled keyframe, answers
converted to detection rows."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .backends import VqaBackend, load_backend
from .files import read_prompt_bank, read_schedule, write_detection_csv
from .frames import frame_name
from .records import AdapterConfig, DetectionRow, InferenceRequest, InferenceResponse

logger = logging.getLogger(__name__)


@dataclass
class InferenceSummary:
    """Request accounting for one run: requests == frames x prompts - skipped."""

    frames: int = 0
    prompts: int = 0
    requests: int = 0
    skipped_frames: int = 0
    failures: int = 0
    detections: int = 0

    def log(self) -> None:
        logger.info(
            "inference summary: requests=%d frames=%d prompts=%d skipped=%d "
            "failures=%d detections=%d",
            self.requests, self.frames, self.prompts, self.skipped_frames,
            self.failures, self.detections,
        )


def run_inference(
    keyframes: list[tuple[str, int]],
    prompt_bank: dict[int, str],
    config: AdapterConfig,
    backend: VqaBackend | None = None,
    summary: InferenceSummary | None = None,
) -> Iterator[tuple[InferenceRequest, InferenceResponse]]:
    """Yield one (request, response) pair per keyframe/question combination.

    Questions are asked in ascending action-id order within each keyframe.
    Keyframes whose image is required but missing are skipped and counted;
    per-request backend failures are logged, counted and skipped.
    """
    if backend is None:
        backend = load_backend(config)
    if summary is None:
        summary = InferenceSummary()
    summary.prompts = len(prompt_bank)
    questions = sorted(prompt_bank.items())
    for video_id, timestamp_s in keyframes:
        frame_path = None
        if config.frames_dir is not None:
            frame_path = Path(config.frames_dir) / frame_name(video_id, timestamp_s)
        if backend.needs_frames and (frame_path is None or not frame_path.exists()):
            logger.warning("no frame image for %s@%04d, keyframe skipped", video_id, timestamp_s)
            summary.skipped_frames += 1
            continue
        summary.frames += 1
        for action_id, question in questions:
            request = InferenceRequest(video_id, timestamp_s, frame_path, action_id, question)
            summary.requests += 1
            try:
                response = backend.answer(request)
            except Exception:
                logger.exception("inference failed for %s@%04d action %d",
                                 video_id, timestamp_s, action_id)
                summary.failures += 1
                continue
            yield request, response


def answer_to_detections(
    request: InferenceRequest,
    response: InferenceResponse,
    config: AdapterConfig,
) -> list[DetectionRow]:
    """Affirmative, confident answers become one detection per returned box."""
    answer = response.answer_text.strip().lower()
    if answer not in config.affirmative or response.confidence < config.confidence_floor:
        return []
    rows = []
    for box in response.boxes:
        if not box.is_valid():
            logger.warning("dropping invalid box %s for %s@%04d action %d",
                           box, request.video_id, request.timestamp_s, request.action_id)
            continue
        rows.append(
            DetectionRow(
                request.video_id,
                request.timestamp_s,
                box,
                request.action_id,
                response.confidence,
                response.answer_text,
            )
        )
    return rows


def run_to_csv(
    schedule_path: str | Path,
    prompts_path: str | Path,
    out_path: str | Path,
    config: AdapterConfig,
) -> InferenceSummary:
    """Full pass: read schedule and prompts, run the backend, write the CSV."""
    keyframes = read_schedule(schedule_path)
    prompt_bank = read_prompt_bank(prompts_path)
    summary = InferenceSummary()
    rows: list[DetectionRow] = []
    for request, response in run_inference(keyframes, prompt_bank, config, summary=summary):
        rows.extend(answer_to_detections(request, response, config))
    summary.detections = write_detection_csv(rows, out_path)
    summary.log()
    return summary
