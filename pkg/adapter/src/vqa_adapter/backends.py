"""VQA backends: the deterministic stub and the real-model entry-point loader."""

from __future__ import annotations

import hashlib
import importlib
import os
from typing import Protocol

from .records import AdapterConfig, AdapterError, Box, InferenceRequest, InferenceResponse

MODEL_ENTRY_ENV = "VQA_ADAPTER_MODEL"
CACHE_DIR_ENV = "VQA_ADAPTER_CACHE_DIR"


class VqaBackend(Protocol):
    """Anything that can answer one keyframe question."""

    name: str
    needs_frames: bool

    def answer(self, request: InferenceRequest) -> InferenceResponse:
        ...


class StubBackend:
    """Deterministic fake model for plumbing tests.

    Every response is a pure function of (seed, video_id, timestamp_s,
    action_id) via SHA-256, so identical runs produce identical detection
    files on any platform. Roughly half the answers are affirmative, each
    carrying one valid box and a confidence in [0.25, 0.99].
    """

    name = "stub"
    needs_frames = False

    def __init__(self, seed: int = 0):
        self.seed = seed

    def answer(self, request: InferenceRequest) -> InferenceResponse:
        key = f"{self.seed}|{request.video_id}|{request.timestamp_s}|{request.action_id}"
        digest = hashlib.sha256(key.encode("utf-8")).digest()
        affirmative = digest[0] < 128
        confidence = (2500 + int.from_bytes(digest[1:5], "big") % 7400) / 10_000
        if not affirmative:
            return InferenceResponse("no", confidence, ())
        x1 = (int.from_bytes(digest[5:9], "big") % 5000) / 10_000
        y1 = (int.from_bytes(digest[9:13], "big") % 5000) / 10_000
        width = (1000 + int.from_bytes(digest[13:17], "big") % 4000) / 10_000
        height = (1000 + int.from_bytes(digest[17:21], "big") % 4000) / 10_000
        box = Box(x1, y1, x1 + width, y1 + height)
        return InferenceResponse("yes", confidence, (box,))


def load_backend(config: AdapterConfig) -> VqaBackend:
    """Instantiate the configured backend.

    ``real_vqa`` resolves a ``module:function`` entry point from
    ``config.model_entry`` or the VQA_ADAPTER_MODEL environment variable and
    calls it with the model cache directory (VQA_ADAPTER_CACHE_DIR, if set).
    The callable must return a VqaBackend-shaped object.
    """
    if config.backend == "stub":
        return StubBackend(config.stub_seed)
    entry = config.model_entry or os.environ.get(MODEL_ENTRY_ENV)
    if not entry or ":" not in entry:
        raise AdapterError(
            "model load failure: real_vqa needs a 'module:function' entry point "
            f"via --model-entry or ${MODEL_ENTRY_ENV}"
        )
    module_name, _, attr = entry.partition(":")
    try:
        module = importlib.import_module(module_name)
        factory = getattr(module, attr)
        backend = factory(cache_dir=os.environ.get(CACHE_DIR_ENV))
    except AdapterError:
        raise
    except Exception as exc:
        raise AdapterError(f"model load failure: {entry}: {exc}") from exc
    if not hasattr(backend, "answer"):
        raise AdapterError(f"model load failure: {entry} did not return a backend")
    if not hasattr(backend, "needs_frames"):
        backend.needs_frames = True
    return backend
