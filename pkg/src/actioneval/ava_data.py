"""Reading, validating, indexing and writing AVA-style annotation CSVs.

Three comma-separated formats, UTF-8, ``\\n`` or ``\\r\\n`` line endings,
no quoting (fields may not contain commas):

* ground truth: ``video_id,timestamp,x1,y1,x2,y2,action_id,person_id``
* detections:   ``video_id,timestamp,x1,y1,x2,y2,action_id,score[,answer_text]``
* vocabulary:   ``action_id,name`` (optional header row, auto-detected)

Coordinates are normalized corner coordinates in [0, 1] with strictly
positive box area; timestamps are the integer second of the annotated
keyframe. The record parsers stream their input line by line, so files
far larger than memory can be validated in a single bounded pass.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import BinaryIO, Iterable, Iterator, NamedTuple, Union

from .errors import ParseError, SerializeError, VocabularyError

Source = Union[str, "os.PathLike[str]", bytes, bytearray, BinaryIO]

# Rejection reasons used in ValidationReport.rejected.
REJECT_MALFORMED = "malformed field"
REJECT_COORD_RANGE = "coordinate out of range"
REJECT_DEGENERATE = "degenerate box"
REJECT_UNKNOWN_ACTION = "unknown action id"
REJECT_SCORE_RANGE = "score out of range"
REJECT_DUPLICATE = "duplicate"


class BoundingBox(NamedTuple):
    """Axis-aligned box in normalized image coordinates, corners (x1,y1)/(x2,y2)."""

    x1: float
    y1: float
    x2: float
    y2: float

    @property
    def area(self) -> float:
        return (self.x2 - self.x1) * (self.y2 - self.y1)

    def is_valid(self) -> bool:
        return 0.0 <= self.x1 < self.x2 <= 1.0 and 0.0 <= self.y1 < self.y2 <= 1.0


class GroundTruthRecord(NamedTuple):
    """One annotated (video, keyframe, box, action, person) tuple."""

    video_id: str
    timestamp_s: int
    box: BoundingBox
    action_id: int
    person_id: int


class DetectionRecord(NamedTuple):
    """One model-produced candidate with a confidence score in [0, 1]."""

    video_id: str
    timestamp_s: int
    box: BoundingBox
    action_id: int
    score: float
    answer_text: str | None = None


@dataclass(frozen=True)
class ActionClass:
    """A single action category: positive id plus a short comma-free phrase."""

    id: int
    name: str


class ActionVocabulary:
    """Immutable id->class mapping, iterated in ascending-id order."""

    def __init__(self, classes: Iterable[ActionClass]):
        ordered = sorted(classes, key=lambda c: c.id)
        by_id: dict[int, ActionClass] = {}
        names: set[str] = set()
        for cls in ordered:
            if cls.id < 1:
                raise VocabularyError(f"action id must be >= 1, got {cls.id}")
            if not cls.name or "," in cls.name or "\n" in cls.name:
                raise VocabularyError(f"bad action name for id {cls.id}: {cls.name!r}")
            if cls.id in by_id:
                raise VocabularyError(f"duplicate action id {cls.id}")
            if cls.name in names:
                raise VocabularyError(f"duplicate action name {cls.name!r}")
            by_id[cls.id] = cls
            names.add(cls.name)
        if not by_id:
            raise VocabularyError("vocabulary is empty")
        self._classes: tuple[ActionClass, ...] = tuple(ordered)
        self._by_id = by_id
        self._id_set = frozenset(by_id)
        self._names = frozenset(names)

    @property
    def classes(self) -> tuple[ActionClass, ...]:
        return self._classes

    @property
    def by_id(self) -> dict[int, ActionClass]:
        return dict(self._by_id)

    @property
    def id_set(self) -> frozenset[int]:
        return self._id_set

    @property
    def names(self) -> frozenset[str]:
        return self._names

    def get(self, action_id: int) -> ActionClass | None:
        return self._by_id.get(action_id)

    def name_of(self, action_id: int) -> str:
        cls = self._by_id.get(action_id)
        return cls.name if cls is not None else f"class {action_id}"

    def __iter__(self) -> Iterator[ActionClass]:
        return iter(self._classes)

    def __len__(self) -> int:
        return len(self._classes)

    def __contains__(self, action_id: int) -> bool:
        return action_id in self._id_set

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ActionVocabulary) and self._classes == other._classes

    def __repr__(self) -> str:
        return f"ActionVocabulary({len(self._classes)} classes)"


@dataclass
class ValidationReport:
    """Row accounting for one parsed file: parsed + rejected == total, always."""

    total_rows: int = 0
    parsed_rows: int = 0
    rejected: dict[str, int] = field(default_factory=dict)
    per_class: dict[int, int] = field(default_factory=dict)

    @property
    def rejected_rows(self) -> int:
        return sum(self.rejected.values())

    def count_duplicate(self, action_id: int) -> None:
        """Reclassify one already-parsed row as a duplicate reject."""
        self.parsed_rows -= 1
        self.rejected[REJECT_DUPLICATE] = self.rejected.get(REJECT_DUPLICATE, 0) + 1
        self.per_class[action_id] -= 1

    def summary_lines(self, label: str) -> list[str]:
        lines = [
            f"{label}: rows={self.total_rows} parsed={self.parsed_rows} "
            f"rejected={self.rejected_rows}"
        ]
        for reason in sorted(self.rejected):
            lines.append(f"  reject[{reason}]={self.rejected[reason]}")
        return lines


@dataclass
class EvalIndex:
    """Ground truth bucketed per (action_id, video_id, timestamp_s).

    ``buckets[action_id][(video_id, timestamp_s)]`` holds the records in
    input order; exact duplicates (same video, keyframe, box and action) are
    dropped during the build and only counted. Immutable after construction.
    Buckets are tuples so a million-record index costs the cyclic collector
    nothing once it has been scanned once.
    """

    buckets: dict[int, dict[tuple[str, int], tuple[GroundTruthRecord, ...]]]
    gt_count_per_class: dict[int, int]
    duplicates_dropped: int
    total_records: int

    def num_gt(self, action_id: int) -> int:
        return self.gt_count_per_class.get(action_id, 0)

    def class_buckets(self, action_id: int) -> dict[tuple[str, int], tuple[GroundTruthRecord, ...]]:
        return self.buckets.get(action_id, {})


def _line_stream(source: Source):
    """Return (iterator of byte lines, cleanup) for a path, bytes or stream.

    Lines are handed out as bytes; the hot parsers convert numeric fields
    straight from ASCII bytes and only decode the text fields, which is
    markedly faster than decoding whole multi-gigabyte files. The cleanup
    callable closes streams we opened ourselves and leaves caller-owned
    streams open.
    """
    if isinstance(source, (bytes, bytearray)):
        return iter(io.BytesIO(source)), _noop
    if hasattr(source, "read"):
        if isinstance(source, io.RawIOBase):
            wrapper = io.BufferedReader(source)
            return iter(wrapper), wrapper.detach  # leave the caller's stream open
        return iter(source), _noop
    handle = open(os.fspath(source), "rb")
    return iter(handle), handle.close


def _noop() -> None:
    return None


def parse_ground_truth(
    source: Source,
    vocab: ActionVocabulary,
    *,
    strict: bool = False,
    report: ValidationReport | None = None,
) -> Iterator[GroundTruthRecord]:
    """Stream GroundTruthRecords out of a ground-truth CSV.

    Lenient mode counts invalid rows in ``report`` and skips them; strict
    mode raises :class:`ParseError` at the first invalid row, citing its
    line number. ``report`` (if given) is updated as the stream is consumed
    and is complete once iteration finishes.
    """
    if report is None:
        report = ValidationReport()
    ids = vocab.id_set
    per_class = report.per_class
    rejected = report.rejected
    lines, cleanup = _line_stream(source)
    total = 0
    parsed = 0

    def bail(line_no: int, reason: str) -> None:
        rejected[reason] = rejected.get(reason, 0) + 1
        if strict:
            raise ParseError(f"line {line_no}: {reason}", line=line_no, reason=reason)

    try:
        for line in lines:
            total += 1
            parts = line.rstrip(b"\r\n").split(b",")
            if len(parts) != 8 or not parts[0]:
                bail(total, REJECT_MALFORMED)
                continue
            try:
                ts = int(parts[1])
                x1 = float(parts[2])
                y1 = float(parts[3])
                x2 = float(parts[4])
                y2 = float(parts[5])
                aid = int(parts[6])
                pid = int(parts[7])
                vid = parts[0].decode("utf-8")
            except ValueError:  # covers bad numerics and bad UTF-8 alike
                bail(total, REJECT_MALFORMED)
                continue
            if pid < 0:
                bail(total, REJECT_MALFORMED)
                continue
            if not (0.0 <= x1 <= 1.0 and 0.0 <= y1 <= 1.0 and 0.0 <= x2 <= 1.0 and 0.0 <= y2 <= 1.0):
                bail(total, REJECT_COORD_RANGE)
                continue
            if x2 <= x1 or y2 <= y1:
                bail(total, REJECT_DEGENERATE)
                continue
            if aid not in ids:
                bail(total, REJECT_UNKNOWN_ACTION)
                continue
            parsed += 1
            per_class[aid] = per_class.get(aid, 0) + 1
            yield GroundTruthRecord(vid, ts, BoundingBox(x1, y1, x2, y2), aid, pid)
    finally:
        report.total_rows += total
        report.parsed_rows += parsed
        cleanup()


def parse_detections(
    source: Source,
    vocab: ActionVocabulary,
    *,
    strict: bool = False,
    report: ValidationReport | None = None,
) -> Iterator[DetectionRecord]:
    """Stream DetectionRecords out of a detection CSV (see module docstring).

    Identical to :func:`parse_ground_truth` except that column eight is a
    decimal score in [0, 1] and an optional ninth column carries the raw
    model answer.
    """
    if report is None:
        report = ValidationReport()
    ids = vocab.id_set
    per_class = report.per_class
    rejected = report.rejected
    lines, cleanup = _line_stream(source)
    total = 0
    parsed = 0

    def bail(line_no: int, reason: str) -> None:
        rejected[reason] = rejected.get(reason, 0) + 1
        if strict:
            raise ParseError(f"line {line_no}: {reason}", line=line_no, reason=reason)

    try:
        for line in lines:
            total += 1
            parts = line.rstrip(b"\r\n").split(b",")
            nparts = len(parts)
            if nparts not in (8, 9) or not parts[0]:
                bail(total, REJECT_MALFORMED)
                continue
            try:
                ts = int(parts[1])
                x1 = float(parts[2])
                y1 = float(parts[3])
                x2 = float(parts[4])
                y2 = float(parts[5])
                aid = int(parts[6])
                score = float(parts[7])
                vid = parts[0].decode("utf-8")
                answer = parts[8].decode("utf-8") if nparts == 9 else None
            except ValueError:  # covers bad numerics and bad UTF-8 alike
                bail(total, REJECT_MALFORMED)
                continue
            if not (0.0 <= x1 <= 1.0 and 0.0 <= y1 <= 1.0 and 0.0 <= x2 <= 1.0 and 0.0 <= y2 <= 1.0):
                bail(total, REJECT_COORD_RANGE)
                continue
            if x2 <= x1 or y2 <= y1:
                bail(total, REJECT_DEGENERATE)
                continue
            if aid not in ids:
                bail(total, REJECT_UNKNOWN_ACTION)
                continue
            if not 0.0 <= score <= 1.0:
                bail(total, REJECT_SCORE_RANGE)
                continue
            parsed += 1
            per_class[aid] = per_class.get(aid, 0) + 1
            yield DetectionRecord(vid, ts, BoundingBox(x1, y1, x2, y2), aid, score, answer)
    finally:
        report.total_rows += total
        report.parsed_rows += parsed
        cleanup()


def parse_vocabulary(source: Source) -> ActionVocabulary:
    """Load an ``action_id,name`` CSV; a non-numeric first field on row one
    is treated as a header and skipped."""
    lines, cleanup = _line_stream(source)
    classes: list[ActionClass] = []
    try:
        for line_no, raw in enumerate(lines, start=1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError:
                raise VocabularyError(f"line {line_no}: not valid UTF-8") from None
            parts = line.rstrip("\r\n").split(",")
            if len(parts) != 2:
                raise VocabularyError(f"line {line_no}: expected 'action_id,name'")
            raw_id, name = parts
            try:
                action_id = int(raw_id)
            except ValueError:
                if line_no == 1:
                    continue  # header row
                raise VocabularyError(f"line {line_no}: bad action id {raw_id!r}") from None
            if not name.strip():
                raise VocabularyError(f"line {line_no}: empty action name")
            classes.append(ActionClass(action_id, name.strip()))
    finally:
        cleanup()
    if not classes:
        raise VocabularyError("vocabulary file contains no classes")
    return ActionVocabulary(classes)


def load_default_vocabulary() -> ActionVocabulary:
    """The bundled 80-class action vocabulary (see data/ava_vocabulary.csv)."""
    data = resources.files(__package__).joinpath("data/ava_vocabulary.csv").read_bytes()
    return parse_vocabulary(data)


def build_index(
    records: Iterable[GroundTruthRecord],
    *,
    report: ValidationReport | None = None,
) -> EvalIndex:
    """Bucket ground truth for evaluation, dropping exact duplicates.

    A duplicate is a record whose (video_id, timestamp_s, box, action_id)
    tuple was already seen; the first occurrence wins. When ``report`` is
    given, each dropped row is reclassified there as a 'duplicate' reject so
    row conservation still holds.
    """
    filling: dict[int, dict[tuple[str, int], list[GroundTruthRecord]]] = {}
    counts: dict[int, int] = {}
    duplicates = 0
    total = 0
    for rec in records:
        per_class = filling.get(rec.action_id)
        if per_class is None:
            per_class = filling[rec.action_id] = {}
        key = (rec.video_id, rec.timestamp_s)
        bucket = per_class.get(key)
        if bucket is None:
            per_class[key] = [rec]
        else:
            box = rec.box
            if any(existing.box == box for existing in bucket):
                duplicates += 1
                if report is not None:
                    report.count_duplicate(rec.action_id)
                continue
            bucket.append(rec)
        counts[rec.action_id] = counts.get(rec.action_id, 0) + 1
        total += 1
    buckets = {
        aid: {key: tuple(bucket) for key, bucket in per_class.items()}
        for aid, per_class in filling.items()
    }
    return EvalIndex(buckets, counts, duplicates, total)


def _require_clean_field(value: str, what: str) -> str:
    if "," in value or "\n" in value or "\r" in value:
        raise SerializeError(f"{what} may not contain commas or newlines: {value!r}")
    return value


def ground_truth_line(rec: GroundTruthRecord) -> str:
    vid = _require_clean_field(rec.video_id, "video_id")
    b = rec.box
    return (
        f"{vid},{rec.timestamp_s:04d},{b.x1:.6f},{b.y1:.6f},{b.x2:.6f},{b.y2:.6f},"
        f"{rec.action_id},{rec.person_id}\n"
    )


def detection_line(rec: DetectionRecord) -> str:
    vid = _require_clean_field(rec.video_id, "video_id")
    b = rec.box
    line = (
        f"{vid},{rec.timestamp_s:04d},{b.x1:.6f},{b.y1:.6f},{b.x2:.6f},{b.y2:.6f},"
        f"{rec.action_id},{rec.score:.6f}"
    )
    if rec.answer_text is not None:
        line += "," + _require_clean_field(rec.answer_text, "answer_text")
    return line + "\n"


def serialize_ground_truth(records: Iterable[GroundTruthRecord]) -> bytes:
    """Render records to CSV bytes: coordinates at 6 decimal places,
    timestamps zero-padded to 4 digits. parse(serialize(r)) == r for any
    record whose coordinates carry at most 6 decimals."""
    return "".join(ground_truth_line(r) for r in records).encode("utf-8")


def serialize_detections(records: Iterable[DetectionRecord]) -> bytes:
    return "".join(detection_line(r) for r in records).encode("utf-8")


def write_ground_truth(records: Iterable[GroundTruthRecord], dest: BinaryIO) -> int:
    """Stream records to a binary file object; returns the row count."""
    n = 0
    for rec in records:
        dest.write(ground_truth_line(rec).encode("utf-8"))
        n += 1
    return n


def write_detections(records: Iterable[DetectionRecord], dest: BinaryIO) -> int:
    n = 0
    for rec in records:
        dest.write(detection_line(rec).encode("utf-8"))
        n += 1
    return n
