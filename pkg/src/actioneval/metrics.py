"""Frame-level detection scoring: IoU, greedy matching, PR curves, AP, mAP.

The protocol follows the PASCAL VOC convention. Detections of one class are
ranked by descending score; each detection is matched, within its own
(video, keyframe) frame, to the not-yet-matched ground-truth box of highest
IoU and counts as a true positive iff that IoU reaches the threshold
(default 0.5). Every ground-truth box can be claimed at most once; extra
detections on the same box are false positives. Per-class average precision
is the area under the monotone precision envelope (all-point interpolation)
or the 11-point sample mean, and mAP averages AP over classes that have
ground truth.

Determinism contract: score ties break on (video_id, timestamp_s, box
corners), IoU ties on ground-truth input order, so every run of
:func:`evaluate` over the same inputs produces the same report no matter
how detections were ordered or how many worker threads are used.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .ava_data import ActionVocabulary, BoundingBox, DetectionRecord, EvalIndex, GroundTruthRecord
from .errors import EvaluationError


class Interpolation(str, enum.Enum):
    """AP interpolation mode."""

    ALL_POINT = "all_point"
    ELEVEN_POINT = "eleven_point"


@dataclass(frozen=True)
class EvalConfig:
    """Evaluation knobs; defaults reproduce the standard AP@0.5IoU protocol."""

    iou_threshold: float = 0.5
    interpolation: Interpolation = Interpolation.ALL_POINT
    score_floor: float = 0.0
    retain_curves: bool = False

    def __post_init__(self) -> None:
        if not 0.0 < self.iou_threshold <= 1.0:
            raise EvaluationError(f"iou_threshold must be in (0, 1], got {self.iou_threshold}")
        if not 0.0 <= self.score_floor <= 1.0:
            raise EvaluationError(f"score_floor must be in [0, 1], got {self.score_floor}")


class LabeledDetection(NamedTuple):
    """A detection after matching: TP/FP flag, claimed ground truth, 1-based rank."""

    detection: DetectionRecord
    is_tp: bool
    matched_gt: GroundTruthRecord | None
    rank: int


@dataclass(frozen=True)
class PRCurve:
    """One (recall, precision) point per ranked detection prefix."""

    points: Sequence[tuple[float, float]]
    num_gt: int


@dataclass(frozen=True)
class APResult:
    """Per-class outcome; ``ap`` is None when the class has no ground truth."""

    action_id: int
    ap: float | None
    num_gt: int
    num_det: int
    curve: PRCurve | None = None

    @property
    def evaluable(self) -> bool:
        return self.num_gt > 0


@dataclass(frozen=True)
class EvaluationReport:
    """All per-class results in ascending action-id order, plus the mAP."""

    results: tuple[APResult, ...]
    map_value: float | None
    config: EvalConfig
    total_gt: int
    total_detections: int

    @property
    def evaluable_results(self) -> list[APResult]:
        return [r for r in self.results if r.evaluable]


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union of two valid boxes; 0 when interiors are disjoint."""
    ix1 = a.x1 if a.x1 > b.x1 else b.x1
    iy1 = a.y1 if a.y1 > b.y1 else b.y1
    ix2 = a.x2 if a.x2 < b.x2 else b.x2
    iy2 = a.y2 if a.y2 < b.y2 else b.y2
    iw = ix2 - ix1
    ih = iy2 - iy1
    if iw <= 0.0 or ih <= 0.0:
        return 0.0
    inter = iw * ih
    union = (a.x2 - a.x1) * (a.y2 - a.y1) + (b.x2 - b.x1) * (b.y2 - b.y1) - inter
    return inter / union


def rank_order_key(det: DetectionRecord):
    """Total order for ranking: descending score, then a deterministic tie-break."""
    return (-det.score, det.video_id, det.timestamp_s, det.box)


def match_class(
    detections: Sequence[DetectionRecord],
    index: EvalIndex,
    config: EvalConfig,
) -> list[LabeledDetection]:
    """Label every admitted detection of one class as TP or FP.

    Detections below ``config.score_floor`` are dropped before ranking.
    Matching is greedy in rank order and confined to the detection's own
    keyframe; the IoU comparison against the threshold is inclusive.
    """
    floor = config.score_floor
    dets: list[DetectionRecord] = []
    action_id: int | None = None
    for det in detections:
        if action_id is None:
            action_id = det.action_id
        elif det.action_id != action_id:
            raise EvaluationError(
                f"match_class expects one class, got {action_id} and {det.action_id}"
            )
        if det.score >= floor:
            dets.append(det)
    if not dets:
        return []
    dets.sort(key=rank_order_key)

    class_buckets = index.class_buckets(action_id)
    threshold = config.iou_threshold
    # Per-keyframe matched flags, created lazily; the shared index stays untouched.
    # IoU is inlined below: the loop runs once per (detection, candidate) pair
    # and dominates evaluation time at million-detection scale.
    state: dict[tuple[str, int], tuple[Sequence[GroundTruthRecord], list[bool], list[BoundingBox]]] = {}
    out: list[LabeledDetection] = []
    append = out.append
    for rank, det in enumerate(dets, start=1):
        key = (det.video_id, det.timestamp_s)
        entry = state.get(key)
        if entry is None:
            gts = class_buckets.get(key, ())
            entry = (gts, [False] * len(gts), [gt.box for gt in gts])
            state[key] = entry
        gts, taken, boxes = entry
        best = 0.0
        best_j = -1
        dx1, dy1, dx2, dy2 = det.box
        d_area = (dx2 - dx1) * (dy2 - dy1)
        for j, gbox in enumerate(boxes):
            if taken[j]:
                continue
            gx1, gy1, gx2, gy2 = gbox
            iw = (dx2 if dx2 < gx2 else gx2) - (dx1 if dx1 > gx1 else gx1)
            if iw <= 0.0:
                continue
            ih = (dy2 if dy2 < gy2 else gy2) - (dy1 if dy1 > gy1 else gy1)
            if ih <= 0.0:
                continue
            inter = iw * ih
            overlap = inter / (d_area + (gx2 - gx1) * (gy2 - gy1) - inter)
            if overlap > best:  # strict '>' keeps the earliest GT on IoU ties
                best = overlap
                best_j = j
        if best_j >= 0 and best >= threshold:
            taken[best_j] = True
            append(LabeledDetection(det, True, gts[best_j], rank))
        else:
            append(LabeledDetection(det, False, None, rank))
    return out


def pr_curve(labeled: Sequence[LabeledDetection], num_gt: int) -> PRCurve:
    """Prefix precision/recall over the ranked labels.

    recall_k = TP_k / num_gt and precision_k = TP_k / k for every prefix
    k = 1..N. ``num_gt`` must be positive; classes without ground truth are
    not evaluable and must be excluded by the caller.
    """
    if num_gt < 1:
        raise EvaluationError("pr_curve requires num_gt >= 1")
    points: list[tuple[float, float]] = []
    append = points.append
    tp = 0
    k = 0
    for lab in labeled:
        k += 1
        if lab.is_tp:
            tp += 1
        append((tp / num_gt, tp / k))
    return PRCurve(points, num_gt)


def average_precision(curve: PRCurve, mode: Interpolation = Interpolation.ALL_POINT) -> float:
    """AP of one PR curve; an empty curve scores 0.

    all_point: integrate the monotone precision envelope over recall
    (precision at recall r is replaced by the maximum precision at any
    recall >= r). eleven_point: mean envelope precision sampled at recalls
    0.0, 0.1, ..., 1.0.
    """
    pts = curve.points
    if not pts:
        return 0.0
    if mode == Interpolation.ELEVEN_POINT:
        total = 0.0
        for tenth in range(11):
            level = tenth / 10
            best = 0.0
            for recall, precision in pts:
                if recall >= level and precision > best:
                    best = precision
            total += best
        return total / 11
    n = len(pts)
    envelope = [0.0] * n
    running = 0.0
    for i in range(n - 1, -1, -1):
        precision = pts[i][1]
        if precision > running:
            running = precision
        envelope[i] = running
    ap = 0.0
    prev_recall = 0.0
    for i in range(n):
        recall = pts[i][0]
        if recall != prev_recall:
            ap += (recall - prev_recall) * envelope[i]
            prev_recall = recall
    return ap


def evaluate(
    gt_index: EvalIndex,
    detections: Iterable[DetectionRecord],
    vocab: ActionVocabulary,
    config: EvalConfig | None = None,
    *,
    workers: int = 1,
) -> EvaluationReport:
    """Score every vocabulary class and average the evaluable ones into mAP.

    Classes with no ground truth are flagged (ap None) and excluded from the
    mean. Per-class work is independent; with ``workers`` > 1 classes are
    scored on a thread pool, and results are always merged in ascending
    action-id order, so the report does not depend on detection input order
    or on the worker count.
    """
    if config is None:
        config = EvalConfig()
    id_set = vocab.id_set
    by_class: dict[int, list[DetectionRecord]] = {}
    total_dets = 0
    for det in detections:
        aid = det.action_id
        if aid not in id_set:
            raise EvaluationError(f"detection references unknown action id {aid}")
        group = by_class.get(aid)
        if group is None:
            by_class[aid] = [det]
        else:
            group.append(det)
        total_dets += 1

    def score_one(cls) -> APResult:
        aid = cls.id
        dets = by_class.get(aid, [])
        num_gt = gt_index.num_gt(aid)
        if num_gt == 0:
            return APResult(aid, None, 0, len(dets), None)
        labeled = match_class(dets, gt_index, config) if dets else []
        curve = pr_curve(labeled, num_gt)
        ap = average_precision(curve, config.interpolation)
        return APResult(aid, ap, num_gt, len(dets), curve if config.retain_curves else None)

    classes = list(vocab)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = tuple(pool.map(score_one, classes))
    else:
        results = tuple(score_one(c) for c in classes)

    included = [r.ap for r in results if r.num_gt > 0]
    map_value = sum(included) / len(included) if included else None
    return EvaluationReport(
        results=results,
        map_value=map_value,
        config=config,
        total_gt=gt_index.total_records,
        total_detections=total_dets,
    )
