"""actioneval: frame-level action-detection evaluation over AVA-style CSVs.

The library covers the whole offline side of a question-driven zero-shot
detector benchmark: streaming annotation parsers, VOC-style AP@IoU scoring,
per-action question banks, 1 Hz keyframe schedules, and report rendering.
"""

__version__ = "0.1.0"

from .ava_data import (
    ActionClass,
    ActionVocabulary,
    BoundingBox,
    DetectionRecord,
    EvalIndex,
    GroundTruthRecord,
    ValidationReport,
    build_index,
    load_default_vocabulary,
    parse_detections,
    parse_ground_truth,
    parse_vocabulary,
    serialize_detections,
    serialize_ground_truth,
)
from .errors import (
    ActionEvalError,
    EvaluationError,
    ParseError,
    PromptError,
    ReportError,
    ScheduleError,
    SerializeError,
    VocabularyError,
)
from .metrics import (
    APResult,
    EvalConfig,
    EvaluationReport,
    Interpolation,
    LabeledDetection,
    PRCurve,
    average_precision,
    evaluate,
    iou,
    match_class,
    pr_curve,
)
from .prompts import (
    PromptBank,
    PromptTemplate,
    build_prompt_bank,
    default_template,
    gerundize,
    parse_prompt_bank,
    serialize_prompt_bank,
)
from .report import (
    RankedTable,
    ReportRow,
    emit_pr_points,
    emit_report,
    parse_report_csv,
    rank_classes,
    rank_rows,
)
from .schedule import KeyframeSchedule, ScheduleConfig, build_schedule, serialize_schedule

__all__ = [
    "ActionClass",
    "ActionEvalError",
    "ActionVocabulary",
    "APResult",
    "average_precision",
    "BoundingBox",
    "build_index",
    "build_prompt_bank",
    "build_schedule",
    "DetectionRecord",
    "default_template",
    "emit_pr_points",
    "emit_report",
    "EvalConfig",
    "EvalIndex",
    "evaluate",
    "EvaluationError",
    "EvaluationReport",
    "gerundize",
    "GroundTruthRecord",
    "Interpolation",
    "iou",
    "KeyframeSchedule",
    "LabeledDetection",
    "load_default_vocabulary",
    "match_class",
    "ParseError",
    "parse_detections",
    "parse_ground_truth",
    "parse_prompt_bank",
    "parse_report_csv",
    "parse_vocabulary",
    "PRCurve",
    "pr_curve",
    "PromptBank",
    "PromptError",
    "PromptTemplate",
    "RankedTable",
    "rank_classes",
    "rank_rows",
    "ReportError",
    "ReportRow",
    "ScheduleConfig",
    "ScheduleError",
    "serialize_detections",
    "serialize_ground_truth",
    "serialize_prompt_bank",
    "serialize_schedule",
    "SerializeError",
    "ValidationReport",
    "VocabularyError",
]
