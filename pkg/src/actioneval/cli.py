"""Command-line surface: validate, prompts, schedule, evaluate, report.

Exit codes: 0 success, 1 validation or data failure, 2 usage error
(including unreadable input files).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .ava_data import (
    ValidationReport,
    build_index,
    load_default_vocabulary,
    parse_detections,
    parse_ground_truth,
    parse_vocabulary,
)
from .errors import ActionEvalError, ParseError
from .metrics import EvalConfig, Interpolation, evaluate
from .prompts import PromptTemplate, build_prompt_bank, default_template, serialize_prompt_bank
from .report import (
    build_manifest,
    emit_pr_points,
    emit_report,
    file_digest,
    manifest_bytes,
    parse_report_csv,
    rank_rows,
    render_report_csv,
    render_report_markdown,
)
from .schedule import ScheduleConfig, build_schedule, serialize_schedule

logger = logging.getLogger(__name__)

REJECT_DUPLICATE = "duplicate"


def _load_vocab(path: str | None):
    if path is None:
        return load_default_vocabulary()
    return parse_vocabulary(path)


def _write_out(data: bytes, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(data.decode("utf-8"))
    else:
        Path(out).write_bytes(data)


def _hard_failures(report: ValidationReport) -> int:
    """Rejected rows excluding duplicates, which are dropped by design."""
    return sum(n for reason, n in report.rejected.items() if reason != REJECT_DUPLICATE)


def cmd_validate(args: argparse.Namespace) -> int:
    vocab = _load_vocab(args.vocab)
    print(f"vocabulary: {len(vocab)} classes")
    failed = False
    if args.gt:
        report = ValidationReport()
        index = build_index(
            parse_ground_truth(args.gt, vocab, strict=args.strict, report=report),
            report=report,
        )
        for line in report.summary_lines("ground truth"):
            print(line)
        print(f"  duplicates dropped: {index.duplicates_dropped}")
        if args.per_class:
            for aid in sorted(report.per_class):
                print(f"  class {aid} ({vocab.name_of(aid)}): {report.per_class[aid]}")
        failed = failed or _hard_failures(report) > 0
    if args.det:
        report = ValidationReport()
        for _ in parse_detections(args.det, vocab, strict=args.strict, report=report):
            pass
        for line in report.summary_lines("detections"):
            print(line)
        if args.per_class:
            for aid in sorted(report.per_class):
                print(f"  class {aid} ({vocab.name_of(aid)}): {report.per_class[aid]}")
        failed = failed or _hard_failures(report) > 0
    return 1 if failed else 0


def cmd_prompts(args: argparse.Namespace) -> int:
    vocab = _load_vocab(args.vocab)
    if args.template is None:
        template = default_template()
    else:
        base = default_template()
        template = PromptTemplate(
            pattern=args.template,
            overrides=base.overrides,
            gerund_overrides=base.gerund_overrides,
        )
    bank = build_prompt_bank(vocab, template, strict=args.strict)
    _write_out(serialize_prompt_bank(bank), args.out)
    return 0


def cmd_schedule(args: argparse.Namespace) -> int:
    video_ids = [
        line.strip() for line in Path(args.videos).read_text("utf-8").splitlines() if line.strip()
    ]
    config = ScheduleConfig(start_s=args.start, end_s=args.end, interval_s=args.interval)
    schedule = build_schedule(video_ids, config)
    _write_out(serialize_schedule(schedule), args.out)
    logger.info(
        "schedule: %d videos x %d keyframes", len(schedule), len(config.timestamps())
    )
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    vocab = _load_vocab(args.vocab)
    config = EvalConfig(
        iou_threshold=args.iou_threshold,
        interpolation=Interpolation(args.interpolation),
        score_floor=args.score_floor,
        retain_curves=args.curves,
    )
    gt_report = ValidationReport()
    index = build_index(
        parse_ground_truth(args.gt, vocab, strict=args.strict, report=gt_report),
        report=gt_report,
    )
    det_report = ValidationReport()
    detections = parse_detections(args.det, vocab, strict=args.strict, report=det_report)
    result = evaluate(index, detections, vocab, config, workers=args.workers)
    for rep, label in ((gt_report, "ground truth"), (det_report, "detections")):
        if rep.rejected_rows:
            logger.warning(
                "%s: %d of %d rows rejected", label, rep.rejected_rows, rep.total_rows
            )

    _write_out(emit_report(result, vocab, fmt="csv"), args.out)
    if args.curves:
        pr_out = args.pr_out or _derived_path(args.out, ".pr.csv")
        _write_out(emit_pr_points(result), pr_out)
    manifest = build_manifest(
        {"ground_truth": args.gt, "detections": args.det},
        config,
        tool_version=__version__,
        workers=args.workers,
        strict=args.strict,
        totals={
            "classes": len(result.results),
            "evaluable_classes": len(result.evaluable_results),
            "ground_truth_boxes": result.total_gt,
            "detections": result.total_detections,
            "map": result.map_value,
        },
    )
    if args.vocab:
        manifest["inputs"]["vocabulary"] = {"path": str(args.vocab), "sha256": file_digest(args.vocab)}
    if args.out and args.out != "-":
        Path(_derived_path(args.out, ".manifest.json")).write_bytes(manifest_bytes(manifest))
    if result.map_value is not None:
        print(f"mAP: {result.map_value:.4f} ({len(result.evaluable_results)} evaluable classes)")
    else:
        print("mAP: not defined (no evaluable classes)")
    return 0


def _derived_path(out: str | None, suffix: str) -> str:
    base = Path(out if out and out != "-" else "report.csv")
    return str(base.with_suffix("")) + suffix


def cmd_report(args: argparse.Namespace) -> int:
    rows = parse_report_csv(args.report)
    table = rank_rows(rows, args.k)
    if args.format == "csv":
        _write_out(render_report_csv(rows), args.out)
    else:
        _write_out(render_report_markdown(rows, table), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="actioneval",
        description="Frame-level action detection evaluation over AVA-style CSV files.",
    )
    parser.add_argument("--version", action="version", version=f"actioneval {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse inputs and print validation reports")
    p.add_argument("--vocab", help="vocabulary CSV (default: bundled 80-class list)")
    p.add_argument("--gt", help="ground-truth CSV")
    p.add_argument("--det", help="detection CSV")
    p.add_argument("--strict", action="store_true", help="abort on the first invalid row")
    p.add_argument("--per-class", action="store_true", help="print per-class row counts")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("prompts", help="emit the per-action question bank CSV")
    p.add_argument("--vocab", help="vocabulary CSV (default: bundled 80-class list)")
    p.add_argument("--template", help="question pattern with one {action} placeholder")
    p.add_argument("--strict", action="store_true", help="fail on overrides naming unknown classes")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_prompts)

    p = sub.add_parser("schedule", help="emit the keyframe schedule CSV")
    p.add_argument("--videos", required=True, help="text file with one video id per line")
    p.add_argument("--start", type=int, default=902, help="first keyframe second (default 902)")
    p.add_argument("--end", type=int, default=1798, help="last keyframe second, inclusive (default 1798)")
    p.add_argument("--interval", type=int, default=1, help="seconds between keyframes (default 1)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("evaluate", help="run the evaluation and write report CSV + manifest")
    p.add_argument("--gt", required=True, help="ground-truth CSV")
    p.add_argument("--det", required=True, help="detection CSV")
    p.add_argument("--vocab", help="vocabulary CSV (default: bundled 80-class list)")
    p.add_argument("--out", required=True, help="report CSV output path")
    p.add_argument("--iou-threshold", type=float, default=0.5)
    p.add_argument(
        "--interpolation",
        choices=[m.value for m in Interpolation],
        default=Interpolation.ALL_POINT.value,
    )
    p.add_argument("--score-floor", type=float, default=0.0)
    p.add_argument("--strict", action="store_true", help="abort on the first invalid row")
    p.add_argument("--curves", action="store_true", help="also write PR-curve points CSV")
    p.add_argument("--pr-out", help="PR points output path (default: <out>.pr.csv)")
    p.add_argument("--workers", type=int, default=1, help="worker threads for per-class scoring")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="render rankings from a report CSV")
    p.add_argument("--report", required=True, help="report CSV produced by 'evaluate'")
    p.add_argument("--format", choices=["markdown", "csv"], default="markdown")
    p.add_argument("--k", type=int, default=5, help="rows per best/worst table (default 5)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_report)
    return parser


def cli_main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors itself
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ActionEvalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: cannot read {exc.filename}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
