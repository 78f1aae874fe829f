"""Report rendering: ranked best/worst tables, CSV/Markdown output, manifests.

Text output renders AP with 4 decimal places; CSV keeps 6. Classes without
ground truth are never ranked; they are listed separately as not evaluable.
"""

from __future__ import annotations

import hashlib
import io
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import NamedTuple, Sequence

from .ava_data import ActionVocabulary, Source, _line_stream
from .errors import ReportError
from .metrics import EvalConfig, EvaluationReport

REPORT_HEADER = "action_id,name,ap,num_gt,num_det"
PR_HEADER = "action_id,rank,recall,precision"
NOT_EVALUABLE = "NA"


class ReportRow(NamedTuple):
    """One class of an evaluation report with its name resolved."""

    action_id: int
    name: str
    ap: float | None
    num_gt: int
    num_det: int


@dataclass(frozen=True)
class RankedTable:
    """Top-k and bottom-k evaluable classes.

    Both halves come from one (AP descending, id ascending) ranking; the
    worst half is its tail in ascending-AP order, so the halves cannot
    overlap unless fewer than 2k classes are evaluable.
    """

    best: tuple[ReportRow, ...]
    worst: tuple[ReportRow, ...]
    k: int


def report_rows(report: EvaluationReport, vocab: ActionVocabulary) -> list[ReportRow]:
    return [
        ReportRow(r.action_id, vocab.name_of(r.action_id), r.ap, r.num_gt, r.num_det)
        for r in report.results
    ]


def rank_rows(rows: Sequence[ReportRow], k: int) -> RankedTable:
    if k <= 0:
        raise ReportError(f"k must be positive, got {k}")
    evaluable = [r for r in rows if r.num_gt > 0 and r.ap is not None]
    ranking = sorted(evaluable, key=lambda r: (-r.ap, r.action_id))
    best = tuple(ranking[:k])
    worst = tuple(reversed(ranking[-k:])) if ranking else ()
    return RankedTable(best=best, worst=worst, k=k)


def rank_classes(report: EvaluationReport, vocab: ActionVocabulary, k: int = 5) -> RankedTable:
    """Rank evaluable classes by AP and return the best-k and worst-k rows."""
    return rank_rows(report_rows(report, vocab), k)


def _format_ap(ap: float | None, places: int) -> str:
    return NOT_EVALUABLE if ap is None else f"{ap:.{places}f}"


def render_report_csv(rows: Sequence[ReportRow]) -> bytes:
    if not rows:
        raise ReportError("no evaluable classes")
    out = io.StringIO()
    out.write(REPORT_HEADER + "\n")
    for row in rows:
        out.write(
            f"{row.action_id},{row.name},{_format_ap(row.ap, 6)},{row.num_gt},{row.num_det}\n"
        )
    return out.getvalue().encode("utf-8")


def render_report_markdown(
    rows: Sequence[ReportRow],
    table: RankedTable,
    *,
    map_value: float | None = None,
    config: EvalConfig | None = None,
) -> bytes:
    """Two-column best/worst Markdown table plus a summary header."""
    evaluable = [r for r in rows if r.num_gt > 0 and r.ap is not None]
    if not evaluable:
        raise ReportError("no evaluable classes")
    if map_value is None:
        map_value = sum(r.ap for r in evaluable) / len(evaluable)
    threshold = config.iou_threshold if config is not None else 0.5
    ap_col = f"AP@{threshold:g}IoU"

    out = io.StringIO()
    out.write("# Action detection evaluation\n\n")
    out.write(f"- mAP: {map_value:.4f} over {len(evaluable)} evaluable classes of {len(rows)}\n")
    out.write(f"- IoU threshold: {threshold:g}\n")
    if config is not None:
        out.write(f"- interpolation: {config.interpolation.value}\n")
        out.write(f"- score floor: {config.score_floor:g}\n")
    out.write(f"- ground-truth boxes: {sum(r.num_gt for r in rows)}\n")
    out.write(f"- detections: {sum(r.num_det for r in rows)}\n")
    out.write("\n")
    out.write(f"| Best category | {ap_col} | Worst category | {ap_col} |\n")
    out.write("| --- | --- | --- | --- |\n")
    for i in range(max(len(table.best), len(table.worst))):
        best = table.best[i] if i < len(table.best) else None
        worst = table.worst[i] if i < len(table.worst) else None
        left = f"{best.name} | {_format_ap(best.ap, 4)}" if best else " | "
        right = f"{worst.name} | {_format_ap(worst.ap, 4)}" if worst else " | "
        out.write(f"| {left} | {right} |\n")
    flagged = [r for r in rows if r.num_gt == 0]
    if flagged:
        names = ", ".join(r.name for r in flagged)
        out.write(f"\nNot evaluable (no ground truth): {names}\n")
    return out.getvalue().encode("utf-8")


def emit_report(
    report: EvaluationReport,
    vocab: ActionVocabulary,
    table: RankedTable | None = None,
    fmt: str = "csv",
) -> bytes:
    """Render an EvaluationReport as CSV (all classes) or Markdown (summary
    plus best/worst table)."""
    rows = report_rows(report, vocab)
    if not rows:
        raise ReportError("no evaluable classes")
    if fmt == "csv":
        return render_report_csv(rows)
    if fmt == "markdown":
        if table is None:
            table = rank_rows(rows, 5)
        return render_report_markdown(
            rows, table, map_value=report.map_value, config=report.config
        )
    raise ReportError(f"unknown report format {fmt!r}")


def emit_pr_points(report: EvaluationReport) -> bytes:
    """Plot-ready PR curve points, rank-ordered per class.

    Requires the evaluation to have retained curves (EvalConfig.retain_curves).
    """
    out = io.StringIO()
    out.write(PR_HEADER + "\n")
    for result in report.results:
        if not result.evaluable:
            continue
        if result.curve is None:
            if result.num_det > 0:
                raise ReportError(
                    "PR curves were not retained; re-run evaluation with retain_curves"
                )
            continue
        for rank, (recall, precision) in enumerate(result.curve.points, start=1):
            out.write(f"{result.action_id},{rank},{recall:.6f},{precision:.6f}\n")
    return out.getvalue().encode("utf-8")


def parse_report_csv(source: Source) -> list[ReportRow]:
    """Read back a CSV produced by :func:`render_report_csv`."""
    lines, cleanup = _line_stream(source)
    rows: list[ReportRow] = []
    try:
        for line_no, raw in enumerate(lines, start=1):
            row = raw.decode("utf-8").rstrip("\r\n")
            if not row or row == REPORT_HEADER:
                continue
            parts = row.split(",")
            if len(parts) != 5:
                raise ReportError(f"line {line_no}: expected '{REPORT_HEADER}'")
            try:
                ap = None if parts[2] == NOT_EVALUABLE else float(parts[2])
                rows.append(ReportRow(int(parts[0]), parts[1], ap, int(parts[3]), int(parts[4])))
            except ValueError:
                raise ReportError(f"line {line_no}: malformed report row") from None
    finally:
        cleanup()
    if not rows:
        raise ReportError("report file contains no rows")
    return rows


def file_digest(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def build_manifest(
    inputs: dict[str, str],
    config: EvalConfig,
    *,
    tool_version: str,
    workers: int = 1,
    strict: bool = False,
    totals: dict[str, object] | None = None,
) -> dict:
    """Reproducibility record for one evaluation run: content digests of every
    input, the configuration echo, and the tool version."""
    return {
        "tool": {"name": "actioneval", "version": tool_version},
        "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "inputs": {
            role: {"path": str(path), "sha256": file_digest(path)}
            for role, path in sorted(inputs.items())
        },
        "config": {
            "iou_threshold": config.iou_threshold,
            "interpolation": config.interpolation.value,
            "score_floor": config.score_floor,
            "workers": workers,
            "strict": strict,
        },
        "totals": totals or {},
    }


def manifest_bytes(manifest: dict) -> bytes:
    return (json.dumps(manifest, indent=2, sort_keys=True) + "\n").encode("utf-8")
