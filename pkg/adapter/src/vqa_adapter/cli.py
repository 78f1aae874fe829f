"""Adapter CLI: ``extract`` keyframe images, ``run`` inference to a detection CSV."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .files import read_schedule
from .frames import extract_frames
from .pipeline import run_to_csv
from .records import DEFAULT_AFFIRMATIVE, AdapterConfig, AdapterError

logger = logging.getLogger(__name__)


def cmd_extract(args: argparse.Namespace) -> int:
    if args.timestamps:
        timestamps = [int(t) for t in args.timestamps.split(",")]
    elif args.schedule:
        timestamps = [ts for vid, ts in read_schedule(args.schedule) if vid == args.video_id]
        if not timestamps:
            raise AdapterError(f"schedule has no keyframes for video {args.video_id!r}")
    else:
        raise AdapterError("provide --timestamps or --schedule")
    written = extract_frames(args.video, args.video_id, timestamps, args.frames_dir)
    print(f"extracted {len(written)} of {len(set(timestamps))} frames to {args.frames_dir}")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    affirmative = (
        frozenset(word.strip().lower() for word in args.affirmative.split(",") if word.strip())
        if args.affirmative
        else DEFAULT_AFFIRMATIVE
    )
    config = AdapterConfig(
        backend=args.backend,
        affirmative=affirmative,
        confidence_floor=args.confidence_floor,
        stub_seed=args.seed,
        frames_dir=Path(args.frames_dir) if args.frames_dir else None,
        model_entry=args.model_entry,
    )
    summary = run_to_csv(args.schedule, args.prompts, args.out, config)
    print(
        f"requests={summary.requests} frames={summary.frames} prompts={summary.prompts} "
        f"skipped={summary.skipped_frames} failures={summary.failures} "
        f"detections={summary.detections}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vqa-adapter",
        description="Bridge a visual-question-answering model to the actioneval CSV pipeline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="save keyframe images for one video")
    p.add_argument("--video", required=True, help="video file")
    p.add_argument("--video-id", required=True, help="id used in schedule and output names")
    p.add_argument("--schedule", help="schedule CSV (video_id,timestamp)")
    p.add_argument("--timestamps", help="comma-separated seconds, overrides --schedule")
    p.add_argument("--frames-dir", required=True, help="output directory for frame images")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("run", help="ask every prompt at every keyframe, write detection CSV")
    p.add_argument("--schedule", required=True, help="schedule CSV from the evaluation side")
    p.add_argument("--prompts", required=True, help="prompt bank CSV from the evaluation side")
    p.add_argument("--out", required=True, help="detection CSV to write")
    p.add_argument("--backend", choices=["stub", "real_vqa"], default="stub")
    p.add_argument("--seed", type=int, default=0, help="stub backend seed")
    p.add_argument("--frames-dir", help="directory with extracted frame images")
    p.add_argument("--model-entry", help="module:function returning a backend (real_vqa)")
    p.add_argument("--affirmative", help="comma-separated affirmative answers (default: yes,true)")
    p.add_argument("--confidence-floor", type=float, default=0.0)
    p.set_defaults(func=cmd_run)
    return parser


def cli_main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except AdapterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: cannot read {exc.filename}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
