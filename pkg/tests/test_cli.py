import json
import shutil
from pathlib import Path

import pytest

from actioneval.cli import cli_main

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture()
def workdir(tmp_path):
    for name in ("vocab10.csv", "perfect_gt.csv", "perfect_det.csv", "ranked_report.csv"):
        shutil.copy(FIXTURES / name, tmp_path / name)
    return tmp_path


def run(args):
    return cli_main([str(a) for a in args])


class TestValidate:
    def test_clean_files_exit_zero(self, workdir, capsys):
        code = run(["validate", "--vocab", workdir / "vocab10.csv", "--gt", workdir / "perfect_gt.csv",
                    "--det", workdir / "perfect_det.csv"])
        out = capsys.readouterr().out
        assert code == 0
        assert "ground truth: rows=10 parsed=10 rejected=0" in out
        assert "detections: rows=10 parsed=10 rejected=0" in out

    def test_lenient_bad_row_exit_one(self, workdir, capsys):
        gt = workdir / "bad_gt.csv"
        gt.write_text("v001,0902,0.9,0.1,0.3,0.3,4,0\n")  # inverted box
        code = run(["validate", "--vocab", workdir / "vocab10.csv", "--gt", gt])
        assert code == 1
        assert "degenerate box" in capsys.readouterr().out

    def test_strict_bad_row_cites_line(self, workdir, capsys):
        gt = workdir / "bad_gt.csv"
        good = (FIXTURES / "perfect_gt.csv").read_text()
        gt.write_text(good + "v001,0902,0.9,0.1,0.3,0.3,4,0\n")
        code = run(["validate", "--strict", "--vocab", workdir / "vocab10.csv", "--gt", gt])
        assert code == 1
        assert "line 11" in capsys.readouterr().err

    def test_per_class_counts_printed(self, workdir, capsys):
        code = run(["validate", "--vocab", workdir / "vocab10.csv", "--gt", workdir / "perfect_gt.csv",
                    "--per-class"])
        out = capsys.readouterr().out
        assert code == 0
        assert "class 4 (dance): 1" in out
        assert "class 71 (kiss (a person)): 1" in out

    def test_missing_file_is_usage_error(self, workdir):
        code = run(["validate", "--vocab", workdir / "vocab10.csv", "--gt", workdir / "nope.csv"])
        assert code == 2

    def test_unknown_subcommand_is_usage_error(self):
        assert run(["frobnicate"]) == 2


class TestPromptsAndSchedule:
    def test_prompts_default_vocab(self, tmp_path, capsys):
        out = tmp_path / "bank.csv"
        assert run(["prompts", "--out", out]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 80
        assert "11,is someone sitting?" in lines
        assert "4,is someone dancing?" in lines

    def test_schedule_emits_rows(self, tmp_path):
        videos = tmp_path / "videos.txt"
        videos.write_text("vidB\nvidA\n")
        out = tmp_path / "schedule.csv"
        assert run(["schedule", "--videos", videos, "--start", 902, "--end", 904, "--out", out]) == 0
        assert out.read_text() == (
            "vidA,0902\nvidA,0903\nvidA,0904\nvidB,0902\nvidB,0903\nvidB,0904\n"
        )

    def test_schedule_duplicate_video_fails(self, tmp_path):
        videos = tmp_path / "videos.txt"
        videos.write_text("vidA\nvidA\n")
        assert run(["schedule", "--videos", videos, "--out", tmp_path / "s.csv"]) == 1


class TestEvaluate:
    def test_perfect_detector_map_one(self, workdir, capsys):
        out = workdir / "report.csv"
        code = run(["evaluate", "--gt", workdir / "perfect_gt.csv", "--det", workdir / "perfect_det.csv",
                    "--vocab", workdir / "vocab10.csv", "--out", out])
        assert code == 0
        assert "mAP: 1.0000" in capsys.readouterr().out
        lines = out.read_text().splitlines()
        assert lines[0] == "action_id,name,ap,num_gt,num_det"
        assert all(",1.000000," in line for line in lines[1:])

    def test_manifest_echoes_interpolation(self, workdir):
        out = workdir / "report.csv"
        code = run(["evaluate", "--gt", workdir / "perfect_gt.csv", "--det", workdir / "perfect_det.csv",
                    "--vocab", workdir / "vocab10.csv", "--out", out,
                    "--interpolation", "eleven_point"])
        assert code == 0
        manifest = json.loads((workdir / "report.manifest.json").read_text())
        assert manifest["config"]["interpolation"] == "eleven_point"
        assert manifest["config"]["iou_threshold"] == 0.5
        assert set(manifest["inputs"]) == {"ground_truth", "detections", "vocabulary"}
        for entry in manifest["inputs"].values():
            assert len(entry["sha256"]) == 64

    def test_byte_identical_reports_across_runs_and_workers(self, workdir):
        outs = []
        manifests = []
        for tag, workers in (("a", 1), ("b", 2), ("c", 8)):
            out = workdir / f"report_{tag}.csv"
            code = run(["evaluate", "--gt", workdir / "perfect_gt.csv",
                        "--det", workdir / "perfect_det.csv",
                        "--vocab", workdir / "vocab10.csv", "--out", out,
                        "--workers", workers])
            assert code == 0
            outs.append(out.read_bytes())
            manifest = json.loads((workdir / f"report_{tag}.manifest.json").read_text())
            manifest.pop("created_utc")
            manifest["inputs"] = {k: v["sha256"] for k, v in manifest["inputs"].items()}
            manifest["config"].pop("workers")
            manifests.append(manifest)
        assert outs[0] == outs[1] == outs[2]
        assert manifests[0] == manifests[1] == manifests[2]

    def test_curves_flag_writes_pr_points(self, workdir):
        out = workdir / "report.csv"
        code = run(["evaluate", "--gt", workdir / "perfect_gt.csv", "--det", workdir / "perfect_det.csv",
                    "--vocab", workdir / "vocab10.csv", "--out", out, "--curves"])
        assert code == 0
        pr = (workdir / "report.pr.csv").read_text().splitlines()
        assert pr[0] == "action_id,rank,recall,precision"
        assert len(pr) == 11  # one TP row per class

    def test_bundled_vocabulary_is_the_default(self, workdir, capsys):
        # fixture ids match the bundled 80-class list, so --vocab can be omitted
        out = workdir / "report.csv"
        code = run(["evaluate", "--gt", workdir / "perfect_gt.csv",
                    "--det", workdir / "perfect_det.csv", "--out", out])
        assert code == 0
        assert "mAP: 1.0000 (10 evaluable classes)" in capsys.readouterr().out
        lines = out.read_text().splitlines()
        assert len(lines) == 81  # header + all 80 classes, most not evaluable
        assert sum(1 for line in lines if ",NA," in line) == 70
        manifest = json.loads((workdir / "report.manifest.json").read_text())
        assert set(manifest["inputs"]) == {"ground_truth", "detections"}

    def test_score_floor_flag(self, workdir, capsys):
        out = workdir / "report.csv"
        code = run(["evaluate", "--gt", workdir / "perfect_gt.csv", "--det", workdir / "perfect_det.csv",
                    "--vocab", workdir / "vocab10.csv", "--out", out, "--score-floor", "1.0"])
        assert code == 0
        # all detections sit exactly at the floor, so nothing is dropped
        assert "mAP: 1.0000" in capsys.readouterr().out


class TestReportCommand:
    def test_markdown_rankings(self, workdir, capsys):
        code = run(["report", "--report", workdir / "ranked_report.csv", "--format", "markdown"])
        assert code == 0
        out = capsys.readouterr().out
        rows = [line for line in out.splitlines() if line.startswith("|")][2:]
        best = [line.split("|")[1].strip() for line in rows]
        assert best == ["sleep", "sit", "stand", "hand shake", "dance"]
        assert "0.0019" in rows[0]

    def test_csv_re_emission(self, workdir, capsys):
        code = run(["report", "--report", workdir / "ranked_report.csv", "--format", "csv"])
        assert code == 0
        assert "8,sleep,0.001900,5,9" in capsys.readouterr().out

    def test_k_flag(self, workdir, capsys):
        code = run(["report", "--report", workdir / "ranked_report.csv", "--k", 2])
        assert code == 0
        rows = [line for line in capsys.readouterr().out.splitlines() if line.startswith("|")][2:]
        assert len(rows) == 2

    def test_empty_report_errors(self, workdir, capsys):
        empty = workdir / "empty.csv"
        empty.write_text("action_id,name,ap,num_gt,num_det\n")
        code = run(["report", "--report", empty])
        assert code == 1
