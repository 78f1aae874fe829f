import logging

import pytest

from vqa_adapter import AdapterError, extract_frames


class TestExtractFrames:
    def test_naming_contract(self, synthetic_videos, tmp_path):
        written = extract_frames(synthetic_videos["clipA"], "clipA", [0, 1, 2], tmp_path)
        assert [p.name for p in written] == ["clipA_0000.jpg", "clipA_0001.jpg", "clipA_0002.jpg"]
        assert all(p.stat().st_size > 0 for p in written)

    def test_timestamp_past_end_skipped_with_warning(self, synthetic_videos, tmp_path, caplog):
        with caplog.at_level(logging.WARNING):
            written = extract_frames(synthetic_videos["clipA"], "clipA", [0, 9999], tmp_path)
        assert [p.name for p in written] == ["clipA_0000.jpg"]
        assert not (tmp_path / "clipA_9999.jpg").exists()
        assert any("beyond the clip" in message for message in caplog.messages)

    def test_undecodable_video_errors(self, tmp_path):
        bogus = tmp_path / "not_a_video.avi"
        bogus.write_bytes(b"definitely not video data")
        with pytest.raises(AdapterError, match="cannot decode"):
            extract_frames(bogus, "x", [0], tmp_path)

    def test_schedule_count_matches(self, synthetic_videos, tmp_path):
        # 12 s clip at 4 fps serves the whole 10-keyframe window
        written = extract_frames(synthetic_videos["clipB"], "clipB", list(range(10)), tmp_path)
        assert len(written) == 10

    def test_default_window_yields_897_frames(self, tmp_path):
        # a 30-minute clip covers the whole default 902..1798 s window
        from support import make_video

        video = make_video(tmp_path / "long.avi", seconds=1800, fps=2.0)
        written = extract_frames(video, "longvid", list(range(902, 1799)), tmp_path / "frames")
        assert len(written) == 897
        assert written[0].name == "longvid_0902.jpg"
        assert written[-1].name == "longvid_1798.jpg"
