import json
from pathlib import Path

import pytest

from hanstream.cli import main
from hanstream.landmarks import Handedness
from synth import open_palm_hand, point_hand, raw_frame_msg, trace_line

DATA = Path(__file__).parent / "data"
STORY = str(DATA / "story_demo.json")


def write_trace(path: Path, msgs) -> str:
    with path.open("w", encoding="utf-8") as sink:
        for msg in msgs:
            sink.write(json.dumps(trace_line(msg), separators=(",", ":")) + "\n")
    return str(path)


def palm_trace(path: Path, n=5) -> str:
    msgs = [raw_frame_msg(1000 + i * 33, open_palm_hand(Handedness.LEFT, at=(0.5, 0.5)))
            for i in range(n)]
    return write_trace(path, msgs)


class TestValidate:
    def test_ok(self, capsys):
        assert main(["validate", "--story", STORY]) == 0
        assert "4 scene(s)" in capsys.readouterr().out

    def test_invalid_story_exit_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"title": "x", "scenes": [
            {"id": "a", "chart": {"kind": "pie"}, "data": "sales.csv"}]}))
        assert main(["validate", "--story", str(bad)]) == 1
        assert "error" in capsys.readouterr().err

    def test_missing_story_exit_2(self):
        assert main(["validate", "--story", "/nope/story.json"]) == 2


class TestReplay:
    def test_writes_log_and_summary(self, tmp_path, capsys):
        trace = palm_trace(tmp_path / "t.jsonl")
        out = tmp_path / "out.jsonl"
        assert main(["replay", "--story", STORY, "--trace", trace, "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 5  # one scene state per frame
        for line in lines:
            assert json.loads(line)["type"] == "scene_state"
        printed = capsys.readouterr().out
        assert "frames: 5" in printed
        assert "final scene: sales-bar" in printed

    def test_deterministic_output(self, tmp_path):
        trace = palm_trace(tmp_path / "t.jsonl")
        out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        main(["replay", "--story", STORY, "--trace", trace, "--out", str(out1)])
        main(["replay", "--story", STORY, "--trace", trace, "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_missing_trace_exit_2(self, tmp_path):
        assert main(["replay", "--story", STORY, "--trace", str(tmp_path / "x.jsonl"),
                     "--out", str(tmp_path / "o.jsonl")]) == 2

    def test_bad_trace_line_exit_1(self, tmp_path, capsys):
        trace = tmp_path / "t.jsonl"
        trace.write_text('{"t":1,"msg":{"type":"frame","frame":{"timestamp_ms":1,"hands":[]}}}\n{oops\n')
        code = main(["replay", "--story", STORY, "--trace", str(trace), "--out", str(tmp_path / "o.jsonl")])
        assert code == 1
        assert "line 2" in capsys.readouterr().err


class TestClassify:
    def test_open_palm_trace(self, tmp_path):
        trace = palm_trace(tmp_path / "t.jsonl")
        out = tmp_path / "kinds.jsonl"
        assert main(["classify", "--trace", trace, "--out", str(out)]) == 0
        lines = [json.loads(l) for l in out.read_text().splitlines()]
        assert len(lines) == 5
        for rec in lines:
            assert rec["hands"][0]["kind"] == "open_palm"
            assert set(rec["hands"][0]["angles"]) == {"thumb", "index", "middle", "ring", "pinky"}

    def test_empty_trace(self, tmp_path, capsys):
        trace = tmp_path / "t.jsonl"
        trace.write_text("")
        assert main(["classify", "--trace", trace.as_posix()]) == 0
        assert capsys.readouterr().out == ""

    def test_malformed_line_exit_1(self, tmp_path, capsys):
        trace = tmp_path / "t.jsonl"
        trace.write_text("{nope\n")
        assert main(["classify", "--trace", str(trace)]) == 1
        assert "line 1" in capsys.readouterr().err


class TestRender:
    def test_bar_svg_rect_count(self, tmp_path):
        out = tmp_path / "bar.svg"
        assert main(["render", "--story", STORY, "--scene", "sales-bar", "--out", str(out)]) == 0
        svg = out.read_text()
        # white canvas plus one rect per category
        assert svg.count("<rect") == 1 + 4
        assert svg.startswith("<svg")

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        main(["render", "--story", STORY, "--scene", "team-network", "--out", str(a)])
        main(["render", "--story", STORY, "--scene", "team-network", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_transform_override(self, tmp_path):
        base, scaled = tmp_path / "base.svg", tmp_path / "scaled.svg"
        main(["render", "--story", STORY, "--scene", "sales-bar", "--out", str(base)])
        main(["render", "--story", STORY, "--scene", "sales-bar", "--scale", "2",
              "--tx", "0.1", "--out", str(scaled)])
        def first_bar_x(svg):
            # second <rect is the first bar
            part = svg.split("<rect")[2]
            return float(part.split('x="')[1].split('"')[0])
        x0 = first_bar_x(base.read_text())
        x1 = first_bar_x(scaled.read_text())
        assert x1 == pytest.approx(2.0 * x0 + 0.1)

    def test_unknown_scene_exit_1(self, tmp_path):
        assert main(["render", "--story", STORY, "--scene", "nope",
                     "--out", str(tmp_path / "x.svg")]) == 1


class TestUsage:
    def test_unknown_flag_rejected(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["validate", "--story", STORY, "--frobnicate"])
        assert err.value.code == 2
        assert "usage" in capsys.readouterr().err.lower()

    def test_missing_subcommand_rejected(self):
        with pytest.raises(SystemExit):
            main([])
