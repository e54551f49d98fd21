"""Operator entry points.

    hanstream serve    --story FILE --port N [--host ADDR] [--record FILE]
    hanstream replay   --story FILE --trace FILE --out FILE
    hanstream classify --trace FILE [--out FILE]
    hanstream render   --story FILE --scene ID [--scale S --tx X --ty Y] --out FILE.svg
    hanstream validate --story FILE

Exit codes: 0 success, 1 validation error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import DegenerateFinger, EngineError, ReplayError
from .gestures import FINGER_TRIPLES, GestureConfig, classify_hand, curl_profile
from .landmarks import parse_frame
from .scene import Scene, ViewTransform, render_scene
from .session import replay_trace, serialize_outbound
from .story import StoryScript, parse_story_path


def _load_story(path: str) -> tuple[StoryScript, Path]:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"story file not found: {path}")
    return parse_story_path(p), p.parent


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    script, base_dir = _load_story(args.story)
    static = Path(__file__).resolve().parents[2] / "frontend"
    if not (static / "dist").is_dir():
        static = None  # no built console bundle; serve the placeholder page
    app = create_app(script, base_dir=base_dir, record_path=args.record, static_dir=static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    script, base_dir = _load_story(args.story)
    trace = Path(args.trace)
    if not trace.is_file():
        raise FileNotFoundError(f"trace file not found: {args.trace}")
    lines = trace.read_text(encoding="utf-8").splitlines()
    result = replay_trace(script, lines, base_dir=base_dir)
    out = Path(args.out)
    with out.open("w", encoding="utf-8") as sink:
        for msg in result.messages:
            sink.write(serialize_outbound(msg) + "\n")
    by_kind = ", ".join(f"{k}={v}" for k, v in sorted(result.start_counts.items())) or "none"
    print(f"frames: {result.frames} (dropped {result.dropped_frames})")
    print(f"gesture starts: {by_kind}")
    print(f"final scene: {result.final_scene_id}")
    print(f"wrote {len(result.messages)} messages to {out}")
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    trace = Path(args.trace)
    if not trace.is_file():
        raise FileNotFoundError(f"trace file not found: {args.trace}")
    cfg = GestureConfig()
    sink = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for lineno, line in enumerate(trace.read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ReplayError(f"invalid JSON: {exc.msg}", line=lineno) from None
            msg = record.get("msg") if isinstance(record, dict) else None
            if not isinstance(msg, dict) or msg.get("type") != "frame":
                continue
            try:
                frame = parse_frame(msg.get("frame"))
            except EngineError as exc:
                raise ReplayError(str(exc), line=lineno) from None
            hands = []
            for hand in frame.hands:
                try:
                    profile = curl_profile(hand, cfg)
                    pose = classify_hand(hand, profile, cfg)
                    angles = {f.value: profile.angles[f] for f in FINGER_TRIPLES}
                    kind = pose.kind.value
                except DegenerateFinger:
                    angles = None
                    kind = "none"
                hands.append(
                    {"handedness": hand.handedness.value, "kind": kind, "angles": angles}
                )
            sink.write(
                json.dumps(
                    {"timestamp_ms": frame.timestamp_ms, "hands": hands},
                    separators=(",", ":"),
                )
                + "\n"
            )
    finally:
        if sink is not sys.stdout:
            sink.close()
    return 0


_SVG_PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#9c755f",
)


def scene_to_svg(scene: Scene) -> str:
    """Direct geometric transcription of the render commands, layer order kept."""
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1 1" width="800" height="800">',
        '<rect x="0" y="0" width="1" height="1" fill="#ffffff"/>',
    ]
    for cmd in render_scene(scene):
        color = _SVG_PALETTE[cmd.color % len(_SVG_PALETTE)]
        stroke = ' stroke="#222222" stroke-width="0.004"' if cmd.emphasis else ""
        d = cmd.to_json()
        op = d["op"]
        if op == "rect":
            fill = "#f8f8f4" if d["layer"] == "overlay" else color
            parts.append(
                f'<rect x="{d["x"]}" y="{d["y"]}" width="{d["w"]}" height="{d["h"]}" fill="{fill}"{stroke}/>'
            )
        elif op == "circle":
            parts.append(f'<circle cx="{d["cx"]}" cy="{d["cy"]}" r="{d["r"]}" fill="{color}"{stroke}/>')
        elif op == "polyline":
            pts = " ".join(f"{x},{y}" for x, y in d["points"])
            width = 0.006 if cmd.emphasis else 0.003
            parts.append(
                f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="{width}"/>'
            )
        else:
            parts.append(
                f'<text x="{d["x"]}" y="{d["y"]}" font-size="0.025" font-family="sans-serif" '
                f'fill="#333333">{_xml_escape(d["text"])}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _xml_escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def cmd_render(args: argparse.Namespace) -> int:
    from .scene import build_scene

    script, _ = _load_story(args.story)
    scene_def = script.scene(args.scene)  # raises UnknownScene -> exit 1
    scene = build_scene(scene_def.chart, scene_def.source)
    scene.transform = ViewTransform(s=args.scale, tx=args.tx, ty=args.ty)
    Path(args.out).write_text(scene_to_svg(scene), encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    script, _ = _load_story(args.story)
    kinds = ", ".join(s.chart.kind for s in script.scenes)
    print(f"ok: {len(script.scenes)} scene(s) [{kinds}]")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hanstream", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the websocket session server")
    serve.add_argument("--story", required=True)
    serve.add_argument("--port", type=int, default=8700)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--record", default=None, help="record inbound traces to this .jsonl file")
    serve.set_defaults(func=cmd_serve)

    replay = sub.add_parser("replay", help="replay a trace headlessly and write the outbound log")
    replay.add_argument("--story", required=True)
    replay.add_argument("--trace", required=True)
    replay.add_argument("--out", required=True)
    replay.set_defaults(func=cmd_replay)

    classify = sub.add_parser("classify", help="per-frame gesture kinds and curl angles")
    classify.add_argument("--trace", required=True)
    classify.add_argument("--out", default=None)
    classify.set_defaults(func=cmd_classify)

    render = sub.add_parser("render", help="snapshot one scene as SVG")
    render.add_argument("--story", required=True)
    render.add_argument("--scene", required=True)
    render.add_argument("--scale", type=float, default=1.0)
    render.add_argument("--tx", type=float, default=0.0)
    render.add_argument("--ty", type=float, default=0.0)
    render.add_argument("--out", required=True)
    render.set_defaults(func=cmd_render)

    validate = sub.add_parser("validate", help="parse and fully validate a story file")
    validate.add_argument("--story", required=True)
    validate.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 2


if __name__ == "__main__":
    sys.exit(main())
