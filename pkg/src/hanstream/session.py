"""Realtime session pipeline and message schemas.

Inbound: Hello, LandmarkFrame, Control, PlannerUpdate. Outbound: SceneState
(seq, render commands, HUD), StoryInfo, Transition, Error. Frames run the
full pipeline: mirror, smooth, classify, debounce, filter by the scene's
enabled gestures, apply interactions, tick the network layout, render.

Traces are newline-delimited JSON records {"t": timestamp_ms, "msg": inbound
message}; replay runs headlessly at logical time and reproduces the outbound
log byte for byte.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, IO, Iterable, Union

from .errors import DegenerateFinger, EngineError, FrameError, ReplayError, UnknownScene
from .graph_layout import layout_step
from .gestures import (
    GestureConfig,
    GestureDebouncer,
    GestureEvent,
    GestureKind,
    HandPose,
    Phase,
    RawGesture,
    classify_hand,
    combine_hands,
    curl_profile,
)
from .interaction import InteractionConfig, InteractionState, apply_gesture_event, end_active_mode
from .landmarks import HandFrame, Handedness, LandmarkSmoother, Point2, mirror_frame, parse_frame
from .scene import DimpVisSpec, NetworkSpec, RenderCommand, Scene, ViewTransform, build_scene, render_scene
from .story import Command, SceneDef, StoryScript, StoryState, navigate, parse_story

# story gesture names -> debounced gesture kinds they enable
GESTURE_NAME_TO_KIND = {
    "point": GestureKind.POINT,
    "pinch": GestureKind.PINCH,
    "pan": GestureKind.FIST,
    "zoom": GestureKind.ZOOM,
}


# ---------------------------------------------------------------------------
# Outbound messages


@dataclass(frozen=True)
class Hud:
    gesture: str | None = None
    anchors: tuple[Point2, ...] = ()
    time_label: str | None = None

    def to_json(self) -> dict:
        return {
            "gesture": self.gesture,
            "anchors": [{"x": p.x, "y": p.y} for p in self.anchors],
            "time_label": self.time_label,
        }


@dataclass(frozen=True)
class SceneStateMsg:
    seq: int
    scene_id: str
    transform: ViewTransform
    hud: Hud
    commands: tuple[RenderCommand, ...]

    def to_json(self) -> dict:
        return {
            "type": "scene_state",
            "seq": self.seq,
            "scene_id": self.scene_id,
            "transform": {"s": self.transform.s, "tx": self.transform.tx, "ty": self.transform.ty},
            "hud": self.hud.to_json(),
            "commands": [c.to_json() for c in self.commands],
        }


@dataclass(frozen=True)
class StoryInfoMsg:
    title: str
    scenes: tuple[dict, ...]
    current: int

    def to_json(self) -> dict:
        return {
            "type": "story_info",
            "title": self.title,
            "scenes": list(self.scenes),
            "current": self.current,
        }


@dataclass(frozen=True)
class TransitionMsg:
    kind: str
    duration_ms: int

    def to_json(self) -> dict:
        return {"type": "transition", "kind": self.kind, "duration_ms": self.duration_ms}


@dataclass(frozen=True)
class ErrorMsg:
    code: str
    detail: str = ""

    def to_json(self) -> dict:
        return {"type": "error", "code": self.code, "detail": self.detail}


OutboundMessage = Union[SceneStateMsg, StoryInfoMsg, TransitionMsg, ErrorMsg]


def serialize_outbound(msg: OutboundMessage) -> str:
    return json.dumps(msg.to_json(), separators=(",", ":"))


# ---------------------------------------------------------------------------
# Inbound messages


@dataclass(frozen=True)
class HelloIn:
    role: str                      # "presenter" | "viewer"
    session: str | None = None


@dataclass(frozen=True)
class FrameIn:
    frame: HandFrame


@dataclass(frozen=True)
class ControlIn:
    command: Command


@dataclass(frozen=True)
class PlannerIn:
    story: dict


InboundMessage = Union[HelloIn, FrameIn, ControlIn, PlannerIn]


def parse_inbound(obj: object) -> InboundMessage:
    if not isinstance(obj, dict):
        raise FrameError("message must be a JSON object")
    mtype = obj.get("type")
    if mtype == "hello":
        role = obj.get("role")
        if role not in ("presenter", "viewer"):
            raise FrameError(f"hello role must be presenter or viewer, got {role!r}")
        session = obj.get("session")
        if session is not None and not isinstance(session, str):
            raise FrameError("hello session must be a string")
        return HelloIn(role=role, session=session)
    if mtype == "frame":
        return FrameIn(frame=parse_frame(obj.get("frame")))
    if mtype == "control":
        command = obj.get("command")
        if command not in ("next", "prev", "goto"):
            raise FrameError(f"unknown control command {command!r}")
        scene_id = obj.get("scene_id")
        if command == "goto" and not isinstance(scene_id, str):
            raise FrameError("goto needs a scene_id")
        return ControlIn(command=Command(kind=command, scene_id=scene_id))
    if mtype == "planner_update":
        story = obj.get("story")
        if not isinstance(story, dict):
            raise FrameError("planner_update needs a story object")
        return PlannerIn(story=story)
    raise FrameError(f"unknown message type {mtype!r}")


# ---------------------------------------------------------------------------
# Session


class Session:
    """Single-presenter pipeline state. Frames must arrive in timestamp order;
    strictly serial processing per session."""

    def __init__(
        self,
        script: StoryScript,
        base_dir: str | Path = ".",
        gesture_cfg: GestureConfig | None = None,
        recorder: IO[str] | None = None,
    ):
        self.script = script
        self.base_dir = Path(base_dir)
        self.story_state = StoryState()
        self.gesture_cfg = gesture_cfg or GestureConfig()
        self.recorder = recorder
        self.smoother = LandmarkSmoother()
        self.debouncer = GestureDebouncer(self.gesture_cfg)
        self.istate = InteractionState()
        self._scenes: dict[str, Scene] = {}
        self.seq = 0
        self.last_ts: int | None = None
        self.frames = 0
        self.dropped_frames = 0
        self.start_counts: Counter[str] = Counter()

    # -- scene access -------------------------------------------------------

    @property
    def current_def(self) -> SceneDef:
        return self.script.scenes[self.story_state.current_index]

    @property
    def current_scene(self) -> Scene:
        scene_def = self.current_def
        scene = self._scenes.get(scene_def.id)
        if scene is None:
            scene = build_scene(scene_def.chart, scene_def.source)
            self._scenes[scene_def.id] = scene
        return scene

    def enabled_kinds(self) -> frozenset[GestureKind]:
        return frozenset(GESTURE_NAME_TO_KIND[g] for g in self.current_def.gestures)

    def interaction_cfg(self) -> InteractionConfig:
        return InteractionConfig(enabled=self.enabled_kinds())

    # -- outbound builders --------------------------------------------------

    def _hud(self, anchors: tuple[Point2, ...]) -> Hud:
        scene = self.current_scene
        label = scene.dimp.cursor.label() if isinstance(scene.spec, DimpVisSpec) else None
        kind = self.istate.active_kind.value if self.istate.active_kind else None
        return Hud(gesture=kind, anchors=anchors, time_label=label)

    def make_scene_state(self, anchors: tuple[Point2, ...] = ()) -> SceneStateMsg:
        scene = self.current_scene
        self.seq += 1
        return SceneStateMsg(
            seq=self.seq,
            scene_id=self.current_def.id,
            transform=scene.transform,
            hud=self._hud(anchors),
            commands=tuple(render_scene(scene)),
        )

    def story_info(self) -> StoryInfoMsg:
        scenes = tuple(
            {
                "id": s.id,
                "kind": s.chart.kind,
                "gestures": [g for g in ("point", "pinch", "pan", "zoom") if g in s.gestures],
            }
            for s in self.script.scenes
        )
        return StoryInfoMsg(title=self.script.title, scenes=scenes, current=self.story_state.current_index)

    # -- pipeline -----------------------------------------------------------

    def _classify(self, frame: HandFrame) -> RawGesture:
        poses: list[HandPose] = []
        for handedness in (Handedness.LEFT, Handedness.RIGHT):
            hand = frame.hand(handedness)
            if hand is None:
                continue
            try:
                profile = curl_profile(hand, self.gesture_cfg)
                poses.append(classify_hand(hand, profile, self.gesture_cfg))
            except DegenerateFinger:
                poses.append(HandPose(handedness, GestureKind.NONE))
        return combine_hands(tuple(poses))

    def process_frame(self, frame: HandFrame) -> SceneStateMsg:
        """mirror -> smooth -> classify -> debounce -> filter -> interact ->
        layout tick -> render."""
        self.frames += 1
        self.last_ts = frame.timestamp_ms
        frame = mirror_frame(frame)
        frame = self.smoother.apply(frame)
        raw = self._classify(frame)
        events = self.debouncer.step(raw, frame.timestamp_ms)

        scene = self.current_scene
        cfg = self.interaction_cfg()
        enabled = cfg.enabled
        anchors: tuple[Point2, ...] = ()
        for ev in events:
            if ev.kind not in enabled:
                continue
            if ev.phase is Phase.START:
                self.start_counts[ev.kind.value] += 1
            apply_gesture_event(scene, self.istate, ev, cfg)
        if self.istate.active_kind is not None:
            anchors = self._active_anchors(events)

        if isinstance(scene.spec, NetworkSpec):
            layout_step(scene.layout, scene.graph, scene.layout_params)
            scene.refresh_marks()
        return self.make_scene_state(anchors)

    def _active_anchors(self, events: list[GestureEvent]) -> tuple[Point2, ...]:
        for ev in reversed(events):
            if ev.kind is not self.istate.active_kind:
                continue
            if ev.kind is GestureKind.ZOOM and ev.palms is not None:
                return ev.palms
            if ev.anchor is not None and ev.hand is self.istate.active_hand:
                return (ev.anchor,)
        return ()

    # -- message handling ---------------------------------------------------

    def _record(self, obj: dict) -> None:
        if self.recorder is None:
            return
        if obj.get("type") == "frame":
            frame = obj.get("frame")
            t = frame.get("timestamp_ms", self.last_ts or 0) if isinstance(frame, dict) else 0
        else:
            t = self.last_ts or 0
        self.recorder.write(json.dumps({"t": t, "msg": obj}, separators=(",", ":")) + "\n")
        self.recorder.flush()  # trace lines parse independently; keep them durable

    def _switch_scene(self) -> None:
        """End the active mode on the outgoing scene, reset per-scene pipeline
        state. Scene objects persist so transforms/time/layout are restored."""
        scene = self._scenes.get(self.current_def.id)
        if scene is not None:
            end_active_mode(scene, self.istate)
        self.debouncer.reset()
        self.istate.reset()

    def handle_message(self, obj: dict, role: str = "presenter") -> list[OutboundMessage]:
        """Process one inbound message; returns outbound messages in order.

        Error messages are addressed to the sender; everything else is a
        session broadcast.
        """
        self._record(obj)
        try:
            msg = parse_inbound(obj)
        except EngineError as exc:
            return [ErrorMsg(code="bad_message", detail=str(exc))]

        if isinstance(msg, HelloIn):
            return [self.story_info(), self.make_scene_state()]

        if isinstance(msg, FrameIn):
            if role != "presenter":
                return [ErrorMsg(code="not_presenter", detail="only the presenter sends frames")]
            ts = msg.frame.timestamp_ms
            if self.last_ts is not None and ts <= self.last_ts:
                self.dropped_frames += 1
                return []
            return [self.process_frame(msg.frame)]

        if isinstance(msg, ControlIn):
            if role != "presenter":
                return [ErrorMsg(code="not_presenter", detail="viewers are receive-only")]
            try:
                new_state, plan = navigate(self.story_state, self.script, msg.command)
            except UnknownScene as exc:
                return [ErrorMsg(code=exc.code, detail=str(exc))]
            out: list[OutboundMessage] = []
            if new_state.current_index != self.story_state.current_index:
                self._switch_scene()
                self.story_state = new_state
            out.append(self.story_info())
            if plan is not None:
                out.append(TransitionMsg(kind=plan.kind, duration_ms=plan.duration_ms))
            out.append(self.make_scene_state())
            return out

        # PlannerIn
        if role != "presenter":
            return [ErrorMsg(code="not_presenter", detail="viewers are receive-only")]
        try:
            new_script = parse_story(msg.story, base_dir=self.base_dir)
        except EngineError as exc:
            return [ErrorMsg(code="invalid_story", detail=str(exc))]
        current_id = self.current_def.id
        self._switch_scene()
        self.script = new_script
        self._scenes.clear()
        try:
            idx = new_script.index_of(current_id)
        except UnknownScene:
            idx = 0
        self.story_state = StoryState(current_index=idx)
        return [self.story_info(), self.make_scene_state()]

    def handle_text(self, text: str, role: str = "presenter") -> list[OutboundMessage]:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            return [ErrorMsg(code="bad_message", detail=f"invalid JSON: {exc.msg}")]
        return self.handle_message(obj, role=role)


# ---------------------------------------------------------------------------
# Trace replay


@dataclass
class ReplayResult:
    messages: list[OutboundMessage] | None
    final_state: SceneStateMsg
    frames: int
    dropped_frames: int
    start_counts: dict[str, int]
    final_scene_id: str


def replay_trace(
    script: StoryScript,
    lines: Iterable[str],
    base_dir: str | Path = ".",
    on_message: Callable[[OutboundMessage], None] | None = None,
) -> ReplayResult:
    """Run a recorded trace headlessly at logical time (no sleeping).

    Collects the outbound log unless on_message is given, in which case each
    message is passed to the callback instead. Raises ReplayError with the
    1-based line number for unparseable lines.
    """
    session = Session(script, base_dir=base_dir)
    collected: list[OutboundMessage] | None = [] if on_message is None else None
    last_state: SceneStateMsg | None = None
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ReplayError(f"invalid JSON: {exc.msg}", line=lineno) from None
        if not isinstance(record, dict) or "msg" not in record:
            raise ReplayError("trace record needs a msg field", line=lineno)
        outs = session.handle_message(record["msg"], role="presenter")
        for out in outs:
            if isinstance(out, SceneStateMsg):
                last_state = out
            if collected is not None:
                collected.append(out)
            else:
                on_message(out)
    if last_state is None:
        last_state = session.make_scene_state()
    return ReplayResult(
        messages=collected,
        final_state=last_state,
        frames=session.frames,
        dropped_frames=session.dropped_frames,
        start_counts=dict(session.start_counts),
        final_scene_id=session.current_def.id,
    )
