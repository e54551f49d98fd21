"""Scripted presentation sequences: scenes, transitions, per-scene gestures.

Story documents are JSON:
{"title": str, "scenes": [{"id": str, "chart": {"kind", ...bindings},
"data": path, "gestures": ["point","pan","zoom","pinch"],
"transition": {"kind": "cut"|"fade", "duration_ms": int}}]}

Datasets are resolved relative to the story file and loaded eagerly so a
parsed script is fully validated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .data import Dataset, load_dataset_path
from .errors import (
    DuplicateId,
    MissingData,
    SchemaError,
    UnknownScene,
    UnsupportedGesture,
)
from .graph_layout import GraphData, parse_graph
from .scene import ChartSpec, DimpVisSpec, NetworkSpec, build_scene, spec_from_json, spec_to_json

GESTURE_NAMES = ("point", "pinch", "pan", "zoom")
DEFAULT_GESTURES = frozenset({"point", "pan", "zoom"})
PINCH_CHARTS = (NetworkSpec, DimpVisSpec)


@dataclass(frozen=True)
class Transition:
    kind: str = "cut"        # "cut" | "fade"
    duration_ms: int = 0


@dataclass(frozen=True)
class SceneDef:
    id: str
    chart: ChartSpec
    data_path: str                      # as written in the document
    source: Dataset | GraphData
    gestures: frozenset[str] = DEFAULT_GESTURES
    transition: Transition = Transition()


@dataclass(frozen=True)
class StoryScript:
    title: str
    scenes: tuple[SceneDef, ...]

    def index_of(self, scene_id: str) -> int:
        for i, scene in enumerate(self.scenes):
            if scene.id == scene_id:
                return i
        raise UnknownScene(scene_id)

    def scene(self, scene_id: str) -> SceneDef:
        return self.scenes[self.index_of(scene_id)]


@dataclass(frozen=True)
class StoryState:
    current_index: int = 0


@dataclass(frozen=True)
class Command:
    kind: str                 # "next" | "prev" | "goto"
    scene_id: str | None = None


def _parse_transition(obj: Any, scene_id: str) -> Transition:
    if obj is None:
        return Transition()
    if not isinstance(obj, dict):
        raise SchemaError("transition must be an object", path=f"scenes[{scene_id}].transition")
    kind = obj.get("kind", "cut")
    if kind not in ("cut", "fade"):
        raise SchemaError(f"unknown transition kind {kind!r}", path=f"scenes[{scene_id}].transition")
    duration = obj.get("duration_ms", 0)
    if not isinstance(duration, int) or isinstance(duration, bool) or duration < 0:
        raise SchemaError("duration_ms must be a non-negative integer", path=f"scenes[{scene_id}].transition")
    return Transition(kind=kind, duration_ms=duration)


def _load_source(chart: ChartSpec, path: Path) -> Dataset | GraphData:
    if isinstance(chart, NetworkSpec):
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"graph file is not valid JSON: {exc.msg}", path=str(path)) from None
        return parse_graph(doc)
    time_field = chart.time_field if isinstance(chart, DimpVisSpec) else None
    return load_dataset_path(path, time_field=time_field)


def parse_story(document: bytes | str | dict, base_dir: str | Path = ".") -> StoryScript:
    """Parse and fully validate a story document.

    Raises SchemaError (unknown chart kind / malformed fields), DuplicateId,
    UnsupportedGesture (pinch on bar or line scenes), MissingData (unresolvable
    data path), or any dataset/spec error from eager loading.
    """
    if isinstance(document, (bytes, str)):
        try:
            obj = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc.msg}") from None
    else:
        obj = document
    if not isinstance(obj, dict):
        raise SchemaError("story must be a JSON object")
    title = obj.get("title", "")
    if not isinstance(title, str):
        raise SchemaError("title must be a string", path="title")
    scenes_obj = obj.get("scenes")
    if not isinstance(scenes_obj, list) or not scenes_obj:
        raise SchemaError("story needs a non-empty scenes array", path="scenes")

    base = Path(base_dir)
    scenes: list[SceneDef] = []
    seen_ids: set[str] = set()
    for i, sc in enumerate(scenes_obj):
        where = f"scenes[{i}]"
        if not isinstance(sc, dict):
            raise SchemaError("scene must be an object", path=where)
        scene_id = sc.get("id")
        if not isinstance(scene_id, str) or not scene_id:
            raise SchemaError("scene needs a non-empty string id", path=where)
        if scene_id in seen_ids:
            raise DuplicateId(scene_id)
        seen_ids.add(scene_id)

        chart = spec_from_json(sc.get("chart"), path=f"{where}.chart")

        gestures_obj = sc.get("gestures")
        if gestures_obj is None:
            gestures = DEFAULT_GESTURES
        else:
            if not isinstance(gestures_obj, list):
                raise SchemaError("gestures must be an array", path=f"{where}.gestures")
            for g in gestures_obj:
                if g not in GESTURE_NAMES:
                    raise SchemaError(f"unknown gesture {g!r}", path=f"{where}.gestures")
            gestures = frozenset(gestures_obj)
        if "pinch" in gestures and not isinstance(chart, PINCH_CHARTS):
            raise UnsupportedGesture(scene_id, "pinch")

        data_path = sc.get("data")
        if not isinstance(data_path, str) or not data_path:
            raise SchemaError("scene needs a data path", path=f"{where}.data")
        resolved = (base / data_path) if not Path(data_path).is_absolute() else Path(data_path)
        if not resolved.is_file():
            raise MissingData(data_path)
        source = _load_source(chart, resolved)
        build_scene(chart, source)  # eager spec/data check; sessions rebuild lazily

        scenes.append(
            SceneDef(
                id=scene_id,
                chart=chart,
                data_path=data_path,
                source=source,
                gestures=gestures,
                transition=_parse_transition(sc.get("transition"), scene_id),
            )
        )
    return StoryScript(title=title, scenes=tuple(scenes))


def parse_story_path(path: str | Path) -> StoryScript:
    p = Path(path)
    return parse_story(p.read_bytes(), base_dir=p.parent)


def serialize_story(script: StoryScript) -> dict:
    """Inverse of parse_story up to semantic equality."""
    return {
        "title": script.title,
        "scenes": [
            {
                "id": scene.id,
                "chart": spec_to_json(scene.chart),
                "data": scene.data_path,
                "gestures": [g for g in GESTURE_NAMES if g in scene.gestures],
                "transition": {
                    "kind": scene.transition.kind,
                    "duration_ms": scene.transition.duration_ms,
                },
            }
            for scene in script.scenes
        ],
    }


def navigate(
    state: StoryState, script: StoryScript, cmd: Command
) -> tuple[StoryState, Transition | None]:
    """Move through the script. Next/Prev clamp at the ends (no wrap); Goto is
    by id. Returns the new state plus the outgoing scene's transition, or None
    when no move happened."""
    idx = state.current_index
    if cmd.kind == "next":
        new_idx = min(idx + 1, len(script.scenes) - 1)
    elif cmd.kind == "prev":
        new_idx = max(idx - 1, 0)
    elif cmd.kind == "goto":
        if cmd.scene_id is None:
            raise UnknownScene("<missing>")
        new_idx = script.index_of(cmd.scene_id)
    else:
        raise ValueError(f"unknown navigation command {cmd.kind!r}")
    if new_idx == idx:
        return state, None
    return StoryState(current_index=new_idx), script.scenes[idx].transition
