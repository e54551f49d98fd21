"""Chart scenes: specs, derived marks, view transform, hit tests, render commands.

All chart geometry lives in world coordinates inside the plot area [0,1]^2.
A uniform scale-plus-translation view transform maps world to screen; render
commands carry screen-space geometry in strict layer order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any, Union

from .data import ColumnType, Dataset
from .errors import SpecError
from .graph_layout import GraphData, LayoutParams, LayoutState, init_layout
from .landmarks import Point2
from .scales import LinearScale, band_scale
from .timenav import DimpState, TimeCursor, Trajectory, build_trajectories, positions_at

S_MIN_DEFAULT = 0.25
S_MAX_DEFAULT = 8.0
HIT_RADIUS_DEFAULT = 0.02
BAR_PADDING = 0.1
POINT_RADIUS = 0.01
NODE_RADIUS = 0.025


# ---------------------------------------------------------------------------
# Chart specs


@dataclass(frozen=True)
class BarSpec:
    category_field: str
    value_field: str
    kind: str = "bar"


@dataclass(frozen=True)
class MultiLineSpec:
    x_field: str
    y_field: str
    series_field: str
    kind: str = "multiline"


@dataclass(frozen=True)
class NetworkSpec:
    nodes_key: str = "nodes"
    links_key: str = "links"
    kind: str = "network"


@dataclass(frozen=True)
class DimpVisSpec:
    entity_field: str
    time_field: str
    x_field: str
    y_field: str
    size_field: str | None = None
    kind: str = "dimpvis"


ChartSpec = Union[BarSpec, MultiLineSpec, NetworkSpec, DimpVisSpec]


# ---------------------------------------------------------------------------
# View transform


@dataclass(frozen=True)
class ViewTransform:
    s: float = 1.0
    tx: float = 0.0
    ty: float = 0.0

    def apply(self, x: float, y: float) -> tuple[float, float]:
        return (x * self.s + self.tx, y * self.s + self.ty)

    def invert(self, x: float, y: float) -> tuple[float, float]:
        return ((x - self.tx) / self.s, (y - self.ty) / self.s)


IDENTITY = ViewTransform()


# ---------------------------------------------------------------------------
# Marks and render commands


class Layer(IntEnum):
    BACKGROUND = 0
    MARKS = 1
    HIGHLIGHT = 2
    OVERLAY = 3

    @property
    def wire(self) -> str:
        return _LAYER_WIRE[self]


_LAYER_WIRE = {
    Layer.BACKGROUND: "background",
    Layer.MARKS: "marks",
    Layer.HIGHLIGHT: "highlight",
    Layer.OVERLAY: "overlay",
}


@dataclass(slots=True)
class Rect:
    x: float
    y: float
    w: float
    h: float


@dataclass(slots=True)
class Circle:
    cx: float
    cy: float
    r: float


@dataclass(slots=True)
class Polyline:
    points: tuple[tuple[float, float], ...]


@dataclass(slots=True)
class Label:
    x: float
    y: float
    text: str


Shape = Union[Rect, Circle, Polyline, Label]


@dataclass(slots=True)
class Mark:
    id: str
    shape: Shape
    layer: Layer = Layer.MARKS
    datum_ref: int | str | None = None
    hit: bool = False
    color: int = 0


@dataclass(slots=True)
class RenderCommand:
    layer: Layer
    shape: Shape
    color: int = 0
    emphasis: bool = False

    def to_json(self) -> dict:
        s = self.shape
        base: dict[str, Any] = {"layer": self.layer.wire}
        if isinstance(s, Rect):
            base.update(op="rect", x=s.x, y=s.y, w=s.w, h=s.h)
        elif isinstance(s, Circle):
            base.update(op="circle", cx=s.cx, cy=s.cy, r=s.r)
        elif isinstance(s, Polyline):
            base.update(op="polyline", points=[[p[0], p[1]] for p in s.points])
        else:
            base.update(op="text", x=s.x, y=s.y, text=s.text)
        base["color"] = self.color
        base["emphasis"] = self.emphasis
        return base


@dataclass(frozen=True)
class Tooltip:
    anchor: Point2          # world coords
    lines: tuple[str, ...]


def format_value(v: float | str) -> str:
    if isinstance(v, str):
        return v
    f = float(v)
    if f.is_integer():
        return str(int(f))
    return repr(f)


# ---------------------------------------------------------------------------
# Scene


@dataclass
class Scene:
    spec: ChartSpec
    data: Dataset | GraphData
    marks: list[Mark]
    transform: ViewTransform = IDENTITY
    highlight: str | None = None
    tooltip: Tooltip | None = None
    # network state
    graph: GraphData | None = None
    layout: LayoutState | None = None
    layout_params: LayoutParams = field(default_factory=LayoutParams)
    # dimpvis state
    trajectories: list[Trajectory] = field(default_factory=list)
    dimp: DimpState | None = None
    # derived views, invalidated whenever the marks list object is replaced
    _cache_src: list | None = field(default=None, repr=False, compare=False)
    _layer_buckets: tuple | None = field(default=None, repr=False, compare=False)
    _hit_marks: list | None = field(default=None, repr=False, compare=False)

    def _ensure_cache(self) -> None:
        if self._cache_src is not self.marks:
            bg = [m for m in self.marks if m.layer is Layer.BACKGROUND]
            mid = [m for m in self.marks if m.layer is Layer.MARKS]
            self._layer_buckets = (bg, mid)
            # shape objects get swapped during refresh but never change type
            self._hit_marks = [m for m in self.marks if m.hit and isinstance(m.shape, (Rect, Circle))]
            self._cache_src = self.marks

    def mark_by_id(self, mark_id: str) -> Mark | None:
        for m in self.marks:
            if m.id == mark_id:
                return m
        return None

    def refresh_marks(self) -> None:
        """Rebuild geometry for dynamic charts (network layout, time scrub)."""
        if isinstance(self.spec, NetworkSpec):
            if self.marks:
                # structure is static; swap in fresh shape objects only (emitted
                # render commands alias the old shapes and must not change)
                _update_network_marks(self.marks, self.graph, self.layout)
            else:
                self.marks = _network_marks(self.graph, self.layout)
        elif isinstance(self.spec, DimpVisSpec):
            self.marks = _dimpvis_marks(self.trajectories, self.dimp)

    def set_time(self, t: float) -> None:
        self.dimp.cursor.t = max(0.0, min(self.dimp.cursor.max_t, t))
        self.refresh_marks()


# ---------------------------------------------------------------------------
# Builders


def _bar_marks(spec: BarSpec, data: Dataset) -> list[Mark]:
    cat_i = data.column_index(spec.category_field)
    val_i = data.column_index(spec.value_field)
    categories = []
    values = []
    for row in data.rows:
        cat = format_value(row[cat_i])
        if cat in categories:
            raise SpecError(f"duplicate category {cat!r}", field=spec.category_field)
        v = float(row[val_i])
        if v < 0.0:
            raise SpecError(f"negative value {v} for {cat!r}", field=spec.value_field)
        categories.append(cat)
        values.append(v)
    vmax = max(values)
    if vmax == 0.0:
        raise SpecError("all bar values are zero", field=spec.value_field)
    scale = LinearScale(0.0, vmax, 0.0, 1.0)
    bands = band_scale(categories, 1.0, BAR_PADDING)

    marks: list[Mark] = [
        Mark(id="axis:x", shape=Polyline(((0.0, 1.0), (1.0, 1.0))), layer=Layer.BACKGROUND),
        Mark(id="axis:y", shape=Polyline(((0.0, 0.0), (0.0, 1.0))), layer=Layer.BACKGROUND),
        Mark(id="label:max", shape=Label(0.01, 0.03, format_value(vmax)), layer=Layer.BACKGROUND),
    ]
    for i, (cat, v) in enumerate(zip(categories, values)):
        band = bands[cat]
        h = scale(v)
        marks.append(
            Mark(
                id=f"bar:{cat}",
                shape=Rect(band.offset, 1.0 - h, band.width, h),
                layer=Layer.MARKS,
                datum_ref=i,
                hit=True,
                color=i,
            )
        )
        marks.append(
            Mark(
                id=f"label:{cat}",
                shape=Label(band.offset + band.width / 2.0, 0.98, cat),
                layer=Layer.BACKGROUND,
            )
        )
    return marks


def _multiline_marks(spec: MultiLineSpec, data: Dataset) -> list[Mark]:
    x_i = data.column_index(spec.x_field)
    y_i = data.column_index(spec.y_field)
    s_i = data.column_index(spec.series_field)
    xs = [float(r[x_i]) for r in data.rows]
    ys = [float(r[y_i]) for r in data.rows]
    x_scale = LinearScale(min(xs), max(xs), 0.0, 1.0)
    y_scale = LinearScale(min(0.0, min(ys)), max(ys), 1.0, 0.0)

    series_order: list[str] = []
    grouped: dict[str, list[int]] = {}
    for i, row in enumerate(data.rows):
        key = format_value(row[s_i])
        if key not in grouped:
            series_order.append(key)
            grouped[key] = []
        grouped[key].append(i)

    marks: list[Mark] = [
        Mark(id="axis:x", shape=Polyline(((0.0, 1.0), (1.0, 1.0))), layer=Layer.BACKGROUND),
        Mark(id="axis:y", shape=Polyline(((0.0, 0.0), (0.0, 1.0))), layer=Layer.BACKGROUND),
        Mark(id="label:ymax", shape=Label(0.01, 0.03, format_value(max(ys))), layer=Layer.BACKGROUND),
        Mark(id="label:xmin", shape=Label(0.0, 0.98, format_value(min(xs))), layer=Layer.BACKGROUND),
        Mark(id="label:xmax", shape=Label(0.95, 0.98, format_value(max(xs))), layer=Layer.BACKGROUND),
    ]
    for color, key in enumerate(series_order):
        rows = sorted(grouped[key], key=lambda i: xs[i])
        pts = tuple((x_scale(xs[i]), y_scale(ys[i])) for i in rows)
        marks.append(Mark(id=f"line:{key}", shape=Polyline(pts), layer=Layer.MARKS, color=color))
        for i in rows:
            marks.append(
                Mark(
                    id=f"pt:{key}:{i}",
                    shape=Circle(x_scale(xs[i]), y_scale(ys[i]), POINT_RADIUS),
                    layer=Layer.MARKS,
                    datum_ref=i,
                    hit=True,
                    color=color,
                )
            )
    return marks


def _update_network_marks(marks: list[Mark], graph: GraphData, layout: LayoutState) -> None:
    """Refresh geometry in the exact mark order _network_marks produces."""
    coords = layout.positions.tolist()
    pos = dict(zip(layout.ids, coords))
    i = 0
    for link in graph.links:
        a = pos[link.source]
        b = pos[link.target]
        marks[i].shape = Polyline(((a[0], a[1]), (b[0], b[1])))
        i += 1
    for node in graph.nodes:
        xy = pos[node.id]
        marks[i].shape = Circle(xy[0], xy[1], NODE_RADIUS)
        i += 1
        if node.label:
            marks[i].shape = Label(xy[0] + NODE_RADIUS + 0.008, xy[1], node.label)
            i += 1


def _network_marks(graph: GraphData, layout: LayoutState) -> list[Mark]:
    coords = layout.positions.tolist()
    pos = {node_id: (xy[0], xy[1]) for node_id, xy in zip(layout.ids, coords)}
    marks: list[Mark] = []
    for link in graph.links:
        a, b = pos[link.source], pos[link.target]
        marks.append(
            Mark(id=f"edge:{link.source}:{link.target}", shape=Polyline((a, b)), layer=Layer.MARKS)
        )
    for i, node in enumerate(graph.nodes):
        x, y = pos[node.id]
        marks.append(
            Mark(
                id=f"node:{node.id}",
                shape=Circle(x, y, NODE_RADIUS),
                layer=Layer.MARKS,
                datum_ref=node.id,
                hit=True,
                color=i % 8,
            )
        )
        if node.label:
            marks.append(
                Mark(
                    id=f"nodelabel:{node.id}",
                    shape=Label(x + NODE_RADIUS + 0.008, y, node.label),
                    layer=Layer.MARKS,
                )
            )
    return marks


def _dimpvis_marks(trajectories: list[Trajectory], dimp: DimpState) -> list[Mark]:
    marks: list[Mark] = [
        Mark(id="axis:x", shape=Polyline(((0.0, 1.0), (1.0, 1.0))), layer=Layer.BACKGROUND),
        Mark(id="axis:y", shape=Polyline(((0.0, 0.0), (0.0, 1.0))), layer=Layer.BACKGROUND),
    ]
    t = dimp.cursor.t
    if dimp.grabbed is not None:
        traj = next((tr for tr in trajectories if tr.entity == dimp.grabbed), None)
        if traj is not None:
            w = dimp.search_window
            lo = max(0, int(math.floor(t)) - w)
            hi = min(traj.steps - 1, int(math.ceil(t)) + w)
            pts = tuple((float(p[0]), float(p[1])) for p in traj.positions[lo : hi + 1])
            if len(pts) >= 2:
                marks.append(
                    Mark(id=f"hint:{dimp.grabbed}", shape=Polyline(pts), layer=Layer.BACKGROUND)
                )
    placed = positions_at(trajectories, t)
    for color, traj in enumerate(trajectories):
        x, y, size = placed[traj.entity]
        marks.append(
            Mark(
                id=f"bubble:{traj.entity}",
                shape=Circle(x, y, size),
                layer=Layer.MARKS,
                datum_ref=traj.entity,
                hit=True,
                color=color % 8,
            )
        )
    return marks


def _require_number(data: Dataset, name: str, allow_time: bool = False) -> None:
    col = data.column(name)
    if col is None:
        raise SpecError(f"field {name!r} not in dataset", field=name)
    ok = (ColumnType.NUMBER, ColumnType.TIME) if allow_time else (ColumnType.NUMBER,)
    if col.ctype not in ok:
        raise SpecError(f"field {name!r} must be numeric, got {col.ctype.value}", field=name)


def build_scene(spec: ChartSpec, source: Dataset | GraphData) -> Scene:
    """Derive marks from a validated spec + data binding; identity transform."""
    if isinstance(spec, BarSpec):
        if not isinstance(source, Dataset):
            raise SpecError("bar chart needs a tabular dataset")
        if source.column(spec.category_field) is None:
            raise SpecError(f"field {spec.category_field!r} not in dataset", field=spec.category_field)
        _require_number(source, spec.value_field)
        return Scene(spec=spec, data=source, marks=_bar_marks(spec, source))

    if isinstance(spec, MultiLineSpec):
        if not isinstance(source, Dataset):
            raise SpecError("line chart needs a tabular dataset")
        _require_number(source, spec.x_field, allow_time=True)
        _require_number(source, spec.y_field)
        if source.column(spec.series_field) is None:
            raise SpecError(f"field {spec.series_field!r} not in dataset", field=spec.series_field)
        return Scene(spec=spec, data=source, marks=_multiline_marks(spec, source))

    if isinstance(spec, NetworkSpec):
        if not isinstance(source, GraphData):
            raise SpecError("network chart needs a graph document")
        layout = init_layout(source)
        scene = Scene(spec=spec, data=source, marks=[], graph=source, layout=layout)
        scene.refresh_marks()
        return scene

    if isinstance(spec, DimpVisSpec):
        if not isinstance(source, Dataset):
            raise SpecError("time-scrub chart needs a tabular dataset")
        if source.column(spec.entity_field) is None:
            raise SpecError(f"field {spec.entity_field!r} not in dataset", field=spec.entity_field)
        if source.column(spec.time_field) is None:
            raise SpecError(f"field {spec.time_field!r} not in dataset", field=spec.time_field)
        _require_number(source, spec.x_field, allow_time=True)
        _require_number(source, spec.y_field, allow_time=True)
        if spec.size_field is not None:
            _require_number(source, spec.size_field)
        xs = [float(v) for v in source.values(spec.x_field)]
        ys = [float(v) for v in source.values(spec.y_field)]
        x_scale = LinearScale(min(xs), max(xs), 0.0, 1.0)
        y_scale = LinearScale(min(ys), max(ys), 1.0, 0.0)
        trajectories, labels = build_trajectories(
            source,
            entity_field=spec.entity_field,
            time_field=spec.time_field,
            x_scale=x_scale,
            y_scale=y_scale,
            x_field=spec.x_field,
            y_field=spec.y_field,
            size_field=spec.size_field,
        )
        dimp = DimpState(cursor=TimeCursor(t=0.0, time_labels=labels))
        scene = Scene(
            spec=spec, data=source, marks=[], trajectories=trajectories, dimp=dimp
        )
        scene.refresh_marks()
        return scene

    raise SpecError(f"unknown chart spec {spec!r}")


def spec_from_json(obj: Any, path: str = "chart") -> ChartSpec:
    from .errors import SchemaError

    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError("chart must be an object with a kind", path=path)
    kind = obj["kind"]

    def need(*names: str) -> list[str]:
        vals = []
        for name in names:
            if name not in obj or not isinstance(obj[name], str):
                raise SchemaError(f"chart kind {kind!r} needs field {name!r}", path=path)
            vals.append(obj[name])
        return vals

    if kind == "bar":
        cat, val = need("category_field", "value_field")
        return BarSpec(category_field=cat, value_field=val)
    if kind == "multiline":
        x, y, series = need("x_field", "y_field", "series_field")
        return MultiLineSpec(x_field=x, y_field=y, series_field=series)
    if kind == "network":
        return NetworkSpec(
            nodes_key=obj.get("nodes_key", "nodes"), links_key=obj.get("links_key", "links")
        )
    if kind == "dimpvis":
        entity, time_f, x, y = need("entity_field", "time_field", "x_field", "y_field")
        size = obj.get("size_field")
        if size is not None and not isinstance(size, str):
            raise SchemaError("size_field must be a string", path=path)
        return DimpVisSpec(entity_field=entity, time_field=time_f, x_field=x, y_field=y, size_field=size)
    raise SchemaError(f"unknown chart kind {kind!r}", path=path)


def spec_to_json(spec: ChartSpec) -> dict:
    if isinstance(spec, BarSpec):
        return {"kind": "bar", "category_field": spec.category_field, "value_field": spec.value_field}
    if isinstance(spec, MultiLineSpec):
        return {
            "kind": "multiline",
            "x_field": spec.x_field,
            "y_field": spec.y_field,
            "series_field": spec.series_field,
        }
    if isinstance(spec, NetworkSpec):
        return {"kind": "network", "nodes_key": spec.nodes_key, "links_key": spec.links_key}
    out = {
        "kind": "dimpvis",
        "entity_field": spec.entity_field,
        "time_field": spec.time_field,
        "x_field": spec.x_field,
        "y_field": spec.y_field,
    }
    if spec.size_field is not None:
        out["size_field"] = spec.size_field
    return out


# ---------------------------------------------------------------------------
# Hit testing


def hit_test(scene: Scene, screen_x: float, screen_y: float, hit_radius: float = HIT_RADIUS_DEFAULT) -> str | None:
    """Nearest hit mark under a screen point, or None.

    The point is inverse-transformed to world space. Rects hit by containment
    (distance 0); circles hit when the center distance is within r +
    hit_radius. The minimal-distance mark wins; ties go to the first mark in
    scene order.
    """
    wx, wy = scene.transform.invert(screen_x, screen_y)
    scene._ensure_cache()
    best_id: str | None = None
    best_d = math.inf
    for mark in scene._hit_marks:
        s = mark.shape
        if isinstance(s, Rect):
            if s.x <= wx <= s.x + s.w and s.y <= wy <= s.y + s.h:
                d = 0.0
            else:
                continue
        else:
            d = math.hypot(wx - s.cx, wy - s.cy)
            if d > s.r + hit_radius:
                continue
        if d < best_d:
            best_d = d
            best_id = mark.id
    return best_id


# ---------------------------------------------------------------------------
# Tooltips


def _tooltip_lines(scene: Scene, mark: Mark) -> tuple[str, ...]:
    data = scene.data
    if isinstance(scene.spec, NetworkSpec):
        node = next((n for n in scene.graph.nodes if n.id == mark.datum_ref), None)
        lines = [f"id: {mark.datum_ref}"]
        if node is not None and node.label:
            lines.append(f"label: {node.label}")
        return tuple(lines)
    if isinstance(scene.spec, DimpVisSpec) and isinstance(data, Dataset):
        spec = scene.spec
        label = scene.dimp.cursor.label()
        e_i = data.column_index(spec.entity_field)
        t_i = data.column_index(spec.time_field)
        for row in data.rows:
            if format_value(row[e_i]) == str(mark.datum_ref) and format_value(row[t_i]) == label:
                return tuple(
                    f"{col.name}: {format_value(v)}" for col, v in zip(data.columns, row)
                )
        return (f"{spec.entity_field}: {mark.datum_ref}",)
    if isinstance(data, Dataset) and isinstance(mark.datum_ref, int):
        row = data.rows[mark.datum_ref]
        return tuple(f"{col.name}: {format_value(v)}" for col, v in zip(data.columns, row))
    return ()


def _anchor_of(mark: Mark) -> Point2:
    s = mark.shape
    if isinstance(s, Rect):
        return Point2(s.x + s.w / 2.0, s.y)
    if isinstance(s, Circle):
        return Point2(s.cx, s.cy)
    if isinstance(s, Label):
        return Point2(s.x, s.y)
    xs = [p[0] for p in s.points]
    ys = [p[1] for p in s.points]
    return Point2(sum(xs) / len(xs), sum(ys) / len(ys))


def set_highlight(scene: Scene, mark_id: str | None) -> None:
    """Set or clear the highlighted mark and its tooltip."""
    if mark_id is None:
        scene.highlight = None
        scene.tooltip = None
        return
    mark = scene.mark_by_id(mark_id)
    if mark is None:
        scene.highlight = None
        scene.tooltip = None
        return
    scene.highlight = mark_id
    scene.tooltip = Tooltip(anchor=_anchor_of(mark), lines=_tooltip_lines(scene, mark))


# ---------------------------------------------------------------------------
# Rendering


def _transform_shape(shape: Shape, t: ViewTransform) -> Shape:
    s, tx, ty = t.s, t.tx, t.ty
    if isinstance(shape, Rect):
        return Rect(shape.x * s + tx, shape.y * s + ty, shape.w * s, shape.h * s)
    if isinstance(shape, Circle):
        return Circle(shape.cx * s + tx, shape.cy * s + ty, shape.r * s)
    if isinstance(shape, Polyline):
        return Polyline(tuple((px * s + tx, py * s + ty) for px, py in shape.points))
    return Label(shape.x * s + tx, shape.y * s + ty, shape.text)


TOOLTIP_LINE_H = 0.03
TOOLTIP_CHAR_W = 0.011


def render_scene(scene: Scene) -> list[RenderCommand]:
    """World marks through the view transform, in strict layer order:
    Background, Marks, Highlight (re-emission with emphasis), Overlay."""
    t = scene.transform
    identity = t.s == 1.0 and t.tx == 0.0 and t.ty == 0.0
    scene._ensure_cache()
    commands: list[RenderCommand] = []
    bg, mid = scene._layer_buckets
    for layer, bucket in ((Layer.BACKGROUND, bg), (Layer.MARKS, mid)):
        for mark in bucket:
            # shape objects are replaced on refresh, never mutated, so
            # aliasing them under the identity transform is safe
            shape = mark.shape if identity else _transform_shape(mark.shape, t)
            commands.append(RenderCommand(layer=layer, shape=shape, color=mark.color))
    if scene.highlight is not None:
        mark = scene.mark_by_id(scene.highlight)
        if mark is not None:
            commands.append(
                RenderCommand(
                    layer=Layer.HIGHLIGHT,
                    shape=_transform_shape(mark.shape, t),
                    color=mark.color,
                    emphasis=True,
                )
            )
    if scene.tooltip is not None:
        tip = scene.tooltip
        ax, ay = t.apply(tip.anchor.x, tip.anchor.y)
        n = max(1, len(tip.lines))
        width = TOOLTIP_CHAR_W * max((len(line) for line in tip.lines), default=4) + 0.02
        box = Rect(ax + 0.03, ay - 0.02, width, TOOLTIP_LINE_H * n + 0.02)
        commands.append(RenderCommand(layer=Layer.OVERLAY, shape=box))
        for i, line in enumerate(tip.lines):
            commands.append(
                RenderCommand(
                    layer=Layer.OVERLAY,
                    shape=Label(box.x + 0.01, box.y + TOOLTIP_LINE_H * (i + 1), line),
                )
            )
    return commands
