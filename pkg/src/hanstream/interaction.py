"""Gesture event arbitration and scene mutation.

One mode at a time: pointing highlights, pinch drags a network node or scrubs
time, fist pans, two-palm zoom scales about a frozen focal point. Zoom
preempts any single-hand mode; otherwise first Start wins and other-hand
Starts are ignored until End.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .gestures import GestureEvent, GestureKind, Phase
from .graph_layout import drag_node, release_node
from .landmarks import Handedness, Point2, distance
from .scene import (
    DimpVisSpec,
    HIT_RADIUS_DEFAULT,
    NetworkSpec,
    S_MAX_DEFAULT,
    S_MIN_DEFAULT,
    Scene,
    ViewTransform,
    hit_test,
    set_highlight,
)
from .timenav import project_drag

_MIN_ZOOM_SPAN = 1e-4


class Mode(str, Enum):
    IDLE = "idle"
    POINTING = "pointing"
    DRAGGING_NODE = "dragging_node"
    SCRUBBING_TIME = "scrubbing_time"
    PANNING = "panning"
    ZOOMING = "zooming"


@dataclass(frozen=True)
class InteractionConfig:
    enabled: frozenset[GestureKind] = frozenset(
        {GestureKind.POINT, GestureKind.PINCH, GestureKind.FIST, GestureKind.ZOOM}
    )
    s_min: float = S_MIN_DEFAULT
    s_max: float = S_MAX_DEFAULT
    hit_radius: float = HIT_RADIUS_DEFAULT

    def __post_init__(self) -> None:
        if not 0.0 < self.s_min < self.s_max:
            raise ValueError("need 0 < s_min < s_max")


@dataclass
class InteractionState:
    mode: Mode = Mode.IDLE
    active_kind: GestureKind | None = None
    active_hand: Handedness | None = None
    # panning anchors
    pan_anchor: Point2 | None = None
    start_translate: tuple[float, float] | None = None
    # zooming anchors
    zoom_d0: float | None = None
    zoom_s0: float | None = None
    zoom_focal: Point2 | None = None
    zoom_t0: tuple[float, float] | None = None
    # chart-specific handles
    drag_node_id: str | None = None
    # streams that Started but did not win a mode; their updates are expected
    open_streams: set[tuple[GestureKind, Handedness | None]] = field(default_factory=set)
    inconsistent_events: int = 0

    def reset(self) -> None:
        self.mode = Mode.IDLE
        self.active_kind = None
        self.active_hand = None
        self.pan_anchor = None
        self.start_translate = None
        self.zoom_d0 = None
        self.zoom_s0 = None
        self.zoom_focal = None
        self.zoom_t0 = None
        self.drag_node_id = None
        self.open_streams.clear()


def zoom_about(transform: ViewTransform, focal: Point2, s_new: float) -> ViewTransform:
    """New transform with scale s_new keeping the world point currently under
    the focal screen point stationary."""
    tx = focal.x - s_new * (focal.x - transform.tx) / transform.s
    ty = focal.y - s_new * (focal.y - transform.ty) / transform.s
    return ViewTransform(s=s_new, tx=tx, ty=ty)


def pan_update(
    transform: ViewTransform,
    anchor: Point2,
    current: Point2,
    start_translate: tuple[float, float],
) -> ViewTransform:
    """Translation = start_translate + (current - anchor); scale unchanged."""
    return ViewTransform(
        s=transform.s,
        tx=start_translate[0] + (current.x - anchor.x),
        ty=start_translate[1] + (current.y - anchor.y),
    )


def end_active_mode(scene: Scene, istate: InteractionState) -> None:
    """Run the End semantics of whatever mode is active, returning to Idle."""
    if istate.mode is Mode.POINTING:
        set_highlight(scene, None)
    elif istate.mode is Mode.DRAGGING_NODE:
        if istate.drag_node_id is not None:
            release_node(scene.layout, istate.drag_node_id)
    elif istate.mode is Mode.SCRUBBING_TIME:
        scene.dimp.grabbed = None
        scene.refresh_marks()  # drop the trajectory hint, keep the reached t
    istate.mode = Mode.IDLE
    istate.active_kind = None
    istate.active_hand = None
    istate.pan_anchor = None
    istate.start_translate = None
    istate.zoom_d0 = None
    istate.zoom_s0 = None
    istate.zoom_focal = None
    istate.zoom_t0 = None
    istate.drag_node_id = None


def _start_single(scene: Scene, istate: InteractionState, ev: GestureEvent, cfg: InteractionConfig) -> None:
    if ev.kind is GestureKind.POINT:
        istate.mode = Mode.POINTING
        istate.active_kind = ev.kind
        istate.active_hand = ev.hand
        set_highlight(scene, hit_test(scene, ev.anchor.x, ev.anchor.y, cfg.hit_radius))
        return

    if ev.kind is GestureKind.PINCH:
        mark_id = hit_test(scene, ev.anchor.x, ev.anchor.y, cfg.hit_radius)
        mark = scene.mark_by_id(mark_id) if mark_id else None
        if mark is not None and isinstance(scene.spec, NetworkSpec) and mark.id.startswith("node:"):
            istate.mode = Mode.DRAGGING_NODE
            istate.active_kind = ev.kind
            istate.active_hand = ev.hand
            istate.drag_node_id = str(mark.datum_ref)
            wx, wy = scene.transform.invert(ev.anchor.x, ev.anchor.y)
            drag_node(scene.layout, istate.drag_node_id, wx, wy)
            scene.refresh_marks()
        elif mark is not None and isinstance(scene.spec, DimpVisSpec) and mark.id.startswith("bubble:"):
            istate.mode = Mode.SCRUBBING_TIME
            istate.active_kind = ev.kind
            istate.active_hand = ev.hand
            scene.dimp.grabbed = str(mark.datum_ref)
            scene.refresh_marks()
        else:
            # pinch is only meaningful on network nodes and time-scrub bubbles
            istate.open_streams.add((ev.kind, ev.hand))
        return

    if ev.kind is GestureKind.FIST:
        istate.mode = Mode.PANNING
        istate.active_kind = ev.kind
        istate.active_hand = ev.hand
        istate.pan_anchor = ev.anchor
        istate.start_translate = (scene.transform.tx, scene.transform.ty)
        return

    # open palm and any other single-hand kind: no interaction
    istate.open_streams.add((ev.kind, ev.hand))


def _update_active(scene: Scene, istate: InteractionState, ev: GestureEvent, cfg: InteractionConfig) -> None:
    if istate.mode is Mode.POINTING:
        set_highlight(scene, hit_test(scene, ev.anchor.x, ev.anchor.y, cfg.hit_radius))
    elif istate.mode is Mode.DRAGGING_NODE:
        wx, wy = scene.transform.invert(ev.anchor.x, ev.anchor.y)
        drag_node(scene.layout, istate.drag_node_id, wx, wy)
        scene.refresh_marks()
    elif istate.mode is Mode.SCRUBBING_TIME:
        traj = next((tr for tr in scene.trajectories if tr.entity == scene.dimp.grabbed), None)
        if traj is not None:
            wx, wy = scene.transform.invert(ev.anchor.x, ev.anchor.y)
            t = project_drag(traj, wx, wy, scene.dimp.cursor.t, scene.dimp.search_window)
            scene.set_time(t)
    elif istate.mode is Mode.PANNING:
        scene.transform = pan_update(scene.transform, istate.pan_anchor, ev.anchor, istate.start_translate)
    elif istate.mode is Mode.ZOOMING:
        d = distance(ev.palms[0], ev.palms[1])
        s_new = istate.zoom_s0 * d / istate.zoom_d0
        s_new = max(cfg.s_min, min(cfg.s_max, s_new))
        tx = istate.zoom_focal.x - s_new * (istate.zoom_focal.x - istate.zoom_t0[0]) / istate.zoom_s0
        ty = istate.zoom_focal.y - s_new * (istate.zoom_focal.y - istate.zoom_t0[1]) / istate.zoom_s0
        scene.transform = ViewTransform(s=s_new, tx=tx, ty=ty)


def apply_gesture_event(
    scene: Scene, istate: InteractionState, ev: GestureEvent, cfg: InteractionConfig
) -> None:
    """Mutate scene and interaction state for one debounced gesture event.

    Callers drop disabled kinds before this; event streams per kind arrive
    well-bracketed. Updates with no visible Start bump the inconsistent
    counter and are otherwise ignored.
    """
    if ev.phase is Phase.START:
        if ev.kind is GestureKind.ZOOM:
            d0 = distance(ev.palms[0], ev.palms[1])
            if d0 < _MIN_ZOOM_SPAN:
                istate.open_streams.add((ev.kind, ev.hand))
                return
            end_active_mode(scene, istate)  # zoom preempts single-hand modes
            istate.mode = Mode.ZOOMING
            istate.active_kind = ev.kind
            istate.active_hand = None
            istate.zoom_d0 = d0
            istate.zoom_s0 = scene.transform.s
            istate.zoom_focal = Point2(
                (ev.palms[0].x + ev.palms[1].x) / 2.0, (ev.palms[0].y + ev.palms[1].y) / 2.0
            )
            istate.zoom_t0 = (scene.transform.tx, scene.transform.ty)
            return
        if istate.mode is not Mode.IDLE:
            istate.open_streams.add((ev.kind, ev.hand))  # first Start won; ignore
            return
        _start_single(scene, istate, ev, cfg)
        return

    is_active = ev.kind is istate.active_kind and (
        ev.kind is GestureKind.ZOOM or ev.hand is istate.active_hand
    )

    if ev.phase is Phase.UPDATE:
        if is_active:
            _update_active(scene, istate, ev, cfg)
        elif (ev.kind, ev.hand) not in istate.open_streams:
            istate.inconsistent_events += 1
        return

    # Phase.END
    if is_active:
        end_active_mode(scene, istate)
    else:
        istate.open_streams.discard((ev.kind, ev.hand))
