"""Gesture-driven data presentation engine.

Turns webcam hand-landmark streams into chart interactions (point, pinch
drag, pan, zoom) and emits declarative, layer-ordered render commands for a
thin browser client that composites the presenter inside the visualization.
"""

from .data import Dataset, load_dataset, load_dataset_path
from .gestures import (
    CurlClass,
    GestureConfig,
    GestureDebouncer,
    GestureEvent,
    GestureKind,
    Phase,
    classify_hand,
    combine_hands,
    curl_angle,
    curl_profile,
)
from .graph_layout import (
    GraphData,
    LayoutParams,
    LayoutState,
    drag_node,
    init_layout,
    layout_step,
    parse_graph,
    release_node,
    run_until_stable,
)
from .interaction import (
    InteractionConfig,
    InteractionState,
    Mode,
    apply_gesture_event,
    pan_update,
    zoom_about,
)
from .landmarks import (
    HandFrame,
    HandLandmarks,
    Handedness,
    LandmarkSmoother,
    Point2,
    hand_size,
    mirror_frame,
    parse_frame,
    validate_frame,
)
from .scales import Band, LinearScale, band_scale
from .scene import (
    BarSpec,
    DimpVisSpec,
    Layer,
    Mark,
    MultiLineSpec,
    NetworkSpec,
    RenderCommand,
    Scene,
    ViewTransform,
    build_scene,
    hit_test,
    render_scene,
    set_highlight,
)
from .session import Session, replay_trace, serialize_outbound
from .story import Command, StoryScript, StoryState, navigate, parse_story, parse_story_path, serialize_story
from .timenav import Trajectory, build_trajectories, positions_at, project_drag

__version__ = "0.1.0"
