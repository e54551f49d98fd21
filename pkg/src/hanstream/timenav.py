"""Time scrubbing over per-entity trajectories.

Each entity in a long-format dataset has one world position per time step.
Dragging a grabbed entity projects the drag point onto its trajectory within
a window around the current time; the resulting fractional time applies to
all entities (global scrubbing).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset
from .errors import DegenerateTime, IncompleteSeries, SpecError
from .scales import LinearScale

SIZE_RANGE = (0.01, 0.06)
DEFAULT_SIZE = 0.02


@dataclass(frozen=True)
class Trajectory:
    entity: str
    positions: np.ndarray  # (T, 2) world coords
    sizes: np.ndarray      # (T,) radii

    @property
    def steps(self) -> int:
        return self.positions.shape[0]


@dataclass
class TimeCursor:
    t: float
    time_labels: tuple[str, ...]

    @property
    def max_t(self) -> float:
        return float(len(self.time_labels) - 1)

    def label(self) -> str:
        """Display label of the nearest integer index (half rounds up)."""
        idx = int(math.floor(self.t + 0.5))
        idx = max(0, min(len(self.time_labels) - 1, idx))
        return self.time_labels[idx]


@dataclass
class DimpState:
    cursor: TimeCursor
    grabbed: str | None = None
    search_window: int = 1


def _format_time(value: float | str) -> str:
    if isinstance(value, str):
        return value
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def build_trajectories(
    data: Dataset,
    entity_field: str,
    time_field: str,
    x_scale: LinearScale,
    y_scale: LinearScale,
    x_field: str,
    y_field: str,
    size_field: str | None = None,
) -> tuple[list[Trajectory], tuple[str, ...]]:
    """Index time values ascending, one position per (entity, time).

    Every entity must be observed at every time value; positions run through
    the given scales and sizes map linearly into SIZE_RANGE.
    """
    for name in filter(None, (entity_field, time_field, x_field, y_field, size_field)):
        if data.column(name) is None:
            raise SpecError(f"field {name!r} not in dataset", field=name)

    e_i = data.column_index(entity_field)
    t_i = data.column_index(time_field)
    x_i = data.column_index(x_field)
    y_i = data.column_index(y_field)
    s_i = data.column_index(size_field) if size_field else None

    time_values = sorted(set(row[t_i] for row in data.rows))
    if len(time_values) < 2:
        raise DegenerateTime(f"need at least 2 time steps, got {len(time_values)}")
    t_index = {v: k for k, v in enumerate(time_values)}
    labels = tuple(_format_time(v) for v in time_values)

    entities: list[str] = []
    cells: dict[tuple[str, int], tuple[float, float, float | None]] = {}
    for row in data.rows:
        entity = str(row[e_i])
        if entity not in cells and entity not in entities:
            entities.append(entity)
        key = (entity, t_index[row[t_i]])
        if key in cells:
            raise SpecError(
                f"duplicate observation for entity {entity!r} at time {row[t_i]!r}",
                field=entity_field,
            )
        size_v = float(row[s_i]) if s_i is not None else None
        cells[key] = (float(row[x_i]), float(row[y_i]), size_v)

    size_scale = None
    if s_i is not None:
        all_sizes = [float(row[s_i]) for row in data.rows]
        lo, hi = min(all_sizes), max(all_sizes)
        if lo != hi:
            size_scale = LinearScale(lo, hi, SIZE_RANGE[0], SIZE_RANGE[1])

    T = len(time_values)
    trajectories = []
    for entity in entities:
        pos = np.empty((T, 2), dtype=np.float64)
        sizes = np.empty(T, dtype=np.float64)
        for k in range(T):
            cell = cells.get((entity, k))
            if cell is None:
                raise IncompleteSeries(entity, time_values[k])
            x, y, size_v = cell
            pos[k, 0] = x_scale(x)
            pos[k, 1] = y_scale(y)
            if size_v is None:
                sizes[k] = DEFAULT_SIZE
            elif size_scale is None:
                sizes[k] = (SIZE_RANGE[0] + SIZE_RANGE[1]) / 2.0  # constant size column
            else:
                sizes[k] = size_scale(size_v)
        trajectories.append(Trajectory(entity=entity, positions=pos, sizes=sizes))
    return trajectories, labels


def polyline_point(traj: Trajectory, t: float) -> tuple[float, float]:
    """Position along the trajectory at fractional time t."""
    T = traj.steps
    k = int(math.floor(t))
    if k >= T - 1:
        p = traj.positions[T - 1]
        return (float(p[0]), float(p[1]))
    u = t - k
    if u == 0.0:
        p = traj.positions[k]
        return (float(p[0]), float(p[1]))
    a = traj.positions[k]
    b = traj.positions[k + 1]
    return (float((1.0 - u) * a[0] + u * b[0]), float((1.0 - u) * a[1] + u * b[1]))


def project_drag(traj: Trajectory, drag_x: float, drag_y: float, current_t: float, w: int = 1) -> float:
    """Project a drag point onto the trajectory near the current time.

    Searches segments k -> k+1 with k in [floor(current_t)-w,
    ceil(current_t)+w-1] clamped to [0, T-2]; returns k* + u* for the
    closest clamped point-to-segment projection. Distance ties resolve
    toward the segment whose time interval is nearer current_t, then the
    lower k. The result is clamped to [0, T-1].
    """
    T = traj.steps
    lo = max(0, int(math.floor(current_t)) - w)
    hi = min(T - 2, int(math.ceil(current_t)) + w - 1)
    best_d2 = math.inf
    best_t = current_t
    best_gap = math.inf
    for k in range(lo, hi + 1):
        ax, ay = traj.positions[k]
        bx, by = traj.positions[k + 1]
        vx, vy = bx - ax, by - ay
        seg_len2 = vx * vx + vy * vy
        if seg_len2 == 0.0:
            u = 0.0
        else:
            u = ((drag_x - ax) * vx + (drag_y - ay) * vy) / seg_len2
            u = max(0.0, min(1.0, u))
        px, py = ax + u * vx, ay + u * vy
        d2 = (drag_x - px) ** 2 + (drag_y - py) ** 2
        gap = max(0.0, k - current_t, current_t - (k + 1))  # time distance to [k, k+1]
        if d2 < best_d2 or (d2 == best_d2 and gap < best_gap):
            best_d2 = d2
            best_t = k + u
            best_gap = gap
    return max(0.0, min(float(T - 1), best_t))


def positions_at(trajectories: list[Trajectory], t: float) -> dict[str, tuple[float, float, float]]:
    """Interpolated (x, y, size) per entity; exact stored values at integer t."""
    out: dict[str, tuple[float, float, float]] = {}
    for traj in trajectories:
        T = traj.steps
        k = int(math.floor(t))
        if k >= T - 1:
            x, y = traj.positions[T - 1]
            size = traj.sizes[T - 1]
        else:
            u = t - k
            if u == 0.0:
                x, y = traj.positions[k]
                size = traj.sizes[k]
            else:
                a, b = traj.positions[k], traj.positions[k + 1]
                x = (1.0 - u) * a[0] + u * b[0]
                y = (1.0 - u) * a[1] + u * b[1]
                size = (1.0 - u) * traj.sizes[k] + u * traj.sizes[k + 1]
        out[traj.entity] = (float(x), float(y), float(size))
    return out
