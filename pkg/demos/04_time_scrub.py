"""Time scrubbing: drag one bubble along its trajectory, all entities follow.

Builds trajectories from a long-format dataset, projects a sequence of drag
points onto the grabbed entity's path, and interpolates every entity to the
resulting fractional time.
"""

from pathlib import Path

from hanstream import load_dataset_path, positions_at, project_drag
from hanstream.scene import DimpVisSpec, build_scene
from hanstream.timenav import polyline_point

DATA = Path(__file__).parent.parent / "tests" / "data"

spec = DimpVisSpec(
    entity_field="country", time_field="year",
    x_field="fertility", y_field="life_expectancy", size_field="population",
)
dataset = load_dataset_path(DATA / "gapminder_mini.csv", time_field="year")
scene = build_scene(spec, dataset)
labels = scene.dimp.cursor.time_labels
print(f"{len(scene.trajectories)} entities x {len(labels)} time steps {labels}")

grabbed = next(t for t in scene.trajectories if t.entity == "Indonesia")
t = 0.0
print("\ndragging Indonesia along its trajectory:")
for i in range(9):
    u = (i + 1) / 9 * 2.0  # sweep two time steps
    drag = polyline_point(grabbed, u)
    t = project_drag(grabbed, drag[0], drag[1], current_t=t, w=1)
    scene.dimp.cursor.t = t
    year = scene.dimp.cursor.label()
    placed = positions_at(scene.trajectories, t)
    china_x, china_y, _ = placed["China"]
    print(f"  drag at ({drag[0]:.3f}, {drag[1]:.3f}) -> t={t:.3f} year={year}"
          f"   China follows to ({china_x:.3f}, {china_y:.3f})")
