"""Watch the debouncer turn flickery per-frame classifications into stable
Start/Update/End gesture events.

The input alternates pointing with dropout noise; only runs of three
consecutive frames activate, and two absent frames release.
"""

from hanstream import GestureConfig, GestureDebouncer, GestureKind, Handedness, Point2
from hanstream.gestures import HandPose, combine_hands

kinds = [
    "point", "point", "point", "point", None, "point", "point",
    None, None, "fist", "fist", "fist", "fist", None, None, None,
]

debouncer = GestureDebouncer(GestureConfig(activation_frames=3, release_frames=2))
anchor = Point2(0.5, 0.5)

print("frame  input   events")
for i, kind in enumerate(kinds):
    poses = ()
    if kind is not None:
        poses = (HandPose(Handedness.RIGHT, GestureKind(kind), anchor),)
    events = debouncer.step(combine_hands(poses), timestamp_ms=i * 33)
    shown = ", ".join(f"{e.phase.value}({e.kind.value})" for e in events) or "-"
    print(f"{i:5d}  {kind or '-':6s}  {shown}")
