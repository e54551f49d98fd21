"""End to end: synthesize a landmark trace, replay it headlessly, inspect the
outbound log.

The trace points at a bar (highlight + tooltip), pans with a fist, then
navigates to the next scene. Replaying twice demonstrates the byte-identical
determinism the golden-log tests rely on.
"""

import json
from pathlib import Path

from hanstream import Handedness
from hanstream.session import SceneStateMsg, replay_trace, serialize_outbound
from hanstream.story import parse_story_path

from _hands import FIST, POINT, make_hand, raw_frame_msg

DATA = Path(__file__).parent.parent / "tests" / "data"

script = parse_story_path(DATA / "story_demo.json")

messages = []
ts = 1000
for _ in range(12):  # point at the first bar
    messages.append(raw_frame_msg(ts, make_hand(Handedness.RIGHT, POINT, at=(0.12, 0.75))))
    ts += 33
for _ in range(3):
    messages.append(raw_frame_msg(ts))
    ts += 33
for i in range(15):  # fist pan to the right
    x = 0.4 + i * 0.01
    messages.append(raw_frame_msg(ts, make_hand(Handedness.LEFT, FIST, at=(x, 0.5))))
    ts += 33
messages.append({"type": "control", "command": "next"})

lines = [json.dumps({"t": m.get("frame", {}).get("timestamp_ms", 0), "msg": m},
                    separators=(",", ":")) for m in messages]

result = replay_trace(script, lines, base_dir=DATA)
print(f"replayed {result.frames} frames -> {len(result.messages)} outbound messages")
print(f"gesture starts: {result.start_counts}")
print(f"final scene: {result.final_scene_id}")

states = [m for m in result.messages if isinstance(m, SceneStateMsg)]
highlighted = sum(1 for s in states for c in s.commands if c.layer.wire == "highlight")
panned = next(s.transform for s in reversed(states) if s.scene_id == "sales-bar")
print(f"{highlighted} frames carried a highlight; bar scene left at transform "
      f"s={panned.s} tx={panned.tx:.3f} ty={panned.ty:.3f}")

again = replay_trace(script, lines, base_dir=DATA)
same = all(serialize_outbound(a) == serialize_outbound(b)
           for a, b in zip(result.messages, again.messages))
print(f"second replay byte-identical: {same}")
