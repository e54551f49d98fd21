"""Compact synthetic-hand helpers for the demo scripts."""

from __future__ import annotations

import math

from hanstream import HandLandmarks, Handedness, Point2, mirror_frame
from hanstream.landmarks import HandFrame, frame_to_json, palm_centroid


def _rot(v, deg):
    r = math.radians(deg)
    c, s = math.cos(r), math.sin(r)
    return (c * v[0] - s * v[1], s * v[0] + c * v[1])


def make_hand(handedness: Handedness, curls: dict[str, float], at=(0.5, 0.5),
              scale=1.0, pinch_tips=False) -> HandLandmarks:
    """21-landmark hand whose per-finger interior angles equal `curls`."""
    H = 0.12 * scale
    up = (0.0, -1.0)
    pts = {0: (0.0, 0.0)}
    seg = _rot(up, 45.0)
    cmc = (_rot(up, 55.0)[0] * 0.35 * H, _rot(up, 55.0)[1] * 0.35 * H)
    mcp = (cmc[0] + seg[0] * 0.3 * H, cmc[1] + seg[1] * 0.3 * H)
    back = (-seg[0], -seg[1])
    tipd = _rot(back, -curls["thumb"])
    tip = (mcp[0] + tipd[0] * 0.35 * H, mcp[1] + tipd[1] * 0.35 * H)
    pts[1], pts[2], pts[4] = cmc, mcp, tip
    pts[3] = ((mcp[0] + tip[0]) / 2, (mcp[1] + tip[1]) / 2)
    for name, base_idx, spread in (("index", 5, 20.0), ("middle", 9, 0.0),
                                   ("ring", 13, -18.0), ("pinky", 17, -35.0)):
        d = _rot(up, spread)
        base = (d[0] * 0.95 * H, d[1] * 0.95 * H)
        pip = (base[0] + d[0] * 0.45 * H, base[1] + d[1] * 0.45 * H)
        w = _rot((-d[0], -d[1]), curls[name])
        tip = (pip[0] + w[0] * 0.4 * H, pip[1] + w[1] * 0.4 * H)
        pts[base_idx] = base
        pts[base_idx + 1] = pip
        pts[base_idx + 2] = ((pip[0] + tip[0]) / 2, (pip[1] + tip[1]) / 2)
        pts[base_idx + 3] = tip
    if pinch_tips:
        ix, iy = pts[8]
        pts[4] = (ix + 0.01 * H, iy + 0.01 * H)
        pts[3] = ((pts[2][0] + pts[4][0]) / 2, (pts[2][1] + pts[4][1]) / 2)
    hand = HandLandmarks(handedness, tuple(Point2(*pts[i]) for i in range(21)))
    ref = palm_centroid(hand)
    dx, dy = at[0] - ref.x, at[1] - ref.y
    return HandLandmarks(handedness, tuple(Point2(p.x + dx, p.y + dy) for p in hand.points))


OPEN = {f: 172.0 for f in ("thumb", "index", "middle", "ring", "pinky")}
POINT = {"thumb": 100.0, "index": 172.0, "middle": 45.0, "ring": 45.0, "pinky": 45.0}
FIST = {"thumb": 55.0, "index": 40.0, "middle": 40.0, "ring": 40.0, "pinky": 40.0}
PINCH = {"thumb": 150.0, "index": 165.0, "middle": 168.0, "ring": 168.0, "pinky": 168.0}


def raw_frame_msg(timestamp_ms: int, *hands: HandLandmarks) -> dict:
    """Frame message in raw (camera) coordinates for on-screen hand geometry."""
    raw = mirror_frame(HandFrame(timestamp_ms, tuple(hands)))
    return {"type": "frame", "frame": frame_to_json(raw)}
