"""Hand landmark data model: validation, selfie mirroring, smoothing, scale reference.

Coordinates are normalized [0,1]^2 with a top-left origin. The engine mirrors
every incoming frame exactly once so that presenter motion matches on-screen
motion; clients send raw model output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any

from .errors import FrameError


class Handedness(str, Enum):
    LEFT = "Left"
    RIGHT = "Right"

    @property
    def other(self) -> "Handedness":
        return Handedness.RIGHT if self is Handedness.LEFT else Handedness.LEFT


# 21-point hand topology indices.
WRIST = 0
THUMB_CMC, THUMB_MCP, THUMB_IP, THUMB_TIP = 1, 2, 3, 4
INDEX_MCP, INDEX_PIP, INDEX_DIP, INDEX_TIP = 5, 6, 7, 8
MIDDLE_MCP, MIDDLE_PIP, MIDDLE_DIP, MIDDLE_TIP = 9, 10, 11, 12
RING_MCP, RING_PIP, RING_DIP, RING_TIP = 13, 14, 15, 16
PINKY_MCP, PINKY_PIP, PINKY_DIP, PINKY_TIP = 17, 18, 19, 20

LANDMARK_COUNT = 21
PALM_LANDMARKS = (WRIST, INDEX_MCP, MIDDLE_MCP, RING_MCP, PINKY_MCP)


@dataclass(frozen=True)
class Point2:
    x: float
    y: float
    z: float | None = None


def distance(a: Point2, b: Point2) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def midpoint(a: Point2, b: Point2) -> Point2:
    return Point2((a.x + b.x) / 2.0, (a.y + b.y) / 2.0)


@dataclass(frozen=True)
class HandLandmarks:
    handedness: Handedness
    points: tuple[Point2, ...]  # exactly 21
    confidence: float = 1.0

    def __getitem__(self, index: int) -> Point2:
        return self.points[index]


@dataclass(frozen=True)
class HandFrame:
    timestamp_ms: int
    hands: tuple[HandLandmarks, ...] = ()

    def hand(self, handedness: Handedness) -> HandLandmarks | None:
        for h in self.hands:
            if h.handedness is handedness:
                return h
        return None


def _clamp01(v: float) -> float:
    return 0.0 if v < 0.0 else 1.0 if v > 1.0 else v


def validate_frame(frame: HandFrame) -> HandFrame:
    """Check structural invariants and clamp x/y into [0,1].

    Raises FrameError on: more than two hands, duplicate handedness,
    wrong landmark count, non-finite coordinates, confidence out of range.
    """
    if len(frame.hands) > 2:
        raise FrameError(f"frame has {len(frame.hands)} hands, at most 2 allowed")
    seen: set[Handedness] = set()
    hands = []
    for hand in frame.hands:
        if hand.handedness in seen:
            raise FrameError(f"two hands with handedness {hand.handedness.value}")
        seen.add(hand.handedness)
        if len(hand.points) != LANDMARK_COUNT:
            raise FrameError(
                f"{hand.handedness.value} hand has {len(hand.points)} landmarks, expected {LANDMARK_COUNT}"
            )
        if not 0.0 <= hand.confidence <= 1.0:
            raise FrameError(f"confidence {hand.confidence} outside [0,1]")
        pts = []
        for i, p in enumerate(hand.points):
            if not (math.isfinite(p.x) and math.isfinite(p.y)):
                raise FrameError(f"landmark {i} has non-finite coordinates")
            if p.z is not None and not math.isfinite(p.z):
                raise FrameError(f"landmark {i} has non-finite depth")
            pts.append(Point2(_clamp01(p.x), _clamp01(p.y), p.z))
        hands.append(replace(hand, points=tuple(pts)))
    return HandFrame(timestamp_ms=frame.timestamp_ms, hands=tuple(hands))


def parse_frame(obj: Any) -> HandFrame:
    """Parse and validate the landmark JSON shape in one pass.

    Shape: {"timestamp_ms": int, "hands": [{"handedness": "Left"|"Right",
    "confidence": float, "landmarks": [{"x","y","z"?} x 21]}]}. Structural
    violations raise FrameError; x/y are clamped into [0,1].
    """
    if not isinstance(obj, dict):
        raise FrameError("frame must be a JSON object")
    ts = obj.get("timestamp_ms")
    if not isinstance(ts, int) or isinstance(ts, bool):
        raise FrameError("timestamp_ms must be an integer")
    hands_obj = obj.get("hands", [])
    if not isinstance(hands_obj, list):
        raise FrameError("hands must be an array")
    if len(hands_obj) > 2:
        raise FrameError(f"frame has {len(hands_obj)} hands, at most 2 allowed")
    isfinite = math.isfinite
    hands = []
    seen: set[Handedness] = set()
    for h in hands_obj:
        if not isinstance(h, dict):
            raise FrameError("hand entry must be an object")
        label = h.get("handedness")
        try:
            handedness = Handedness(label)
        except ValueError:
            raise FrameError(f"bad handedness {label!r}") from None
        if handedness in seen:
            raise FrameError(f"two hands with handedness {handedness.value}")
        seen.add(handedness)
        lms = h.get("landmarks")
        if not isinstance(lms, list):
            raise FrameError("landmarks must be an array")
        if len(lms) != LANDMARK_COUNT:
            raise FrameError(
                f"{handedness.value} hand has {len(lms)} landmarks, expected {LANDMARK_COUNT}"
            )
        points = []
        for lm in lms:
            if not isinstance(lm, dict) or "x" not in lm or "y" not in lm:
                raise FrameError("landmark must be an object with x and y")
            try:
                x = float(lm["x"])
                y = float(lm["y"])
                z = float(lm["z"]) if lm.get("z") is not None else None
            except (TypeError, ValueError):
                raise FrameError("landmark coordinates must be numbers") from None
            if not (isfinite(x) and isfinite(y)):
                raise FrameError("landmark has non-finite coordinates")
            if z is not None and not isfinite(z):
                raise FrameError("landmark has non-finite depth")
            x = 0.0 if x < 0.0 else 1.0 if x > 1.0 else x
            y = 0.0 if y < 0.0 else 1.0 if y > 1.0 else y
            points.append(Point2(x, y, z))
        conf = h.get("confidence", 1.0)
        if not isinstance(conf, (int, float)) or isinstance(conf, bool):
            raise FrameError("confidence must be a number")
        if not 0.0 <= conf <= 1.0:
            raise FrameError(f"confidence {conf} outside [0,1]")
        hands.append(HandLandmarks(handedness, tuple(points), float(conf)))
    return HandFrame(timestamp_ms=ts, hands=tuple(hands))


def frame_to_json(frame: HandFrame) -> dict:
    """Serialize back to the landmark JSON shape."""
    return {
        "timestamp_ms": frame.timestamp_ms,
        "hands": [
            {
                "handedness": h.handedness.value,
                "confidence": h.confidence,
                "landmarks": [
                    {"x": p.x, "y": p.y} if p.z is None else {"x": p.x, "y": p.y, "z": p.z}
                    for p in h.points
                ],
            }
            for h in frame.hands
        ],
    }


def mirror_point(p: Point2) -> Point2:
    return Point2(1.0 - p.x, p.y, p.z)


def mirror_hand(hand: HandLandmarks) -> HandLandmarks:
    return HandLandmarks(
        handedness=hand.handedness.other,
        points=tuple(mirror_point(p) for p in hand.points),
        confidence=hand.confidence,
    )


def mirror_frame(frame: HandFrame) -> HandFrame:
    """Selfie-view reflection: x -> 1-x, Left <-> Right, timestamps unchanged."""
    return HandFrame(
        timestamp_ms=frame.timestamp_ms,
        hands=tuple(mirror_hand(h) for h in frame.hands),
    )


def hand_size(hand: HandLandmarks) -> float:
    """Scale reference: wrist to middle-finger MCP distance.

    Zero means the hand is degenerate; callers treat that as "invalid for pinch".
    """
    return distance(hand.points[WRIST], hand.points[MIDDLE_MCP])


def palm_centroid(hand: HandLandmarks) -> Point2:
    xs = [hand.points[i].x for i in PALM_LANDMARKS]
    ys = [hand.points[i].y for i in PALM_LANDMARKS]
    return Point2(sum(xs) / len(xs), sum(ys) / len(ys))


class LandmarkSmoother:
    """Per-landmark exponential smoothing keyed by (handedness, landmark index).

    Newly appearing hands pass through unsmoothed and seed the history; a hand
    absent for reset_after_ms or longer loses its history and re-seeds.
    """

    def __init__(self, alpha: float = 0.5, reset_after_ms: int = 500):
        if not 0.0 < alpha <= 1.0:
            raise ValueError("alpha must be in (0, 1]")
        self.alpha = alpha
        self.reset_after_ms = reset_after_ms
        self._last: dict[tuple[Handedness, int], Point2] = {}
        self._last_seen: dict[Handedness, int] = {}

    def reset(self) -> None:
        self._last.clear()
        self._last_seen.clear()

    def _blend(self, last: float, new: float) -> float:
        out = self.alpha * new + (1.0 - self.alpha) * last
        # Clamp into the hull so the convex-combination invariant holds exactly
        # despite float rounding.
        lo, hi = (last, new) if last <= new else (new, last)
        return lo if out < lo else hi if out > hi else out

    def apply(self, frame: HandFrame) -> HandFrame:
        ts = frame.timestamp_ms
        present: set[Handedness] = set()
        hands = []
        for hand in frame.hands:
            key_hand = hand.handedness
            present.add(key_hand)
            seen = self._last_seen.get(key_hand)
            fresh = seen is None or ts - seen >= self.reset_after_ms
            pts = []
            for i, p in enumerate(hand.points):
                if fresh:
                    out = p
                else:
                    last = self._last[(key_hand, i)]
                    out = Point2(self._blend(last.x, p.x), self._blend(last.y, p.y), p.z)
                self._last[(key_hand, i)] = out
                pts.append(out)
            self._last_seen[key_hand] = ts
            hands.append(replace(hand, points=tuple(pts)))
        # Drop history for hands that have been gone long enough.
        for handedness in (Handedness.LEFT, Handedness.RIGHT):
            if handedness in present:
                continue
            seen = self._last_seen.get(handedness)
            if seen is not None and ts - seen >= self.reset_after_ms:
                self._last_seen.pop(handedness, None)
                for i in range(LANDMARK_COUNT):
                    self._last.pop((handedness, i), None)
        return HandFrame(timestamp_ms=ts, hands=tuple(hands))
