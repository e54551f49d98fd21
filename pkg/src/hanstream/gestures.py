"""Static gesture classification from hand landmarks.

Per-finger curl is the interior angle at the finger's middle joint, computed
with the law of cosines and bucketed into no/half/full curl. A per-hand pose
is derived from the curl profile plus thumb-index tip distance; two open palms
form a zoom candidate. A debouncer turns flickery per-frame poses into stable
Start/Update/End event streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateFinger
from .landmarks import (
    HandLandmarks,
    Handedness,
    INDEX_TIP,
    THUMB_TIP,
    Point2,
    distance,
    hand_size,
    midpoint,
    palm_centroid,
)


class Finger(str, Enum):
    THUMB = "thumb"
    INDEX = "index"
    MIDDLE = "middle"
    RING = "ring"
    PINKY = "pinky"


# Joint triples (start, mid, end) whose interior angle at mid measures curl.
FINGER_TRIPLES: dict[Finger, tuple[int, int, int]] = {
    Finger.THUMB: (1, 2, 4),
    Finger.INDEX: (5, 6, 8),
    Finger.MIDDLE: (9, 10, 12),
    Finger.RING: (13, 14, 16),
    Finger.PINKY: (17, 18, 20),
}


class CurlClass(str, Enum):
    NO_CURL = "no"       # straight finger, angle near 180
    HALF_CURL = "half"
    FULL_CURL = "full"   # tightly folded


class GestureKind(str, Enum):
    POINT = "point"
    PINCH = "pinch"
    FIST = "fist"
    OPEN_PALM = "open_palm"
    NONE = "none"
    ZOOM = "zoom"


@dataclass(frozen=True)
class GestureConfig:
    no_curl_min_deg: float = 130.0
    full_curl_max_deg: float = 60.0
    pinch_ratio: float = 0.25        # fraction of hand_size
    activation_frames: int = 3
    release_frames: int = 2

    def __post_init__(self) -> None:
        if not 0.0 < self.full_curl_max_deg < self.no_curl_min_deg <= 180.0:
            raise ValueError("curl thresholds must satisfy 0 < full < no_curl <= 180")
        if self.pinch_ratio <= 0.0:
            raise ValueError("pinch_ratio must be positive")
        if self.activation_frames < 1 or self.release_frames < 1:
            raise ValueError("frame counts must be >= 1")


def curl_angle(start: Point2, mid: Point2, end: Point2) -> float:
    """Interior angle at mid, in degrees, via the law of cosines.

    arccos((p^2 + q^2 - r^2) / (2pq)) with p=|start-mid|, q=|mid-end|,
    r=|start-end|. A straight finger measures ~180. Raises DegenerateFinger
    when any two input points coincide.
    """
    p = distance(start, mid)
    q = distance(mid, end)
    r = distance(start, end)
    if p == 0.0 or q == 0.0 or r == 0.0:
        raise DegenerateFinger("coincident joint points")
    cos = (p * p + q * q - r * r) / (2.0 * p * q)
    cos = max(-1.0, min(1.0, cos))
    return math.degrees(math.acos(cos))


def classify_curl(angle_deg: float, cfg: GestureConfig) -> CurlClass:
    if angle_deg >= cfg.no_curl_min_deg:
        return CurlClass.NO_CURL
    if angle_deg < cfg.full_curl_max_deg:
        return CurlClass.FULL_CURL
    return CurlClass.HALF_CURL


@dataclass(frozen=True)
class CurlProfile:
    angles: dict[Finger, float]
    classes: dict[Finger, CurlClass]

    def curl(self, finger: Finger) -> CurlClass:
        return self.classes[finger]


def curl_profile(hand: HandLandmarks, cfg: GestureConfig) -> CurlProfile:
    """Angles and curl classes for all five fingers; propagates DegenerateFinger."""
    angles: dict[Finger, float] = {}
    classes: dict[Finger, CurlClass] = {}
    for finger, (a, b, c) in FINGER_TRIPLES.items():
        angle = curl_angle(hand.points[a], hand.points[b], hand.points[c])
        angles[finger] = angle
        classes[finger] = classify_curl(angle, cfg)
    return CurlProfile(angles=angles, classes=classes)


@dataclass(frozen=True)
class HandPose:
    handedness: Handedness
    kind: GestureKind
    anchor: Point2 | None = None
    profile: CurlProfile | None = None


@dataclass(frozen=True)
class ZoomCandidate:
    left_palm: Point2
    right_palm: Point2


@dataclass(frozen=True)
class RawGesture:
    poses: tuple[HandPose, ...] = ()
    zoom: ZoomCandidate | None = None

    def pose(self, handedness: Handedness) -> HandPose | None:
        for p in self.poses:
            if p.handedness is handedness:
                return p
        return None


def classify_hand(hand: HandLandmarks, profile: CurlProfile, cfg: GestureConfig) -> HandPose:
    """Classify one hand, anchors per kind. Precedence: pinch > point > fist > open palm.

    The pinch test is tip proximity relative to hand size; a degenerate hand
    size disables only that rule.
    """
    c = profile.classes
    size = hand_size(hand)
    mrp = (c[Finger.MIDDLE], c[Finger.RING], c[Finger.PINKY])

    if size > 0.0:
        tips = distance(hand.points[THUMB_TIP], hand.points[INDEX_TIP])
        if tips < cfg.pinch_ratio * size and all(k is CurlClass.NO_CURL for k in mrp):
            anchor = midpoint(hand.points[THUMB_TIP], hand.points[INDEX_TIP])
            return HandPose(hand.handedness, GestureKind.PINCH, anchor, profile)

    if c[Finger.INDEX] is CurlClass.NO_CURL and all(k is not CurlClass.NO_CURL for k in mrp):
        return HandPose(hand.handedness, GestureKind.POINT, hand.points[INDEX_TIP], profile)

    folded = (c[Finger.INDEX],) + mrp
    if all(k is CurlClass.FULL_CURL for k in folded) and c[Finger.THUMB] is not CurlClass.NO_CURL:
        return HandPose(hand.handedness, GestureKind.FIST, palm_centroid(hand), profile)

    if all(k is CurlClass.NO_CURL for k in c.values()):
        return HandPose(hand.handedness, GestureKind.OPEN_PALM, palm_centroid(hand), profile)

    return HandPose(hand.handedness, GestureKind.NONE, None, profile)


def combine_hands(poses: tuple[HandPose, ...]) -> RawGesture:
    """Merge per-hand poses; both palms open forms a zoom candidate."""
    left = next((p for p in poses if p.handedness is Handedness.LEFT), None)
    right = next((p for p in poses if p.handedness is Handedness.RIGHT), None)
    zoom = None
    if (
        left is not None
        and right is not None
        and left.kind is GestureKind.OPEN_PALM
        and right.kind is GestureKind.OPEN_PALM
    ):
        zoom = ZoomCandidate(left_palm=left.anchor, right_palm=right.anchor)
    return RawGesture(poses=poses, zoom=zoom)


class Phase(str, Enum):
    START = "start"
    UPDATE = "update"
    END = "end"


@dataclass(frozen=True)
class GestureEvent:
    phase: Phase
    kind: GestureKind
    timestamp_ms: int
    hand: Handedness | None = None           # None for zoom events
    anchor: Point2 | None = None
    palms: tuple[Point2, Point2] | None = None  # zoom events only


@dataclass
class _Track:
    active: GestureKind | None = None
    streak_kind: GestureKind | None = None
    streak: int = 0
    absence: int = 0
    last_anchor: Point2 | None = None
    last_palms: tuple[Point2, Point2] | None = None


class GestureDebouncer:
    """Turns per-frame poses into well-bracketed Start/Update/End streams.

    One track per hand plus a distinct zoom track. A kind starts after
    activation_frames consecutive frames of presence and ends after
    release_frames consecutive frames of absence or kind change. While the
    zoom track is active the per-hand tracks are fed absence, so zoom
    suppresses single-hand gestures.
    """

    def __init__(self, cfg: GestureConfig | None = None):
        self.cfg = cfg or GestureConfig()
        self._zoom = _Track()
        self._hands = {Handedness.LEFT: _Track(), Handedness.RIGHT: _Track()}

    def reset(self) -> None:
        self._zoom = _Track()
        self._hands = {Handedness.LEFT: _Track(), Handedness.RIGHT: _Track()}

    def step(self, raw: RawGesture, timestamp_ms: int) -> list[GestureEvent]:
        events: list[GestureEvent] = []

        zoom_kind = GestureKind.ZOOM if raw.zoom is not None else None
        zoom_anchor = None
        palms = None
        if raw.zoom is not None:
            palms = (raw.zoom.left_palm, raw.zoom.right_palm)
            zoom_anchor = midpoint(*palms)
        events += self._advance(self._zoom, zoom_kind, zoom_anchor, palms, None, timestamp_ms)
        zoom_active = self._zoom.active is not None

        for handedness in (Handedness.LEFT, Handedness.RIGHT):
            pose = raw.pose(handedness)
            kind = None
            anchor = None
            if pose is not None and pose.kind is not GestureKind.NONE and not zoom_active:
                kind = pose.kind
                anchor = pose.anchor
            events += self._advance(
                self._hands[handedness], kind, anchor, None, handedness, timestamp_ms
            )
        return events

    def _advance(
        self,
        track: _Track,
        kind: GestureKind | None,
        anchor: Point2 | None,
        palms: tuple[Point2, Point2] | None,
        hand: Handedness | None,
        ts: int,
    ) -> list[GestureEvent]:
        cfg = self.cfg
        out: list[GestureEvent] = []
        if kind is not None:
            track.last_anchor = anchor
            track.last_palms = palms

        def emit(phase: Phase, k: GestureKind) -> None:
            out.append(
                GestureEvent(
                    phase=phase,
                    kind=k,
                    timestamp_ms=ts,
                    hand=hand,
                    anchor=track.last_anchor,
                    palms=track.last_palms,
                )
            )

        if track.active is None:
            if kind is None:
                track.streak_kind = None
                track.streak = 0
            else:
                if kind is track.streak_kind:
                    track.streak += 1
                else:
                    track.streak_kind = kind
                    track.streak = 1
                if track.streak >= cfg.activation_frames:
                    emit(Phase.START, kind)
                    track.active = kind
                    track.streak_kind = None
                    track.streak = 0
                    track.absence = 0
            return out

        if kind is track.active:
            track.absence = 0
            track.streak_kind = None
            track.streak = 0
            emit(Phase.UPDATE, kind)
            return out

        # Active kind missing this frame: count toward release, and let a
        # different kind accumulate its activation streak concurrently.
        track.absence += 1
        if kind is None:
            track.streak_kind = None
            track.streak = 0
        elif kind is track.streak_kind:
            track.streak += 1
        else:
            track.streak_kind = kind
            track.streak = 1
        if track.absence >= cfg.release_frames:
            emit(Phase.END, track.active)
            track.active = None
            track.absence = 0
            if track.streak_kind is not None and track.streak >= cfg.activation_frames:
                emit(Phase.START, track.streak_kind)
                track.active = track.streak_kind
                track.streak_kind = None
                track.streak = 0
        return out
