import random
from collections import defaultdict

import pytest

from hanstream.gestures import (
    GestureConfig,
    GestureDebouncer,
    GestureKind,
    HandPose,
    Phase,
    RawGesture,
    ZoomCandidate,
    combine_hands,
)
from hanstream.landmarks import Handedness, Point2

P = Point2(0.5, 0.5)


def raw(left: GestureKind | None = None, right: GestureKind | None = None) -> RawGesture:
    poses = []
    if left is not None:
        poses.append(HandPose(Handedness.LEFT, left, P if left is not GestureKind.NONE else None))
    if right is not None:
        poses.append(HandPose(Handedness.RIGHT, right, P if right is not GestureKind.NONE else None))
    return combine_hands(tuple(poses))


def feed(debouncer: GestureDebouncer, kinds: list[GestureKind | None], hand=Handedness.LEFT):
    events = []
    for i, kind in enumerate(kinds):
        frame = raw(left=kind) if hand is Handedness.LEFT else raw(right=kind)
        events += debouncer.step(frame, timestamp_ms=i * 33)
    return events


class TestActivation:
    def test_start_after_activation_frames(self):
        d = GestureDebouncer(GestureConfig(activation_frames=3))
        events = feed(d, [GestureKind.POINT] * 3)
        assert [(e.phase, e.kind) for e in events] == [(Phase.START, GestureKind.POINT)]
        assert events[0].timestamp_ms == 66  # third frame

    def test_streak_reset_on_gap(self):
        d = GestureDebouncer(GestureConfig(activation_frames=3))
        events = feed(d, [GestureKind.POINT, GestureKind.POINT, None, GestureKind.POINT])
        assert events == []

    def test_updates_after_start(self):
        d = GestureDebouncer(GestureConfig(activation_frames=3))
        events = feed(d, [GestureKind.POINT] * 5)
        phases = [e.phase for e in events]
        assert phases == [Phase.START, Phase.UPDATE, Phase.UPDATE]


class TestRelease:
    def test_end_after_release_frames(self):
        d = GestureDebouncer(GestureConfig(activation_frames=3, release_frames=2))
        events = feed(d, [GestureKind.POINT] * 3 + [None, None])
        assert [e.phase for e in events] == [Phase.START, Phase.END]
        assert events[-1].timestamp_ms == 4 * 33

    def test_short_gap_does_not_end(self):
        d = GestureDebouncer(GestureConfig(activation_frames=3, release_frames=2))
        events = feed(d, [GestureKind.POINT] * 3 + [None] + [GestureKind.POINT] * 2)
        phases = [e.phase for e in events]
        assert phases == [Phase.START, Phase.UPDATE, Phase.UPDATE]

    def test_kind_change_counts_toward_release(self):
        d = GestureDebouncer(GestureConfig(activation_frames=2, release_frames=2))
        events = feed(d, [GestureKind.POINT] * 2 + [GestureKind.FIST] * 2)
        # fist frames end the point and immediately start the fist
        assert [(e.phase, e.kind) for e in events] == [
            (Phase.START, GestureKind.POINT),
            (Phase.END, GestureKind.POINT),
            (Phase.START, GestureKind.FIST),
        ]

    def test_end_keeps_last_anchor(self):
        d = GestureDebouncer(GestureConfig(activation_frames=1, release_frames=1))
        a = HandPose(Handedness.LEFT, GestureKind.POINT, Point2(0.25, 0.75))
        d.step(combine_hands((a,)), 0)
        events = d.step(combine_hands(()), 33)
        assert events[0].phase is Phase.END
        assert events[0].anchor == Point2(0.25, 0.75)


class TestZoomTrack:
    def _both_open(self):
        return RawGesture(
            poses=(
                HandPose(Handedness.LEFT, GestureKind.OPEN_PALM, Point2(0.3, 0.5)),
                HandPose(Handedness.RIGHT, GestureKind.OPEN_PALM, Point2(0.7, 0.5)),
            ),
            zoom=ZoomCandidate(Point2(0.3, 0.5), Point2(0.7, 0.5)),
        )

    def test_zoom_start_suppresses_palm_starts(self):
        d = GestureDebouncer(GestureConfig(activation_frames=3, release_frames=2))
        events = []
        for i in range(6):
            events += d.step(self._both_open(), i * 33)
        kinds = [(e.phase, e.kind) for e in events]
        assert (Phase.START, GestureKind.ZOOM) in kinds
        assert all(k is GestureKind.ZOOM for _, k in kinds)
        zoom_updates = [e for e in events if e.phase is Phase.UPDATE]
        assert len(zoom_updates) == 3
        assert zoom_updates[0].palms is not None

    def test_zoom_end_on_candidate_loss(self):
        d = GestureDebouncer(GestureConfig(activation_frames=3, release_frames=2))
        events = []
        for i in range(4):
            events += d.step(self._both_open(), i * 33)
        for i in range(4, 7):
            events += d.step(raw(left=GestureKind.OPEN_PALM), i * 33)
        zoom_events = [(e.phase, e.kind) for e in events if e.kind is GestureKind.ZOOM]
        assert zoom_events == [
            (Phase.START, GestureKind.ZOOM),
            (Phase.UPDATE, GestureKind.ZOOM),
            (Phase.END, GestureKind.ZOOM),
        ]


def check_bracketing(events):
    """Every (hand, kind) stream must be Start, Update*, End with no overlap."""
    active: dict[tuple, bool] = defaultdict(bool)
    per_track_active: dict[object, object] = defaultdict(lambda: None)
    for e in events:
        key = (e.hand, e.kind)
        track = e.hand if e.kind is not GestureKind.ZOOM else "zoom"
        if e.phase is Phase.START:
            assert not active[key], f"double start {key}"
            assert per_track_active[track] is None, f"track overlap {key}"
            active[key] = True
            per_track_active[track] = e.kind
        elif e.phase is Phase.UPDATE:
            assert active[key], f"update without start {key}"
        else:
            assert active[key], f"end without start {key}"
            active[key] = False
            per_track_active[track] = None


class TestBracketingProperty:
    def test_random_sequences_well_bracketed(self):
        rng = random.Random(97)
        kinds = [GestureKind.POINT, GestureKind.PINCH, GestureKind.FIST,
                 GestureKind.OPEN_PALM, None]
        for trial in range(30):
            cfg = GestureConfig(
                activation_frames=rng.randint(1, 4), release_frames=rng.randint(1, 4)
            )
            d = GestureDebouncer(cfg)
            events = []
            for i in range(400):
                left = rng.choice(kinds)
                right = rng.choice(kinds)
                poses = []
                if left is not None:
                    poses.append(HandPose(Handedness.LEFT, left, P))
                if right is not None:
                    poses.append(HandPose(Handedness.RIGHT, right, P))
                events += d.step(combine_hands(tuple(poses)), i * 33)
            check_bracketing(events)

    def test_determinism(self):
        rng_seed = 1234
        def run():
            rng = random.Random(rng_seed)
            d = GestureDebouncer(GestureConfig())
            kinds = [GestureKind.POINT, GestureKind.FIST, None]
            out = []
            for i in range(500):
                out += d.step(raw(left=rng.choice(kinds)), i * 33)
            return [(e.phase, e.kind, e.timestamp_ms) for e in out]
        assert run() == run()
