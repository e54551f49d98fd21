"""Classify synthetic hand poses and inspect the per-finger curl angles.

Shows the cosine-rule curl profile behind each decision: every finger's
interior angle at the middle joint, its curl class under the default
130/60-degree thresholds, and the resulting gesture kind with its anchor.
"""

from hanstream import GestureConfig, Handedness, classify_hand, curl_profile

from _hands import FIST, OPEN, PINCH, POINT, make_hand

cfg = GestureConfig()

poses = {
    "open palm": make_hand(Handedness.RIGHT, OPEN),
    "pointing": make_hand(Handedness.RIGHT, POINT),
    "fist": make_hand(Handedness.LEFT, FIST),
    "pinch": make_hand(Handedness.LEFT, PINCH, pinch_tips=True),
}

for name, hand in poses.items():
    profile = curl_profile(hand, cfg)
    pose = classify_hand(hand, profile, cfg)
    angles = "  ".join(
        f"{finger.value}:{angle:6.1f} ({profile.classes[finger].value})"
        for finger, angle in profile.angles.items()
    )
    anchor = f"({pose.anchor.x:.3f}, {pose.anchor.y:.3f})" if pose.anchor else "-"
    print(f"{name:10s} -> kind={pose.kind.value:10s} anchor={anchor}")
    print(f"             {angles}")
