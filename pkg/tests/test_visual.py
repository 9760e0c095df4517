import json
import math

import numpy as np
import pytest

from interviewkit.errors import LandmarkTrackError
from interviewkit.visual import (
    LANDMARK_KEYS,
    VISUAL_FEATURE_NAMES,
    LandmarkFrame,
    aggregate_visual,
    euler_from_rotation,
    load_landmark_track,
    local_normalize,
    smile_ratio,
)

from oracles import rotation_from_euler

BASE = np.array([
    [240.0, 280.0],  # nose
    [240.0, 340.0],  # chin
    [200.0, 240.0],  # lel
    [280.0, 240.0],  # rer
    [215.0, 310.0],  # lm_l
    [265.0, 310.0],  # lm_r
])


def _frame(t=0.0, landmarks=None, rotation=None, smile=None):
    return LandmarkFrame(
        t_s=t,
        landmarks=BASE if landmarks is None else landmarks,
        rotation=rotation,
        smile_prob=smile,
    )


def _write_track(path, frames):
    with path.open("w", encoding="utf-8") as fh:
        for frame in frames:
            fh.write(json.dumps(frame) + "\n")
    return path


def _raw_frame(t, points=BASE, rotation=None, smile=None):
    payload = {"t": t, "lm": {k: list(points[i]) for i, k in enumerate(LANDMARK_KEYS)}}
    if rotation is not None:
        payload["R"] = rotation
    if smile is not None:
        payload["smile"] = smile
    return payload


# -- track loading ----------------------------------------------------------------


def test_single_frame_track(tmp_path):
    path = _write_track(tmp_path / "t.jsonl", [_raw_frame(0.0)])
    track = load_landmark_track(path)
    assert len(track) == 1
    np.testing.assert_array_equal(track[0].landmarks, BASE)


def test_duplicate_timestamps_rejected(tmp_path):
    path = _write_track(tmp_path / "t.jsonl", [_raw_frame(1.0), _raw_frame(1.0)])
    with pytest.raises(LandmarkTrackError, match="non-monotonic timestamps"):
        load_landmark_track(path)


def test_decreasing_timestamps_rejected(tmp_path):
    path = _write_track(tmp_path / "t.jsonl", [_raw_frame(2.0), _raw_frame(1.0)])
    with pytest.raises(LandmarkTrackError, match="non-monotonic"):
        load_landmark_track(path)


def test_malformed_rotation_rejected(tmp_path):
    bad = [[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]]  # not orthonormal
    path = _write_track(tmp_path / "t.jsonl", [_raw_frame(0.0, rotation=bad)])
    with pytest.raises(LandmarkTrackError, match="malformed rotation"):
        load_landmark_track(path)


def test_parse_error_reports_line(tmp_path):
    path = tmp_path / "t.jsonl"
    path.write_text('{"t": 0.0, "lm": {\n')
    with pytest.raises(LandmarkTrackError, match="line 1"):
        load_landmark_track(path)


def test_smile_prob_out_of_range(tmp_path):
    path = _write_track(tmp_path / "t.jsonl", [_raw_frame(0.0, smile=1.5)])
    with pytest.raises(LandmarkTrackError, match="smile_prob"):
        load_landmark_track(path)


def test_mini_corpus_track_round_trip(mini_records):
    track = load_landmark_track(mini_records[0].landmarks_path)
    assert len(track) == 60
    assert all(track[i].t_s < track[i + 1].t_s for i in range(59))
    assert all(f.rotation is not None for f in track)  # rec00 carries rotations


# -- euler angles -------------------------------------------------------------------


def test_identity_rotation_gives_zero_pose():
    pose = euler_from_rotation(np.eye(3))
    assert (pose.pitch_rad, pose.yaw_rad, pose.roll_rad) == (0.0, 0.0, 0.0)
    assert not pose.gimbal_lock


def test_pure_axis_rotations():
    pose = euler_from_rotation(rotation_from_euler(0.0, 0.0, 0.3))
    assert pose.roll_rad == pytest.approx(0.3, abs=1e-9)
    assert pose.pitch_rad == pytest.approx(0.0, abs=1e-9)
    assert pose.yaw_rad == pytest.approx(0.0, abs=1e-9)

    pose = euler_from_rotation(rotation_from_euler(0.0, 0.2, 0.0))
    assert pose.yaw_rad == pytest.approx(0.2, abs=1e-9)

    pose = euler_from_rotation(rotation_from_euler(0.4, 0.0, 0.0))
    assert pose.pitch_rad == pytest.approx(0.4, abs=1e-9)


def test_euler_round_trip_grid():
    pitches = np.linspace(-1.4, 1.4, 5)
    yaws = np.linspace(-math.pi / 2 + 0.01, math.pi / 2 - 0.01, 5)
    rolls = np.linspace(-1.4, 1.4, 5)
    for pitch in pitches:
        for yaw in yaws:
            for roll in rolls:
                pose = euler_from_rotation(rotation_from_euler(pitch, yaw, roll))
                assert pose.pitch_rad == pytest.approx(pitch, abs=1e-9)
                assert pose.yaw_rad == pytest.approx(yaw, abs=1e-9)
                assert pose.roll_rad == pytest.approx(roll, abs=1e-9)


def test_gimbal_lock_flags_and_zeroes_roll():
    pose = euler_from_rotation(rotation_from_euler(0.0, math.pi / 2, 0.7))
    assert pose.gimbal_lock
    assert pose.roll_rad == 0.0
    assert pose.yaw_rad == pytest.approx(math.pi / 2, abs=1e-6)


# -- local normalization ---------------------------------------------------------------


def test_normalized_eye_geometry():
    pts = local_normalize(BASE)
    lel = pts[LANDMARK_KEYS.index("lel")]
    rer = pts[LANDMARK_KEYS.index("rer")]
    np.testing.assert_allclose(lel, [-0.5, 0.0], atol=1e-12)
    np.testing.assert_allclose(rer, [0.5, 0.0], atol=1e-12)
    np.testing.assert_allclose((lel + rer) / 2, [0.0, 0.0], atol=1e-12)


def test_translation_invariance():
    np.testing.assert_allclose(
        local_normalize(BASE + np.array([37.0, -12.0])), local_normalize(BASE), atol=1e-12
    )


def test_similarity_invariance():
    rng = np.random.default_rng(12)
    reference = local_normalize(BASE)
    for _ in range(25):
        angle = rng.uniform(-math.pi, math.pi)
        scale = rng.uniform(0.2, 5.0)
        shift = rng.uniform(-500, 500, 2)
        rot = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
        transformed = (BASE @ rot.T) * scale + shift
        np.testing.assert_allclose(local_normalize(transformed), reference, atol=1e-9)


def test_rotated_scaled_frame_matches_reference():
    angle = math.radians(25)
    rot = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
    transformed = (BASE @ rot.T) * 3.0
    np.testing.assert_allclose(local_normalize(transformed), local_normalize(BASE), atol=1e-9)


def test_coincident_eye_corners_rejected():
    bad = BASE.copy()
    bad[LANDMARK_KEYS.index("rer")] = bad[LANDMARK_KEYS.index("lel")]
    with pytest.raises(LandmarkTrackError, match="coincident eye corners"):
        local_normalize(bad)


# -- smile ratio -------------------------------------------------------------------------


def test_smile_ratio_unit_width():
    pts = local_normalize(BASE).copy()
    pts[LANDMARK_KEYS.index("lm_l")] = [-0.5, -0.8]
    pts[LANDMARK_KEYS.index("lm_r")] = [0.5, -0.8]
    assert smile_ratio(pts) == pytest.approx(1.0)


def test_smile_ratio_coincident_corners():
    pts = local_normalize(BASE).copy()
    pts[LANDMARK_KEYS.index("lm_l")] = [0.1, -0.8]
    pts[LANDMARK_KEYS.index("lm_r")] = [0.1, -0.8]
    assert smile_ratio(pts) == 0.0


def test_smile_ratio_hand_value():
    pts = local_normalize(BASE).copy()
    pts[LANDMARK_KEYS.index("lm_l")] = [-0.4, -0.8]
    pts[LANDMARK_KEYS.index("lm_r")] = [0.4, -0.8]
    assert smile_ratio(pts) == pytest.approx(0.8)


# -- aggregation ---------------------------------------------------------------------------


def test_static_track_has_zero_motion_energy():
    track = [_frame(t=float(i)) for i in range(5)]
    features = aggregate_visual(track)
    by_name = dict(zip(features.vector.names, features.vector.values))
    assert by_name["motion_energy"] == 0.0
    assert features.vector.values.shape == (19,)
    assert features.vector.names == VISUAL_FEATURE_NAMES


def test_all_smiling_track():
    track = [_frame(t=float(i), smile=1.0) for i in range(4)]
    vector = aggregate_visual(track).vector
    by_name = dict(zip(vector.names, vector.values))
    assert by_name["smile_fraction"] == 1.0


def test_alternating_smile_probs():
    track = [_frame(t=float(i), smile=0.9 if i % 2 == 0 else 0.1) for i in range(10)]
    features = aggregate_visual(track)
    by_name = dict(zip(features.vector.names, features.vector.values))
    assert by_name["smile_fraction"] == 0.5


def test_pose_coverage_and_zero_pose_for_missing_rotations():
    rot = rotation_from_euler(0.2, 0.1, -0.1)
    track = [_frame(t=0.0, rotation=rot), _frame(t=1.0)]
    features = aggregate_visual(track)
    assert features.pose_coverage == 0.5
    by_name = dict(zip(features.vector.names, features.vector.values))
    assert by_name["pitch"] == pytest.approx(0.1, abs=1e-9)  # mean of 0.2 and 0
    assert by_name["yaw"] == pytest.approx(0.05, abs=1e-9)


def test_means_are_order_invariant():
    tracks = []
    for order in (range(6), reversed(range(6))):
        track = []
        for idx, i in enumerate(order):
            pts = BASE + 5.0 * np.sin(i)
            track.append(_frame(t=float(idx), landmarks=pts, smile=0.2 * i / 6))
        tracks.append(aggregate_visual(track))
    a, b = tracks
    names = a.vector.names
    for name in names:
        ia = names.index(name)
        if name == "motion_energy":
            continue  # order-sensitive by design
        assert a.vector.values[ia] == pytest.approx(b.vector.values[ia], abs=1e-12)


def test_empty_track_rejected():
    with pytest.raises(LandmarkTrackError, match="empty track"):
        aggregate_visual([])


def test_smile_fraction_always_in_unit_interval(mini_features):
    video = mini_features.parts["video"]
    col = video.column_names.index("smile_fraction")
    assert np.all((video.values[:, col] >= 0.0) & (video.values[:, col] <= 1.0))
    assert video.n_cols == 19
