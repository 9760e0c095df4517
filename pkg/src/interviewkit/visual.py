"""Facial-landmark track ingestion, head pose, and per-recording visual features.

Tracks are JSON-lines files with one frame per line:

    {"t": 0.0, "lm": {"nose": [x, y], "chin": [x, y], "lel": [x, y],
     "rer": [x, y], "lm_l": [x, y], "lm_r": [x, y]},
     "R": [[...], [...], [...]],   # optional 3x3 head rotation
     "smile": 0.8}                 # optional smile probability

Global translation, rotation, and scale are removed per frame by normalizing
on the eye corners, so only local landmark changes enter the features.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import FeatureVector
from .errors import LandmarkTrackError

#: Landmark keys in canonical order: nose, chin, left eye left corner,
#: right eye right corner, left mouth corner, right mouth corner.
LANDMARK_KEYS = ("nose", "chin", "lel", "rer", "lm_l", "lm_r")

ROTATION_ORTHO_TOL = 1e-3
GIMBAL_TOL = 1e-6
SMILE_PROB_THRESHOLD = 0.5
SMILE_RATIO_THRESHOLD = 0.55

VISUAL_FEATURE_NAMES: tuple[str, ...] = (
    *[f"{k}_{axis}" for k in LANDMARK_KEYS for axis in ("x", "y")],
    "pitch",
    "yaw",
    "roll",
    "smile_fraction",
    "smile_ratio_mean",
    "smile_ratio_std",
    "motion_energy",
)


@dataclass(frozen=True)
class LandmarkFrame:
    """One timestamped landmark observation with optional pose and smile."""

    t_s: float
    landmarks: np.ndarray  # (6, 2) in LANDMARK_KEYS order, pixels
    rotation: np.ndarray | None = None
    smile_prob: float | None = None

    def __post_init__(self) -> None:
        pts = np.asarray(self.landmarks, dtype=np.float64)
        pts.setflags(write=False)
        object.__setattr__(self, "landmarks", pts)
        if pts.shape != (6, 2) or not np.all(np.isfinite(pts)):
            raise LandmarkTrackError(f"frame t={self.t_s}: landmarks must be 6 finite 2-D points")
        if not (self.t_s >= 0 and math.isfinite(self.t_s)):
            raise LandmarkTrackError(f"invalid timestamp {self.t_s}")
        if self.rotation is not None:
            rot = np.asarray(self.rotation, dtype=np.float64)
            rot.setflags(write=False)
            object.__setattr__(self, "rotation", rot)
            _check_rotation(rot, f"frame t={self.t_s}")
        if self.smile_prob is not None and not (0.0 <= self.smile_prob <= 1.0):
            raise LandmarkTrackError(f"frame t={self.t_s}: smile_prob {self.smile_prob} outside [0,1]")


def _check_rotation(rot: np.ndarray, where: str) -> None:
    if rot.shape != (3, 3) or not np.all(np.isfinite(rot)):
        raise LandmarkTrackError(f"{where}: malformed rotation (need finite 3x3)")
    residual = np.abs(rot.T @ rot - np.eye(3)).max()
    if residual > ROTATION_ORTHO_TOL:
        raise LandmarkTrackError(f"{where}: malformed rotation, ||R'R - I|| = {residual:.2e}")
    det = np.linalg.det(rot)
    if not (0.99 <= det <= 1.01):
        raise LandmarkTrackError(f"{where}: malformed rotation, det(R) = {det:.4f}")


def load_landmark_track(path: str | Path) -> list[LandmarkFrame]:
    """Parse a JSON-lines landmark track; timestamps must strictly increase."""
    path = Path(path)
    if not path.is_file():
        raise LandmarkTrackError(f"landmark track not found: {path}")
    frames: list[LandmarkFrame] = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise LandmarkTrackError(f"{path}: line {line_no}: invalid JSON ({exc.msg})") from exc
            try:
                lm = raw["lm"]
                pts = [lm[key] for key in LANDMARK_KEYS]
            except (KeyError, TypeError) as exc:
                raise LandmarkTrackError(f"{path}: line {line_no}: missing landmark {exc}") from exc
            frame = LandmarkFrame(
                t_s=float(raw.get("t", -1.0)),
                landmarks=np.asarray(pts, dtype=np.float64),
                rotation=None if raw.get("R") is None else np.asarray(raw["R"], dtype=np.float64),
                smile_prob=None if raw.get("smile") is None else float(raw["smile"]),
            )
            if frames and frame.t_s <= frames[-1].t_s:
                raise LandmarkTrackError(
                    f"{path}: line {line_no}: non-monotonic timestamps ({frame.t_s} after {frames[-1].t_s})"
                )
            frames.append(frame)
    return frames


@dataclass(frozen=True)
class HeadPose:
    """Euler angles (radians) in the X-Y-Z intrinsic convention."""

    pitch_rad: float
    yaw_rad: float
    roll_rad: float
    gimbal_lock: bool = False


def euler_from_rotation(rot: np.ndarray) -> HeadPose:
    """Extract pitch/yaw/roll from an orthonormal rotation matrix.

    pitch = atan2(R[2,1], R[2,2]); yaw = atan2(-R[2,0], hypot(R[2,1], R[2,2]));
    roll = atan2(R[1,0], R[0,0]). Near the yaw = +-pi/2 gimbal lock, roll is
    undefined; it is reported as 0 with the gimbal_lock flag set.
    """
    rot = np.asarray(rot, dtype=np.float64)
    _check_rotation(rot, "rotation")
    sy = math.hypot(rot[2, 1], rot[2, 2])
    pitch = math.atan2(rot[2, 1], rot[2, 2])
    yaw = math.atan2(-rot[2, 0], sy)
    if abs(abs(yaw) - math.pi / 2) < GIMBAL_TOL:
        return HeadPose(pitch, yaw, 0.0, gimbal_lock=True)
    return HeadPose(pitch, yaw, math.atan2(rot[1, 0], rot[0, 0]))


def local_normalize(landmarks: np.ndarray) -> np.ndarray:
    """Remove global translation, rotation, and scale from one frame.

    The eye-corner midpoint moves to the origin, the eye segment is rotated
    to the horizontal, and inter-ocular distance is scaled to 1.

    Raises:
        LandmarkTrackError: If the eye corners coincide.
    """
    pts = np.asarray(landmarks, dtype=np.float64)
    lel = pts[LANDMARK_KEYS.index("lel")]
    rer = pts[LANDMARK_KEYS.index("rer")]
    delta = rer - lel
    dist = math.hypot(delta[0], delta[1])
    if dist <= 0.0:
        raise LandmarkTrackError("coincident eye corners; cannot normalize frame")
    centered = pts - (lel + rer) / 2.0
    cos_t, sin_t = delta[0] / dist, delta[1] / dist
    rotation = np.array([[cos_t, sin_t], [-sin_t, cos_t]])
    return (centered @ rotation.T) / dist


def smile_ratio(normalized: np.ndarray) -> float:
    """Mouth-corner distance in normalized units (inter-ocular distance = 1)."""
    left = normalized[LANDMARK_KEYS.index("lm_l")]
    right = normalized[LANDMARK_KEYS.index("lm_r")]
    return float(math.hypot(*(right - left)))


@dataclass(frozen=True)
class RecordingVisualFeatures:
    """Named per-recording visual vector plus coverage diagnostics."""

    vector: FeatureVector
    pose_coverage: float  # fraction of frames carrying a rotation matrix
    gimbal_flagged: int


def aggregate_visual(
    track: list[LandmarkFrame],
    smile_prob_threshold: float = SMILE_PROB_THRESHOLD,
    smile_ratio_threshold: float = SMILE_RATIO_THRESHOLD,
) -> RecordingVisualFeatures:
    """Aggregate a track into the canonical 19-entry visual vector.

    Mean normalized landmark coordinates (12), mean pitch/yaw/roll (3, zero
    for frames without a rotation), smile fraction (per-frame indicator from
    smile_prob when present, else the geometric ratio), mean/std of the
    geometric smile ratio, and landmark motion energy (mean summed squared
    displacement of normalized landmarks across consecutive frames).
    """
    if not track:
        raise LandmarkTrackError("cannot aggregate an empty track")

    normalized = np.stack([local_normalize(f.landmarks) for f in track])
    ratios = np.array([smile_ratio(pts) for pts in normalized])

    poses = np.zeros((len(track), 3))
    gimbal = 0
    with_rotation = 0
    for i, frame in enumerate(track):
        if frame.rotation is not None:
            pose = euler_from_rotation(frame.rotation)
            poses[i] = (pose.pitch_rad, pose.yaw_rad, pose.roll_rad)
            gimbal += int(pose.gimbal_lock)
            with_rotation += 1

    indicators = np.array(
        [
            (f.smile_prob >= smile_prob_threshold) if f.smile_prob is not None else (r >= smile_ratio_threshold)
            for f, r in zip(track, ratios)
        ],
        dtype=np.float64,
    )

    if len(track) > 1:
        displacement = normalized[1:] - normalized[:-1]
        motion_energy = float(np.mean(np.sum(displacement**2, axis=(1, 2))))
    else:
        motion_energy = 0.0

    values = np.concatenate(
        [
            normalized.mean(axis=0).reshape(-1),
            poses.mean(axis=0),
            [indicators.mean(), ratios.mean(), ratios.std(), motion_energy],
        ]
    )
    return RecordingVisualFeatures(
        vector=FeatureVector(VISUAL_FEATURE_NAMES, values),
        pose_coverage=with_rotation / len(track),
        gimbal_flagged=gimbal,
    )
