"""Deterministic synthetic data: a small on-disk corpus and a planted-signal benchmark.

The mini corpus (6 records) exercises the full ingestion surface: PCM16 WAV
audio, JSON-lines landmark tracks (with and without rotations and smile
probabilities), UTF-8 transcripts, and a manifest. The planted corpus is a
feature-level dataset whose labels depend on three designated audio columns
plus noise, giving a known achievable accuracy for end-to-end benchmarks.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .audio import recording_feature_names
from .core import Column, FeatureMatrix
from .extract import ExtractedFeatures
from .lexical import LEXICAL_FEATURE_NAMES
from .manifest import LABEL_NAMES
from .visual import VISUAL_FEATURE_NAMES
from .wav import write_wav

# Base face geometry in pixels (nose, chin, lel, rer, lm_l, lm_r).
_BASE_FACE = {
    "nose": (240.0, 280.0),
    "chin": (240.0, 340.0),
    "lel": (200.0, 240.0),
    "rer": (280.0, 240.0),
    "lm_l": (215.0, 310.0),
    "lm_r": (265.0, 310.0),
}

_TRANSCRIPTS = (
    "I am happy to be here. I think my experience with data analysis is a good fit. "
    "Um, I led a small team and we delivered the project on time.",
    "Maybe the hardest problem was, uh, a failing deadline. I was worried at first, "
    "but we analyzed the root cause and solved it!",
    "My strengths are clear communication and reliable code. You know, I enjoy "
    "working with people. I learned a lot at university.",
    "I felt nervous before big meetings. Um, um, practice helped me stay calm. "
    "Therefore I prepare examples because evidence matters.",
    "Great question! I love creative work. I built a system that improved results "
    "by a wide margin, and the customers were pleased.",
    "Er, I guess my weakness is that I am sometimes too quiet. Hmm. I want to "
    "improve my presentation skills this year.",
)


def _rotation_xyz(pitch: float, yaw: float, roll: float) -> list[list[float]]:
    cx, sx = math.cos(pitch), math.sin(pitch)
    cy, sy = math.cos(yaw), math.sin(yaw)
    cz, sz = math.cos(roll), math.sin(roll)
    rx = np.array([[1, 0, 0], [0, cx, -sx], [0, sx, cx]])
    ry = np.array([[cy, 0, sy], [0, 1, 0], [-sy, 0, cy]])
    rz = np.array([[cz, -sz, 0], [sz, cz, 0], [0, 0, 1]])
    return (rz @ ry @ rx).tolist()


def _record_audio(index: int, rng: np.random.Generator, fs: int, duration_s: float) -> np.ndarray:
    t = np.arange(int(fs * duration_s)) / fs
    tone_hz = 120.0 + 55.0 * index
    samples = 0.4 * np.sin(2 * np.pi * tone_hz * t)
    samples += 0.05 * rng.standard_normal(t.shape[0])
    if index == 3:
        samples = 0.2 * rng.standard_normal(t.shape[0])  # unvoiced record
    return np.clip(samples, -0.99, 0.99)


def _record_track(index: int, rng: np.random.Generator, n_frames: int, duration_s: float) -> list[dict]:
    scale = 0.8 + 0.1 * index
    angle = 0.05 * index
    offset = np.array([15.0 * index, -7.0 * index])
    cos_a, sin_a = math.cos(angle), math.sin(angle)
    frames = []
    for j in range(n_frames):
        t = j * duration_s / n_frames
        wiggle = 2.0 * math.sin(2 * math.pi * j / 10.0)
        lm = {}
        for key, (x, y) in _BASE_FACE.items():
            if key in ("lm_l", "lm_r"):
                x = x + (wiggle if key == "lm_r" else -wiggle)
            x += float(rng.normal(0.0, 0.3))
            y += float(rng.normal(0.0, 0.3))
            gx = scale * (cos_a * x - sin_a * y) + offset[0]
            gy = scale * (sin_a * x + cos_a * y) + offset[1]
            lm[key] = [gx, gy]
        frame = {"t": round(t, 6), "lm": lm}
        if index < 4:
            frame["R"] = _rotation_xyz(
                0.1 * math.sin(2 * math.pi * j / 20.0),
                0.08 * math.cos(2 * math.pi * j / 15.0),
                0.05 * math.sin(2 * math.pi * j / 25.0),
            )
        if index >= 2:
            frame["smile"] = 0.9 if (j // 5) % 2 == 0 else 0.1
        frames.append(frame)
    return frames


def write_mini_corpus(out_dir: str | Path, n_records: int = 6, seed: int = 7,
                      fs: int = 8000, duration_s: float = 4.0, n_frames: int = 60) -> Path:
    """Write the deterministic mini corpus; returns the manifest path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = []
    for i in range(n_records):
        rng = np.random.default_rng(seed + i)
        rid = f"rec{i:02d}"
        write_wav(out_dir / f"{rid}.wav", _record_audio(i, rng, fs, duration_s), fs)
        with (out_dir / f"{rid}.landmarks.jsonl").open("w", encoding="utf-8") as fh:
            for frame in _record_track(i, rng, n_frames, duration_s):
                fh.write(json.dumps(frame) + "\n")
        (out_dir / f"{rid}.txt").write_text(_TRANSCRIPTS[i % len(_TRANSCRIPTS)], encoding="utf-8")

        # Each label sees the values {2, 3, 4} twice across the six records,
        # rotated per label so columns differ; this keeps 3-fold plans feasible.
        labels = {
            name: 2 + ((i + j) % 6) // 2
            for j, name in enumerate(LABEL_NAMES)
        }
        records.append({
            "id": rid,
            "audio": f"{rid}.wav",
            "landmarks": f"{rid}.landmarks.jsonl",
            "transcript": f"{rid}.txt",
            "duration_s": duration_s,
            "labels": labels,
        })

    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps({"records": records}, indent=1) + "\n", encoding="utf-8")
    return manifest_path


# -- planted-signal benchmark corpus ------------------------------------------


def planted_columns(label_name: str) -> tuple[int, int, int]:
    """The three audio column indices carrying this label's signal."""
    j = LABEL_NAMES.index(label_name)
    return (3 * j, 3 * j + 1, 3 * j + 2)


def make_planted_corpus(n_records: int = 60, seed: int = 0,
                        class_values: tuple[int, ...] = (1, 4, 7),
                        separation: float = 3.0, noise: float = 0.5) -> ExtractedFeatures:
    """Feature-level corpus whose labels are decided by three audio columns.

    Every feature starts as unit Gaussian noise; for each label, its three
    planted audio columns are overwritten with class_rank * separation plus
    Gaussian noise of the given scale, so a separation of several noise
    standard deviations makes the labels learnable to ~100% accuracy.
    """
    rng = np.random.default_rng(seed)
    record_ids = tuple(f"synth{i:03d}" for i in range(n_records))

    audio_names = recording_feature_names(include_std=False)
    if 3 * len(LABEL_NAMES) > len(audio_names):
        raise ValueError("not enough audio columns to plant all labels")
    blocks = {
        "audio": rng.standard_normal((n_records, len(audio_names))),
        "video": rng.standard_normal((n_records, len(VISUAL_FEATURE_NAMES))),
        "lexical": rng.standard_normal((n_records, len(LEXICAL_FEATURE_NAMES))),
    }

    labels: dict[str, np.ndarray] = {}
    base_ranks = np.arange(n_records) % len(class_values)  # balanced classes
    for name in LABEL_NAMES:
        ranks = rng.permutation(base_ranks)
        labels[name] = np.array([class_values[r] for r in ranks], dtype=np.int64)
        for col in planted_columns(name):
            blocks["audio"][:, col] = ranks * separation + noise * rng.standard_normal(n_records)

    names_by_modality = {
        "audio": audio_names,
        "video": VISUAL_FEATURE_NAMES,
        "lexical": LEXICAL_FEATURE_NAMES,
    }
    parts = {
        modality: FeatureMatrix(
            blocks[modality],
            tuple(Column(n, modality) for n in names_by_modality[modality]),
            record_ids,
        )
        for modality in ("audio", "video", "lexical")
    }
    return ExtractedFeatures(parts=parts, labels=labels, record_ids=record_ids)
