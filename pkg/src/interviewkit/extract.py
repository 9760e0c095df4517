"""Batch feature extraction over manifest records, with a CSV feature cache.

One CSV per modality (record id first, canonical names in the header) plus a
labels CSV and a meta file keying the cache by package version, config hash,
and record ids, so stale caches are rebuilt instead of silently reused.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .audio import extract_recording_audio_features
from .config import PipelineConfig
from .core import FeatureMatrix, FeatureVector, matrix_from_rows, read_feature_csv, write_feature_csv
from .errors import CacheError
from .lexical import LexiconSet, extract_recording_lexical_features, load_filler_lexicon, load_sentiment_lexicon, load_tone_lexicon, default_tagger
from .manifest import LABEL_NAMES, InterviewRecord
from .visual import aggregate_visual, load_landmark_track
from .wav import read_wav

META_FILENAME = "cache_meta.json"


@dataclass(frozen=True)
class ExtractedFeatures:
    """Per-modality feature matrices plus per-label targets (when labeled)."""

    parts: dict[str, FeatureMatrix]
    labels: dict[str, np.ndarray] | None
    record_ids: tuple[str, ...]


def _lexicons_for(config: PipelineConfig) -> LexiconSet:
    lex = config["lexical"]
    return LexiconSet(
        tone=load_tone_lexicon(lex["tone_lexicon"]),
        sentiment=load_sentiment_lexicon(lex["sentiment_lexicon"]),
        fillers=load_filler_lexicon(lex["filler_lexicon"]),
        tagger=default_tagger(),
    )


def extract_features(records: list[InterviewRecord], config: PipelineConfig | None = None) -> ExtractedFeatures:
    """Run all three extractors over the records, preserving manifest order."""
    if config is None:
        config = PipelineConfig()
    spec = config.frame_spec()
    include_std = config["audio"]["include_std"]
    visual_cfg = config["visual"]
    lexicons = _lexicons_for(config)

    audio_rows: list[tuple[str, FeatureVector]] = []
    video_rows: list[tuple[str, FeatureVector]] = []
    lexical_rows: list[tuple[str, FeatureVector]] = []
    for record in records:
        signal = read_wav(record.audio_path)
        audio_rows.append((record.id, extract_recording_audio_features(signal, spec, include_std)))

        track = load_landmark_track(record.landmarks_path)
        visual = aggregate_visual(
            track,
            smile_prob_threshold=visual_cfg["smile_prob_threshold"],
            smile_ratio_threshold=visual_cfg["smile_ratio_threshold"],
        )
        video_rows.append((record.id, visual.vector))

        text = Path(record.transcript_path).read_text(encoding="utf-8")
        lexical_rows.append((record.id, extract_recording_lexical_features(text, record.duration_s, lexicons)))

    parts = {
        "audio": matrix_from_rows(audio_rows, "audio"),
        "video": matrix_from_rows(video_rows, "video"),
        "lexical": matrix_from_rows(lexical_rows, "lexical"),
    }
    labels = None
    if all(r.labels is not None for r in records):
        labels = {
            name: np.array([r.labels[name] for r in records], dtype=np.int64)
            for name in LABEL_NAMES
        }
    return ExtractedFeatures(parts=parts, labels=labels, record_ids=tuple(r.id for r in records))


# -- cache -------------------------------------------------------------------


def write_cache(features: ExtractedFeatures, out_dir: str | Path, config: PipelineConfig) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for modality, matrix in features.parts.items():
        write_feature_csv(matrix, out_dir / f"features_{modality}.csv")
    if features.labels is not None:
        with (out_dir / "labels.csv").open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("id",) + tuple(LABEL_NAMES))
            for i, rid in enumerate(features.record_ids):
                writer.writerow((rid,) + tuple(int(features.labels[name][i]) for name in LABEL_NAMES))
    meta = {
        "version": __version__,
        "config_hash": config.config_hash(),
        "record_ids": list(features.record_ids),
        "labeled": features.labels is not None,
    }
    (out_dir / META_FILENAME).write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def cache_matches(cache_dir: str | Path, config: PipelineConfig, record_ids: tuple[str, ...]) -> bool:
    meta_path = Path(cache_dir) / META_FILENAME
    if not meta_path.is_file():
        return False
    try:
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError:
        return False
    return (
        meta.get("version") == __version__
        and meta.get("config_hash") == config.config_hash()
        and tuple(meta.get("record_ids", ())) == record_ids
    )


def read_cache(cache_dir: str | Path) -> ExtractedFeatures:
    cache_dir = Path(cache_dir)
    meta_path = cache_dir / META_FILENAME
    if not meta_path.is_file():
        raise CacheError(f"missing cached features: no {META_FILENAME} in {cache_dir}")
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    parts = {}
    for modality in ("audio", "video", "lexical"):
        parts[modality] = read_feature_csv(cache_dir / f"features_{modality}.csv", modality)
    record_ids = tuple(meta["record_ids"])
    for modality, matrix in parts.items():
        if matrix.row_ids != record_ids:
            raise CacheError(f"cache {cache_dir}: {modality} rows disagree with meta record ids")

    labels = None
    if meta.get("labeled"):
        labels_path = cache_dir / "labels.csv"
        if not labels_path.is_file():
            raise CacheError(f"cache {cache_dir}: meta says labeled but labels.csv is missing")
        with labels_path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = list(reader)
        if tuple(header) != ("id",) + tuple(LABEL_NAMES):
            raise CacheError(f"cache {cache_dir}: unexpected labels.csv header")
        if tuple(r[0] for r in rows) != record_ids:
            raise CacheError(f"cache {cache_dir}: labels.csv rows disagree with meta record ids")
        labels = {
            name: np.array([int(r[j + 1]) for r in rows], dtype=np.int64)
            for j, name in enumerate(LABEL_NAMES)
        }
    return ExtractedFeatures(parts=parts, labels=labels, record_ids=record_ids)


def extract_or_load(records: list[InterviewRecord], cache_dir: str | Path,
                    config: PipelineConfig) -> ExtractedFeatures:
    """Reuse a matching cache or extract fresh and (re)write it."""
    record_ids = tuple(r.id for r in records)
    if cache_matches(cache_dir, config, record_ids):
        return read_cache(cache_dir)
    features = extract_features(records, config)
    write_cache(features, cache_dir, config)
    return features
