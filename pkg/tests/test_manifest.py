import json

import pytest

from interviewkit.errors import ManifestError
from interviewkit.manifest import LABEL_NAMES, load_manifest


def _valid_record(rid="r1", **overrides):
    record = {
        "id": rid,
        "audio": f"{rid}.wav",
        "landmarks": f"{rid}.jsonl",
        "transcript": f"{rid}.txt",
        "duration_s": 30.0,
        "labels": {name: 4 for name in LABEL_NAMES},
    }
    record.update(overrides)
    return record


def _write(tmp_path, records):
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"records": records}))
    return path


def test_single_valid_record(tmp_path):
    records = load_manifest(_write(tmp_path, [_valid_record()]))
    assert len(records) == 1
    assert records[0].id == "r1"
    assert records[0].audio_path == tmp_path / "r1.wav"
    assert records[0].labels["EyeContact"] == 4


def test_label_out_of_bounds_names_record_and_field(tmp_path):
    bad = _valid_record()
    bad["labels"]["EyeContact"] = 8
    with pytest.raises(ManifestError, match=r"'r1'.*EyeContact") as excinfo:
        load_manifest(_write(tmp_path, [bad]))
    assert "[1,7]" in str(excinfo.value)


def test_missing_label_name(tmp_path):
    bad = _valid_record()
    del bad["labels"]["Pauses"]
    with pytest.raises(ManifestError, match="Pauses"):
        load_manifest(_write(tmp_path, [bad]))


def test_extra_label_name(tmp_path):
    bad = _valid_record()
    bad["labels"]["Confidence"] = 5
    with pytest.raises(ManifestError, match="Confidence"):
        load_manifest(_write(tmp_path, [bad]))


def test_non_integer_score(tmp_path):
    bad = _valid_record()
    bad["labels"]["Engaged"] = 4.5
    with pytest.raises(ManifestError, match="Engaged"):
        load_manifest(_write(tmp_path, [bad]))


def test_nonpositive_duration(tmp_path):
    with pytest.raises(ManifestError, match="duration_s"):
        load_manifest(_write(tmp_path, [_valid_record(duration_s=0.0)]))


def test_duplicate_ids_rejected(tmp_path):
    with pytest.raises(ManifestError, match="duplicate id"):
        load_manifest(_write(tmp_path, [_valid_record(), _valid_record()]))


def test_parse_error_reports_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"records": [\n  {"id": }\n]}')
    with pytest.raises(ManifestError, match="line 2"):
        load_manifest(path)


def test_missing_file(tmp_path):
    with pytest.raises(ManifestError, match="not found"):
        load_manifest(tmp_path / "nope.json")


def test_require_labels_false_allows_unlabeled(tmp_path):
    record = _valid_record()
    del record["labels"]
    loaded = load_manifest(_write(tmp_path, [record]), require_labels=False)
    assert loaded[0].labels is None
    with pytest.raises(ManifestError, match="labels"):
        load_manifest(_write(tmp_path, [record]))


def test_mini_corpus_round_trip(mini_manifest, mini_records):
    # ids preserved in file order
    assert [r.id for r in mini_records] == [f"rec{i:02d}" for i in range(6)]
    raw = json.loads(mini_manifest.read_text())
    assert [r["id"] for r in raw["records"]] == [r.id for r in mini_records]
    for record in mini_records:
        assert record.audio_path.is_file()
        assert record.landmarks_path.is_file()
        assert record.transcript_path.is_file()
        assert set(record.labels) == set(LABEL_NAMES)
