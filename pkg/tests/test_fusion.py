import numpy as np
import pytest

from interviewkit.core import (
    Column,
    FeatureMatrix,
    fuse_features,
    read_feature_csv,
    write_feature_csv,
)
from interviewkit.errors import FeatureError


def _matrix(modality, names, rows, row_ids):
    return FeatureMatrix(
        np.asarray(rows, dtype=float),
        tuple(Column(n, modality) for n in names),
        tuple(row_ids),
    )


@pytest.fixture
def parts():
    ids = ("a", "b")
    rng = np.random.default_rng(3)
    return [
        _matrix("audio", ["zc", "en"], rng.normal(size=(2, 2)), ids),
        _matrix("video", ["nose_x"], rng.normal(size=(2, 1)), ids),
        _matrix("lexical", ["wpm", "upm", "fm"], rng.normal(size=(2, 3)), ids),
    ]


def test_full_mask_concatenates_in_modality_order(parts):
    fused = fuse_features(parts, ("lexical", "audio", "video"))  # order of mask irrelevant
    assert fused.n_cols == 6
    assert [c.modality for c in fused.columns] == ["audio"] * 2 + ["video"] + ["lexical"] * 3
    np.testing.assert_array_equal(fused.values[:, :2], parts[0].values)
    np.testing.assert_array_equal(fused.values[:, 2:3], parts[1].values)
    np.testing.assert_array_equal(fused.values[:, 3:], parts[2].values)


def test_single_modality_mask_is_identity(parts):
    fused = fuse_features([parts[0]], ("audio",))
    np.testing.assert_array_equal(fused.values, parts[0].values)
    assert fused.columns == parts[0].columns
    assert fused.row_ids == parts[0].row_ids


def test_permuted_row_ids_rejected(parts):
    flipped = FeatureMatrix(parts[1].values[::-1], parts[1].columns, parts[1].row_ids[::-1])
    with pytest.raises(FeatureError, match="row-id mismatch"):
        fuse_features([parts[0], flipped], ("audio", "video"))


def test_empty_mask_selection_rejected(parts):
    with pytest.raises(FeatureError, match="selects no part"):
        fuse_features([parts[0]], ("video",))
    with pytest.raises(FeatureError, match="non-empty"):
        fuse_features(parts, ())


def test_duplicate_modality_rejected(parts):
    with pytest.raises(FeatureError, match="duplicate modality"):
        fuse_features([parts[0], parts[0]], ("audio",))


def test_column_count_is_sum_of_parts(parts):
    fused = fuse_features(parts, ("audio", "video", "lexical"))
    assert fused.n_cols == sum(p.n_cols for p in parts)


def test_fusion_deterministic(parts):
    a = fuse_features(parts, ("audio", "video", "lexical"))
    b = fuse_features(parts, ("audio", "video", "lexical"))
    assert a.values.tobytes() == b.values.tobytes()
    assert a.columns == b.columns


def test_submask_columns_are_contiguous_subset(parts):
    full = fuse_features(parts, ("audio", "video", "lexical"))
    masks = [("audio",), ("video",), ("lexical",), ("audio", "video"),
             ("video", "lexical"), ("audio", "lexical")]
    full_names = list(full.column_names)
    for mask in masks:
        sub = fuse_features([p for p in parts if p.modalities()[0] in mask], mask)
        # every sub column appears in the full fusion, and each modality's
        # block is a contiguous run in the same order
        for name in sub.column_names:
            assert name in full_names
        positions = [full_names.index(n) for n in sub.column_names]
        by_modality = {}
        for col, pos in zip(sub.columns, positions):
            by_modality.setdefault(col.modality, []).append(pos)
        for block in by_modality.values():
            assert block == list(range(block[0], block[0] + len(block)))


def test_rejects_nan_and_duplicate_names():
    with pytest.raises(FeatureError, match="non-finite"):
        _matrix("audio", ["a"], [[np.nan]], ("x",))
    with pytest.raises(FeatureError, match="duplicate column names"):
        _matrix("audio", ["a", "a"], [[1.0, 2.0]], ("x",))


def test_shape_bookkeeping_errors():
    with pytest.raises(FeatureError, match="row_ids length"):
        _matrix("audio", ["a"], [[1.0], [2.0]], ("x",))
    with pytest.raises(FeatureError, match="column count"):
        _matrix("audio", ["a", "b"], [[1.0]], ("x",))


def test_mini_corpus_fused_width(mini_features):
    parts = [mini_features.parts[m] for m in ("audio", "video", "lexical")]
    widths = [p.n_cols for p in parts]
    assert widths == [39, 19, 15]  # canonical extractor widths
    fused = fuse_features(parts, ("audio", "video", "lexical"))
    assert fused.n_cols == sum(widths)
    assert all(c.modality == "audio" for c in fused.columns[:39])


def test_feature_csv_round_trip(tmp_path, mini_features):
    part = mini_features.parts["lexical"]
    path = tmp_path / "lex.csv"
    write_feature_csv(part, path)
    loaded = read_feature_csv(path, "lexical")
    assert loaded.column_names == part.column_names
    assert loaded.row_ids == part.row_ids
    np.testing.assert_array_equal(loaded.values, part.values)
