"""Multimodal analysis of recorded interviews.

Ingests audio, facial-landmark tracks, and transcripts; extracts prosodic,
visual, and lexical features; fuses and selects them; trains four classifier
families to predict nine behavioral labels on a 1-7 scale; and renders
experiment tables and per-candidate feedback reports.
"""

__version__ = "0.1.0"

from .manifest import LABEL_NAMES, InterviewRecord, load_manifest
from .core import (
    Column,
    FeatureMatrix,
    FeatureVector,
    LabelVector,
    MODALITY_ORDER,
    fuse_features,
    matrix_from_rows,
    normalize_mask,
    read_feature_csv,
    write_feature_csv,
)
from .wav import AudioSignal, read_wav, write_wav
from .audio import (
    FRAME_FEATURE_NAMES,
    FrameSpec,
    chroma_features,
    cepstral_features,
    dft_magnitude,
    extract_recording_audio_features,
    frame_signal,
    recording_feature_names,
    spectral_features,
    time_domain_features,
)
from .visual import (
    HeadPose,
    LandmarkFrame,
    VISUAL_FEATURE_NAMES,
    aggregate_visual,
    euler_from_rotation,
    load_landmark_track,
    local_normalize,
    smile_ratio,
)
from .lexical import (
    LEXICAL_FEATURE_NAMES,
    LexiconSet,
    TONE_CATEGORIES,
    extract_recording_lexical_features,
    normalize_text,
    pos_counts,
    sentence_sentiment,
    speaking_style,
    tokenize,
    tone_scores,
)
from .preprocess import (
    SelectorState,
    StandardizerState,
    correlation_prune,
    f_test_pvalues,
    select_fdr_bh,
    select_fwe,
    select_k_best,
    standardize_apply,
    standardize_fit,
)
from .evaluation import FoldPlan, accuracy, iter_folds, stratified_kfold
from .config import ALL_MASKS, PipelineConfig
from .errors import (
    AudioFormatError,
    CacheError,
    FeatureError,
    InterviewKitError,
    LandmarkTrackError,
    ManifestError,
    TrainingError,
)
