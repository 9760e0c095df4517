"""Transcript cleaning, tokenization, and lexicon-driven text features.

Sentences are segmented on ./!/? before punctuation is stripped (boundaries
are unrecoverable afterwards); text is lowercased, diacritics folded, and
whitespace collapsed. Features cover speaking style rates, per-sentence
sentiment from a word->{-1,0,1} lexicon, six tone-category means from a
weighted tone lexicon, and noun/verb/adjective counts from a pluggable tagger
(the bundled one combines a word lexicon with suffix heuristics).
"""

from __future__ import annotations

import json
import re
import string
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .core import FeatureVector
from .errors import FeatureError

TONE_CATEGORIES = ("Joy", "Sadness", "Tentative", "Analytical", "Fear", "Anger")

LEXICAL_FEATURE_NAMES: tuple[str, ...] = (
    "words_per_min",
    "unique_words_per_min",
    "unique_word_count",
    "filler_per_min",
    "sentiment_mean",
    "tone_joy",
    "tone_sadness",
    "tone_tentative",
    "tone_analytical",
    "tone_fear",
    "tone_anger",
    "noun_count",
    "verb_count",
    "adjective_count",
    "sentence_count",
)

_SENTENCE_SPLIT = re.compile(r"[.!?]+")
_WHITESPACE = re.compile(r"\s+")


@dataclass(frozen=True)
class NormalizedText:
    """Cleaned transcript text with its sentence segmentation."""

    text: str
    sentences: tuple[str, ...]


def _clean_fragment(fragment: str) -> str:
    fragment = fragment.lower()
    fragment = unicodedata.normalize("NFKD", fragment)
    out = []
    for ch in fragment:
        if unicodedata.combining(ch):
            continue  # accent marks fold to the base letter
        if unicodedata.category(ch).startswith("P") or ch in string.punctuation:
            out.append(" ")
        else:
            out.append(ch)
    return _WHITESPACE.sub(" ", "".join(out)).strip()


def normalize_text(raw: str) -> NormalizedText:
    """Lowercase, strip punctuation/diacritics, collapse whitespace.

    Sentence boundaries at . ! ? are recorded first; empty fragments (e.g.
    from "!!" runs) are dropped. Idempotent on its own output text.
    """
    sentences = tuple(s for s in (_clean_fragment(f) for f in _SENTENCE_SPLIT.split(raw)) if s)
    text = _clean_fragment(raw)
    return NormalizedText(text=text, sentences=sentences)


def tokenize(cleaned: str) -> list[str]:
    """Split normalized text on single spaces; empty input gives no tokens."""
    return cleaned.split(" ") if cleaned else []


def speaking_style(
    tokens: Sequence[str], duration_s: float, filler_lexicon: frozenset[str]
) -> tuple[float, float, int, float]:
    """(words_per_min, unique_words_per_min, unique_word_count, filler_per_min).

    Fillers are counted as single tokens plus two-token phrases (entries
    containing a space, e.g. "you know") found in the filler lexicon.
    """
    if duration_s <= 0:
        raise FeatureError(f"duration_s must be positive, got {duration_s}")
    minutes = duration_s / 60.0
    unique_count = len(set(tokens))

    unigrams = {f for f in filler_lexicon if " " not in f}
    bigrams = {tuple(f.split(" ")) for f in filler_lexicon if f.count(" ") == 1}
    filler_count = sum(1 for t in tokens if t in unigrams)
    filler_count += sum(1 for pair in zip(tokens, tokens[1:]) if pair in bigrams)

    return (
        len(tokens) / minutes,
        unique_count / minutes,
        unique_count,
        filler_count / minutes,
    )


def sentence_sentiment(sentence_tokens: Sequence[str], lexicon: Mapping[str, int]) -> int:
    """Sum of word sentiments (-1, 0, +1); unknown words count 0."""
    return sum(lexicon.get(token, 0) for token in sentence_tokens)


def tone_scores(sentences: Sequence[Sequence[str]], tone_lexicon: Mapping[str, Mapping[str, float]]) -> np.ndarray:
    """Mean per-category tone share across sentences, in TONE_CATEGORIES order.

    Each sentence's category weights are summed over its tokens and
    L1-normalized across the six categories when anything matched, so a
    sentence contributes a distribution (or all zeros).
    """
    if not sentences:
        return np.zeros(len(TONE_CATEGORIES))
    per_sentence = np.zeros((len(sentences), len(TONE_CATEGORIES)))
    for i, tokens in enumerate(sentences):
        for token in tokens:
            weights = tone_lexicon.get(token)
            if weights:
                for j, cat in enumerate(TONE_CATEGORIES):
                    per_sentence[i, j] += weights.get(cat, 0.0)
        total = per_sentence[i].sum()
        if total > 0.0:
            per_sentence[i] /= total
    return per_sentence.mean(axis=0)


# -- POS tagging -------------------------------------------------------------

PosTagger = Callable[[Sequence[str]], list[str]]

_NOUN_SUFFIXES = ("tion", "sion", "ness", "ment", "ance", "ence", "ship", "ity", "ism")
_VERB_SUFFIXES = ("ize", "ise", "ify")
_ADJ_SUFFIXES = ("ous", "ful", "ive", "able", "ible", "less")


class SuffixLexiconTagger:
    """Default tagger: word lexicon first, then suffix heuristics, else 'other'."""

    def __init__(self, lexicon: Mapping[str, str]):
        self.lexicon = dict(lexicon)

    def __call__(self, tokens: Sequence[str]) -> list[str]:
        return [self._tag(t) for t in tokens]

    def _tag(self, token: str) -> str:
        known = self.lexicon.get(token)
        if known is not None:
            return known
        if token.endswith(_NOUN_SUFFIXES):
            return "noun"
        if token.endswith(_VERB_SUFFIXES):
            return "verb"
        if len(token) >= 5 and token.endswith(("ing", "ed")):
            return "verb"
        if token.endswith(_ADJ_SUFFIXES):
            return "adj"
        return "other"


def pos_counts(tokens: Sequence[str], tagger: PosTagger) -> tuple[int, int, int]:
    """(noun_count, verb_count, adjective_count) over all tokens."""
    tags = tagger(tokens)
    return tags.count("noun"), tags.count("verb"), tags.count("adj")


# -- bundled lexicons ---------------------------------------------------------


def _load_bundled(name: str):
    with resources.files("interviewkit.data").joinpath(name).open(encoding="utf-8") as fh:
        return json.load(fh)


def load_tone_lexicon(path: str | Path | None = None) -> dict[str, dict[str, float]]:
    raw = _load_bundled("tone_lexicon.json") if path is None else json.loads(Path(path).read_text(encoding="utf-8"))
    for word, weights in raw.items():
        for cat, weight in weights.items():
            if cat not in TONE_CATEGORIES:
                raise FeatureError(f"tone lexicon: unknown category {cat!r} for word {word!r}")
            if not (isinstance(weight, (int, float)) and weight >= 0 and np.isfinite(weight)):
                raise FeatureError(f"tone lexicon: invalid weight for {word!r}/{cat}")
    return raw


def load_sentiment_lexicon(path: str | Path | None = None) -> dict[str, int]:
    raw = _load_bundled("sentiment_lexicon.json") if path is None else json.loads(Path(path).read_text(encoding="utf-8"))
    for word, value in raw.items():
        if value not in (-1, 0, 1):
            raise FeatureError(f"sentiment lexicon: value for {word!r} must be -1, 0, or 1")
    return raw


def load_filler_lexicon(path: str | Path | None = None) -> frozenset[str]:
    raw = _load_bundled("filler_lexicon.json") if path is None else json.loads(Path(path).read_text(encoding="utf-8"))
    return frozenset(raw["fillers"])


def load_pos_lexicon(path: str | Path | None = None) -> dict[str, str]:
    raw = _load_bundled("pos_lexicon.json") if path is None else json.loads(Path(path).read_text(encoding="utf-8"))
    allowed = {"noun", "verb", "adj", "other"}
    for word, tag in raw.items():
        if tag not in allowed:
            raise FeatureError(f"pos lexicon: tag for {word!r} must be one of {sorted(allowed)}")
    return raw


def default_tagger() -> SuffixLexiconTagger:
    return SuffixLexiconTagger(load_pos_lexicon())


# -- per-recording assembly ----------------------------------------------------


@dataclass(frozen=True)
class LexiconSet:
    """The lexicons feeding one extraction run."""

    tone: Mapping[str, Mapping[str, float]]
    sentiment: Mapping[str, int]
    fillers: frozenset[str]
    tagger: PosTagger

    @classmethod
    def bundled(cls) -> "LexiconSet":
        return cls(
            tone=load_tone_lexicon(),
            sentiment=load_sentiment_lexicon(),
            fillers=load_filler_lexicon(),
            tagger=default_tagger(),
        )


def extract_recording_lexical_features(
    raw_text: str, duration_s: float, lexicons: LexiconSet | None = None
) -> FeatureVector:
    """Compute the canonical 15-entry lexical vector for one transcript."""
    if lexicons is None:
        lexicons = LexiconSet.bundled()
    normalized = normalize_text(raw_text)
    tokens = tokenize(normalized.text)
    sentence_tokens = [tokenize(s) for s in normalized.sentences]

    wpm, uwpm, unique_count, fpm = speaking_style(tokens, duration_s, lexicons.fillers)
    if sentence_tokens:
        sentiments = [sentence_sentiment(s, lexicons.sentiment) for s in sentence_tokens]
        sentiment_mean = float(np.mean(sentiments))
    else:
        sentiment_mean = 0.0
    tones = tone_scores(sentence_tokens, lexicons.tone)
    nouns, verbs, adjectives = pos_counts(tokens, lexicons.tagger)

    values = np.array(
        [wpm, uwpm, float(unique_count), fpm, sentiment_mean, *tones,
         float(nouns), float(verbs), float(adjectives), float(len(sentence_tokens))]
    )
    return FeatureVector(LEXICAL_FEATURE_NAMES, values)
