"""Short-term prosodic feature extraction from raw audio.

The signal is split into short-term windows (20-100 ms); each frame yields a
37-entry feature vector spanning the time domain (zero-crossing rate, energy,
energy entropy, RMS power, intensity, pitch), the frequency domain (centroid,
spread, entropy, flux, roll-off, computed from the one-sided DFT magnitude of
the Hamming-windowed frame), the cepstral domain (13 MFCCs via a 26-filter mel
bank), and a 12-bin chroma vector with its deviation. Per-recording features
are the frame means (optionally also standard deviations) plus duration and
frame count.

All functions are pure and deterministic; the same samples at the same sample
rate always produce bit-identical features.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FeatureVector
from .errors import FeatureError
from .wav import AudioSignal

#: Canonical per-frame feature order. Recording-level vectors append
#: duration_s and frame_count (and optionally a *_std block before them).
FRAME_FEATURE_NAMES: tuple[str, ...] = (
    "zcr",
    "energy",
    "energy_entropy",
    "rms_power",
    "intensity_db",
    "pitch_hz",
    "spec_centroid",
    "spec_spread",
    "spec_entropy",
    "spec_flux",
    "spec_rolloff",
    *[f"mfcc_{i}" for i in range(13)],
    *[f"chroma_{i}" for i in range(12)],
    "chroma_dev",
)

N_FRAME_FEATURES = len(FRAME_FEATURE_NAMES)

_LOG_FLOOR = 1e-10
PITCH_MIN_HZ = 50.0
PITCH_MAX_HZ = 500.0
PITCH_VOICING_THRESHOLD = 0.3
ROLLOFF_FRACTION = 0.90
N_MEL_FILTERS = 26
N_MFCC = 13
ENERGY_ENTROPY_BLOCKS = 10


@dataclass(frozen=True)
class FrameSpec:
    """Analysis window and hop, in seconds. Window must be 20-100 ms."""

    window_s: float = 0.050
    hop_s: float = 0.025

    def __post_init__(self) -> None:
        if not (0.020 <= self.window_s <= 0.100):
            raise FeatureError(f"window_s must be in [0.020, 0.100], got {self.window_s}")
        if not (0.0 < self.hop_s <= self.window_s):
            raise FeatureError(f"hop_s must be in (0, window_s], got {self.hop_s}")

    def window_samples(self, fs: int) -> int:
        return int(round(self.window_s * fs))

    def hop_samples(self, fs: int) -> int:
        return int(round(self.hop_s * fs))


def frame_signal(signal: AudioSignal, spec: FrameSpec) -> np.ndarray:
    """Slice the signal into frames of W samples at stride H.

    Returns an (n_frames, W) array with W = round(window_s*fs),
    H = round(hop_s*fs) and n_frames = floor((N - W)/H) + 1; a final partial
    window is dropped.

    Raises:
        FeatureError: If the signal is shorter than one window.
    """
    x = signal.samples
    w = spec.window_samples(signal.sample_rate_hz)
    h = spec.hop_samples(signal.sample_rate_hz)
    n = x.shape[0]
    if n < w:
        raise FeatureError(f"signal of {n} samples is shorter than one window ({w} samples)")
    count = (n - w) // h + 1
    starts = np.arange(count) * h
    return np.stack([x[s : s + w] for s in starts])


def dft_magnitude(frame: np.ndarray) -> np.ndarray:
    """One-sided DFT magnitude of a frame; bin b maps to frequency b*fs/W."""
    frame = np.asarray(frame, dtype=np.float64)
    if frame.size == 0:
        raise FeatureError("cannot transform an empty frame")
    return np.abs(np.fft.rfft(frame))


def hamming(width: int) -> np.ndarray:
    return np.hamming(width)


def time_domain_features(frame: np.ndarray, fs: int) -> tuple[float, float, float, float, float, float]:
    """(zcr, energy, energy_entropy, rms_power, intensity_db, pitch_hz).

    zcr counts strict sign flips (x[t]*x[t+1] < 0) over the W-1 adjacent
    pairs. Energy entropy uses the distribution of energy over 10 equal
    sub-blocks. Pitch comes from the normalized autocorrelation peak in the
    50-500 Hz band and is 0 when the peak is below the 0.3 voicing threshold.
    """
    energy = frame_energy(frame)
    return (
        zero_crossing_rate(frame),
        energy,
        energy_entropy(frame),
        float(np.sqrt(energy)),
        intensity_db(energy),
        pitch_autocorrelation(frame, fs),
    )


def zero_crossing_rate(frame: np.ndarray) -> float:
    frame = np.asarray(frame, dtype=np.float64)
    if frame.shape[0] < 2:
        raise FeatureError("zcr needs a frame of length >= 2")
    flips = frame[:-1] * frame[1:] < 0.0
    return float(np.count_nonzero(flips) / (frame.shape[0] - 1))


def frame_energy(frame: np.ndarray) -> float:
    frame = np.asarray(frame, dtype=np.float64)
    return float(np.mean(frame * frame))


def energy_entropy(frame: np.ndarray, n_blocks: int = ENERGY_ENTROPY_BLOCKS) -> float:
    """Shannon entropy (nats) of the energy distribution over equal sub-blocks."""
    frame = np.asarray(frame, dtype=np.float64)
    usable = (frame.shape[0] // n_blocks) * n_blocks
    if usable == 0:
        return 0.0
    blocks = frame[:usable].reshape(n_blocks, -1)
    block_energy = np.sum(blocks * blocks, axis=1)
    total = block_energy.sum()
    if total <= 0.0:
        return 0.0
    p = block_energy / total
    p = p[p > 0.0]
    return float(-np.sum(p * np.log(p)))


def intensity_db(energy: float) -> float:
    return float(10.0 * np.log10(energy + _LOG_FLOOR))


def pitch_autocorrelation(frame: np.ndarray, fs: int) -> float:
    """Fundamental frequency via the normalized autocorrelation peak.

    Searches lags corresponding to 50-500 Hz; returns 0.0 for unvoiced frames
    (peak below 0.3) or when the frame has no energy.
    """
    frame = np.asarray(frame, dtype=np.float64)
    w = frame.shape[0]
    r0 = float(np.dot(frame, frame))
    if r0 <= 0.0:
        return 0.0
    lag_min = int(np.ceil(fs / PITCH_MAX_HZ))
    lag_max = min(int(np.floor(fs / PITCH_MIN_HZ)), w - 1)
    if lag_min > lag_max:
        return 0.0
    corr = np.array([np.dot(frame[: w - lag], frame[lag:]) for lag in range(lag_min, lag_max + 1)])
    best = int(np.argmax(corr))
    if corr[best] / r0 < PITCH_VOICING_THRESHOLD:
        return 0.0
    return float(fs / (lag_min + best))


def spectral_features(
    spectrum: np.ndarray, prev_spectrum: np.ndarray, fs: int, window_samples: int
) -> tuple[float, float, float, float, float]:
    """(centroid, spread, entropy, flux, rolloff) from one-sided magnitudes.

    Centroid and spread treat the magnitude spectrum as a distribution over
    bin frequencies. Entropy is the Shannon entropy (nats) of the
    L1-normalized magnitudes; flux is the squared L2 distance between
    consecutive L1-normalized spectra (zero vector allowed for the first
    frame); roll-off is the lowest bin frequency at which cumulative squared
    magnitude reaches 90% of the total.
    """
    m = np.asarray(spectrum, dtype=np.float64)
    p = np.asarray(prev_spectrum, dtype=np.float64)
    if m.shape != p.shape:
        raise FeatureError("spectrum and prev_spectrum must have equal length")
    freqs = np.arange(m.shape[0]) * (fs / window_samples)

    total = m.sum()
    if total > 0.0:
        centroid = float(np.dot(freqs, m) / total)
        spread = float(np.sqrt(np.dot((freqs - centroid) ** 2, m) / total))
        probs = m / total
        nz = probs[probs > 0.0]
        entropy = float(-np.sum(nz * np.log(nz)))
    else:
        centroid = spread = entropy = 0.0

    m_hat = m / total if total > 0.0 else m
    p_total = p.sum()
    p_hat = p / p_total if p_total > 0.0 else p
    flux = float(np.sum((m_hat - p_hat) ** 2))

    power = m * m
    power_total = power.sum()
    if power_total > 0.0:
        cum = np.cumsum(power)
        idx = int(np.searchsorted(cum, ROLLOFF_FRACTION * power_total))
        rolloff = float(freqs[min(idx, m.shape[0] - 1)])
    else:
        rolloff = 0.0
    return centroid, spread, entropy, flux, rolloff


def mel_filterbank(n_filters: int, n_bins: int, fs: int, window_samples: int) -> np.ndarray:
    """Triangular mel filterbank over one-sided DFT bins, spanning [0, fs/2]."""

    def to_mel(f):
        return 2595.0 * np.log10(1.0 + np.asarray(f) / 700.0)

    def from_mel(mel):
        return 700.0 * (10.0 ** (np.asarray(mel) / 2595.0) - 1.0)

    edges_hz = from_mel(np.linspace(0.0, float(to_mel(fs / 2)), n_filters + 2))
    bin_freqs = np.arange(n_bins) * (fs / window_samples)
    bank = np.zeros((n_filters, n_bins))
    for i in range(n_filters):
        lo, mid, hi = edges_hz[i], edges_hz[i + 1], edges_hz[i + 2]
        rising = (bin_freqs - lo) / max(mid - lo, 1e-12)
        falling = (hi - bin_freqs) / max(hi - mid, 1e-12)
        bank[i] = np.clip(np.minimum(rising, falling), 0.0, None)
    return bank


def _dct_ii_matrix(n_out: int, n_in: int) -> np.ndarray:
    k = np.arange(n_out)[:, None]
    m = np.arange(n_in)[None, :]
    mat = np.cos(np.pi * k * (2 * m + 1) / (2 * n_in))
    mat *= np.sqrt(2.0 / n_in)
    mat[0] *= np.sqrt(0.5)
    return mat


def cepstral_features(spectrum: np.ndarray, fs: int, window_samples: int) -> np.ndarray:
    """First 13 MFCCs: orthonormal DCT-II of the log mel filter energies.

    Filter energies come from the magnitude spectrum and are floored at 1e-10
    before the log, so a zero spectrum yields a constant log vector whose DCT
    is nonzero only in coefficient 0.
    """
    m = np.asarray(spectrum, dtype=np.float64)
    bank = mel_filterbank(N_MEL_FILTERS, m.shape[0], fs, window_samples)
    energies = np.maximum(bank @ m, _LOG_FLOOR)
    return _dct_ii_matrix(N_MFCC, N_MEL_FILTERS) @ np.log(energies)


def chroma_features(spectrum: np.ndarray, fs: int, window_samples: int) -> tuple[np.ndarray, float]:
    """12-bin pitch-class energy profile and its standard deviation.

    Each bin with frequency >= 27.5 Hz contributes its squared magnitude to
    pitch class (round(12*log2(f/440)) + 69) mod 12; the profile is
    L1-normalized when any energy is present. Requires fs >= 8000.
    """
    if fs < 8000:
        raise FeatureError(f"chroma requires fs >= 8000, got {fs}")
    m = np.asarray(spectrum, dtype=np.float64)
    freqs = np.arange(m.shape[0]) * (fs / window_samples)
    audible = freqs >= 27.5
    chroma = np.zeros(12)
    if np.any(audible):
        midi = np.round(12.0 * np.log2(freqs[audible] / 440.0)).astype(np.int64) + 69
        np.add.at(chroma, midi % 12, m[audible] ** 2)
    total = chroma.sum()
    if total > 0.0:
        chroma = chroma / total
    return chroma, float(np.std(chroma))


def extract_frame_features(
    frame: np.ndarray, prev_spectrum: np.ndarray | None, fs: int
) -> tuple[np.ndarray, np.ndarray]:
    """Compute the canonical 37-entry vector for one frame.

    Returns (features, spectrum) so the caller can thread the spectrum into
    the next frame's flux. The DFT is taken on the Hamming-windowed frame;
    time-domain features use the raw frame.
    """
    frame = np.asarray(frame, dtype=np.float64)
    w = frame.shape[0]
    spectrum = dft_magnitude(frame * hamming(w))
    if prev_spectrum is None:
        prev_spectrum = np.zeros_like(spectrum)

    energy = frame_energy(frame)
    centroid, spread, s_entropy, flux, rolloff = spectral_features(spectrum, prev_spectrum, fs, w)
    mfcc = cepstral_features(spectrum, fs, w)
    chroma, chroma_dev = chroma_features(spectrum, fs, w)

    values = np.empty(N_FRAME_FEATURES)
    values[0] = zero_crossing_rate(frame)
    values[1] = energy
    values[2] = energy_entropy(frame)
    values[3] = np.sqrt(energy)
    values[4] = intensity_db(energy)
    values[5] = pitch_autocorrelation(frame, fs)
    values[6:11] = (centroid, spread, s_entropy, flux, rolloff)
    values[11:24] = mfcc
    values[24:36] = chroma
    values[36] = chroma_dev
    return values, spectrum


def frame_feature_matrix(signal: AudioSignal, spec: FrameSpec) -> np.ndarray:
    """Per-frame features for the whole signal, shape (n_frames, 37)."""
    frames = frame_signal(signal, spec)
    out = np.empty((frames.shape[0], N_FRAME_FEATURES))
    prev = None
    for i, frame in enumerate(frames):
        out[i], prev = extract_frame_features(frame, prev, signal.sample_rate_hz)
    return out


def recording_feature_names(include_std: bool = False) -> tuple[str, ...]:
    names = list(FRAME_FEATURE_NAMES)
    if include_std:
        names += [f"{n}_std" for n in FRAME_FEATURE_NAMES]
    return tuple(names + ["duration_s", "frame_count"])


def extract_recording_audio_features(
    signal: AudioSignal, spec: FrameSpec = FrameSpec(), include_std: bool = False
) -> FeatureVector:
    """Aggregate per-frame features into one named per-recording vector.

    The vector holds the frame means in canonical order (plus, when
    ``include_std`` is set, the per-entry standard deviations), followed by
    duration_s = N/fs and the frame count.
    """
    per_frame = frame_feature_matrix(signal, spec)
    blocks = [per_frame.mean(axis=0)]
    if include_std:
        blocks.append(per_frame.std(axis=0))
    blocks.append([signal.duration_s, float(per_frame.shape[0])])
    return FeatureVector(recording_feature_names(include_std), np.concatenate(blocks))
