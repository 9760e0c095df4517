"""Minimal RIFF/WAVE reader for 16-bit PCM audio.

Walks the chunk list directly (rather than trusting file length fields) so
truncated files are reported precisely. Only uncompressed 16-bit PCM with one
or two channels is accepted; stereo is downmixed by per-sample channel
average and samples are scaled by 1/32768 into [-1, 1].
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import AudioFormatError

WAVE_FORMAT_PCM = 0x0001


@dataclass(frozen=True)
class AudioSignal:
    """Mono float samples in [-1, 1] at an explicit sample rate."""

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or samples.shape[0] == 0:
            raise AudioFormatError("audio signal must be a non-empty 1-D array")
        if self.sample_rate_hz <= 0:
            raise AudioFormatError(f"sample rate must be positive, got {self.sample_rate_hz}")
        if not np.all(np.isfinite(samples)):
            raise AudioFormatError("audio signal contains non-finite samples")
        if samples.min() < -1.0 or samples.max() > 1.0:
            raise AudioFormatError("audio samples must lie in [-1, 1]")

    @property
    def duration_s(self) -> float:
        return self.samples.shape[0] / self.sample_rate_hz


def _read_exact(fh, n: int, what: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise AudioFormatError(f"truncated chunk: expected {n} bytes for {what}, got {len(data)}")
    return data


def read_wav(path: str | Path) -> AudioSignal:
    """Read a RIFF/WAVE PCM16 file (mono or stereo, any sample rate).

    Raises:
        AudioFormatError: For non-RIFF input, unsupported codec / bit depth /
            channel count, truncated chunks, or a zero-length data chunk.
    """
    path = Path(path)
    if not path.is_file():
        raise AudioFormatError(f"audio file not found: {path}")

    with path.open("rb") as fh:
        header = _read_exact(fh, 12, "RIFF header")
        if header[0:4] != b"RIFF" or header[8:12] != b"WAVE":
            raise AudioFormatError(f"{path}: not a RIFF/WAVE file")

        fmt = None
        data = None
        while True:
            chunk_header = fh.read(8)
            if len(chunk_header) == 0:
                break
            if len(chunk_header) < 8:
                raise AudioFormatError(f"{path}: truncated chunk header")
            chunk_id, chunk_size = struct.unpack("<4sI", chunk_header)
            if chunk_id == b"fmt ":
                if chunk_size < 16:
                    raise AudioFormatError(f"{path}: fmt chunk too short ({chunk_size} bytes)")
                body = _read_exact(fh, chunk_size, "fmt chunk")
                fmt = struct.unpack("<HHIIHH", body[:16])
            elif chunk_id == b"data":
                data = _read_exact(fh, chunk_size, "data chunk")
            else:
                # Unknown chunk (LIST, fact, ...): skip its payload.
                _read_exact(fh, chunk_size, f"{chunk_id!r} chunk")
            if chunk_size % 2 == 1:
                fh.read(1)  # chunks are word-aligned

    if fmt is None:
        raise AudioFormatError(f"{path}: missing fmt chunk")
    if data is None:
        raise AudioFormatError(f"{path}: missing data chunk")

    format_tag, channels, sample_rate, _byte_rate, _block_align, bits = fmt
    if format_tag != WAVE_FORMAT_PCM:
        raise AudioFormatError(f"{path}: unsupported codec (format tag 0x{format_tag:04x}, need PCM)")
    if bits != 16:
        raise AudioFormatError(f"{path}: unsupported bit depth {bits} (need 16)")
    if channels not in (1, 2):
        raise AudioFormatError(f"{path}: unsupported channel count {channels} (need mono or stereo)")
    if len(data) == 0:
        raise AudioFormatError(f"{path}: zero-length data chunk")
    if len(data) % (2 * channels) != 0:
        raise AudioFormatError(f"{path}: data chunk length {len(data)} is not a whole number of frames")

    raw = np.frombuffer(data, dtype="<i2").astype(np.float64)
    if channels == 2:
        raw = raw.reshape(-1, 2).mean(axis=1)
    return AudioSignal(raw / 32768.0, sample_rate)


def write_wav(path: str | Path, samples: np.ndarray, sample_rate_hz: int, channels: int = 1) -> None:
    """Write float samples in [-1, 1] as PCM16 (test fixtures and demos)."""
    samples = np.asarray(samples, dtype=np.float64)
    if channels == 1 and samples.ndim == 1:
        interleaved = samples
    elif samples.ndim == 2 and samples.shape[1] == channels:
        interleaved = samples.reshape(-1)
    else:
        raise AudioFormatError(f"samples shape {samples.shape} does not match {channels} channel(s)")
    pcm = np.clip(np.rint(interleaved * 32768.0), -32768, 32767).astype("<i2")
    data = pcm.tobytes()
    fmt = struct.pack("<HHIIHH", WAVE_FORMAT_PCM, channels, sample_rate_hz,
                      sample_rate_hz * 2 * channels, 2 * channels, 16)
    with Path(path).open("wb") as fh:
        fh.write(b"RIFF")
        fh.write(struct.pack("<I", 4 + 8 + len(fmt) + 8 + len(data)))
        fh.write(b"WAVE")
        fh.write(b"fmt " + struct.pack("<I", len(fmt)) + fmt)
        fh.write(b"data" + struct.pack("<I", len(data)) + data)
        if len(data) % 2 == 1:
            fh.write(b"\x00")
