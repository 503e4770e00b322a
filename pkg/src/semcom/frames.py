"""Feature frames and the SFF1 wire format.

SFF1 layout (all integers little-endian, independent of host byte order):

    bytes 0-3   magic "SFF1"
    byte  4     version, currently 1
    byte  5     flags; bit 0 set when values were quantized
    bytes 6-7   reserved, zero
    bytes 8-11  feature count L, uint32
    bytes 12-15 low 32 bits of the frame id, uint32
    next ceil(L/8) bytes    selection mask, LSB-first (feature 0 = byte 0 bit 0)
    next 4*popcount(mask)   selected values, IEEE-754 float32, index order

Only selected values travel; unselected slots come back as NaN from the
decoder and are filled in by complete_features.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import BinaryIO, Iterable, Iterator

import numpy as np

from .errors import (
    BadMagic,
    EmptySelection,
    FrameFormatError,
    LengthMismatch,
    TruncatedFrame,
    VersionUnsupported,
)
from .rng import COMPLETION_STREAM, make_rng

MAGIC = b"SFF1"
VERSION = 1
HEADER_LEN = 16
FLAG_QUANTIZED = 0x01


@dataclass(frozen=True)
class FeatureFrame:
    """Ordered feature vector with a selection mask and a frame id."""

    features: np.ndarray
    selection_mask: np.ndarray
    frame_id: int = 0
    quantized: bool = False

    def __init__(self, features, selection_mask, frame_id: int = 0, quantized: bool = False):
        feats = np.asarray(features, dtype=np.float64).copy()
        mask = np.asarray(selection_mask, dtype=bool).copy()
        if feats.ndim != 1 or feats.size < 1:
            raise ValueError("features must be a non-empty 1-D vector")
        if mask.shape != feats.shape:
            raise LengthMismatch(f"mask length {mask.size} != feature length {feats.size}")
        if not 0 <= int(frame_id) < 2**64:
            raise ValueError("frame_id must fit in 64 bits")
        feats.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "selection_mask", mask)
        object.__setattr__(self, "frame_id", int(frame_id))
        object.__setattr__(self, "quantized", bool(quantized))

    def __len__(self) -> int:
        return self.features.size

    @property
    def n_selected(self) -> int:
        return int(self.selection_mask.sum())


def encoded_length(n_features: int, n_selected: int) -> int:
    return HEADER_LEN + math.ceil(n_features / 8) + 4 * n_selected


def select_features(frame: FeatureFrame) -> np.ndarray:
    """The masked feature values, in index order."""
    if frame.n_selected == 0:
        raise EmptySelection(f"frame {frame.frame_id} selects no features")
    return frame.features[frame.selection_mask].copy()


@dataclass(frozen=True)
class CompletionPolicy:
    """How the receiver fills feature slots that were never transmitted.

    prior_mean writes the mean of the unit Gaussian prior (zero);
    prior_sample draws from that prior with a fixed seed.
    """

    mode: str = "prior_mean"
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("prior_mean", "prior_sample"):
            raise ValueError(f"unknown completion mode {self.mode!r}")


def complete_features(
    received,
    mask,
    policy: CompletionPolicy,
    frame_id: int = 0,
) -> FeatureFrame:
    """Assemble a full frame from received selected values.

    Selected slots take the received values in index order; the rest are
    filled per the policy.  prior_sample draws are derived from
    (policy.seed, frame_id) so repeated runs are bit-identical and
    different frames get independent fills.
    """
    mask = np.asarray(mask, dtype=bool)
    received = np.asarray(received, dtype=np.float64)
    n_sel = int(mask.sum())
    if received.size != n_sel:
        raise LengthMismatch(f"got {received.size} values for {n_sel} selected slots")
    features = np.empty(mask.size, dtype=np.float64)
    features[mask] = received
    if policy.mode == "prior_mean":
        features[~mask] = 0.0
    else:
        rng = make_rng(policy.seed, COMPLETION_STREAM, frame_id)
        features[~mask] = rng.standard_normal(mask.size - n_sel)
    return FeatureFrame(features, mask, frame_id=frame_id)


def encode_frame(frame: FeatureFrame) -> bytes:
    """Serialize one frame to SFF1 bytes."""
    n = len(frame)
    flags = FLAG_QUANTIZED if frame.quantized else 0
    header = struct.pack(
        "<4sBBHII", MAGIC, VERSION, flags, 0, n, frame.frame_id & 0xFFFFFFFF
    )
    mask_bytes = np.packbits(frame.selection_mask, bitorder="little").tobytes()
    values = frame.features[frame.selection_mask].astype("<f4").tobytes()
    return header + mask_bytes + values


def decode_frame(data: bytes) -> FeatureFrame:
    """Exact inverse of encode_frame.

    Unselected feature slots are returned as NaN (absent); the caller is
    expected to run complete_features.  The frame id comes back as the low
    32 bits written on the wire.
    """
    if len(data) < HEADER_LEN:
        if len(data) >= 4 and data[:4] != MAGIC:
            raise BadMagic(f"expected {MAGIC!r}, got {data[:4]!r}")
        raise TruncatedFrame(f"{len(data)} bytes is shorter than the {HEADER_LEN}-byte header")
    magic, version, flags, _reserved, n, frame_id = struct.unpack("<4sBBHII", data[:HEADER_LEN])
    if magic != MAGIC:
        raise BadMagic(f"expected {MAGIC!r}, got {magic!r}")
    if version != VERSION:
        raise VersionUnsupported(f"version {version} (this reader supports {VERSION})")
    if n < 1:
        raise FrameFormatError("frame declares zero features")
    mask_len = math.ceil(n / 8)
    if len(data) < HEADER_LEN + mask_len:
        raise TruncatedFrame("mask bytes missing")
    mask_bits = np.unpackbits(
        np.frombuffer(data, dtype=np.uint8, count=mask_len, offset=HEADER_LEN),
        bitorder="little",
    )[:n].astype(bool)
    n_sel = int(mask_bits.sum())
    expected = encoded_length(n, n_sel)
    if len(data) < expected:
        raise TruncatedFrame(f"need {expected} bytes, got {len(data)}")
    if len(data) > expected:
        raise FrameFormatError(f"{len(data) - expected} trailing bytes after the frame")
    values = np.frombuffer(data, dtype="<f4", count=n_sel, offset=HEADER_LEN + mask_len)
    features = np.full(n, np.nan)
    features[mask_bits] = values.astype(np.float64)
    return FeatureFrame(features, mask_bits, frame_id=frame_id, quantized=bool(flags & FLAG_QUANTIZED))


def write_frames(stream: BinaryIO, frames: Iterable[FeatureFrame]) -> int:
    """Append frames back-to-back to a binary stream; returns bytes written."""
    total = 0
    for frame in frames:
        data = encode_frame(frame)
        stream.write(data)
        total += len(data)
    return total


def read_frames(stream: BinaryIO) -> Iterator[FeatureFrame]:
    """Yield frames from a back-to-back SFF1 stream until EOF."""
    while True:
        header = stream.read(HEADER_LEN)
        if not header:
            return
        if len(header) < HEADER_LEN:
            raise TruncatedFrame("stream ended inside a frame header")
        _, _, _, _, n, _ = struct.unpack("<4sBBHII", header)
        mask_len = math.ceil(max(n, 1) / 8)
        mask_bytes = stream.read(mask_len)
        if len(mask_bytes) < mask_len:
            raise TruncatedFrame("stream ended inside a frame mask")
        n_sel = int(np.unpackbits(np.frombuffer(mask_bytes, dtype=np.uint8), bitorder="little")[:n].sum())
        value_bytes = stream.read(4 * n_sel)
        if len(value_bytes) < 4 * n_sel:
            raise TruncatedFrame("stream ended inside frame values")
        yield decode_frame(header + mask_bytes + value_bytes)
