"""Reader/writer for the SFF1 feature-frame wire format.

Implements the published byte layout so frames can be exchanged with the
transmission toolkit: 16-byte header (magic 'SFF1', version, flags,
reserved, L, low 32 id bits, little-endian), LSB-first selection mask,
then selected values as little-endian float32 in index order.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import BinaryIO, Iterable, Iterator

import numpy as np

MAGIC = b"SFF1"
VERSION = 1
HEADER = struct.Struct("<4sBBHII")


@dataclass(frozen=True)
class Frame:
    values: np.ndarray  # full-length vector; NaN in unselected slots on read
    mask: np.ndarray
    frame_id: int = 0
    quantized: bool = False


def encode(frame: Frame) -> bytes:
    mask = np.asarray(frame.mask, dtype=bool)
    values = np.asarray(frame.values, dtype=np.float64)
    if values.shape != mask.shape or values.ndim != 1 or values.size == 0:
        raise ValueError("values and mask must be matching non-empty vectors")
    header = HEADER.pack(
        MAGIC, VERSION, 0x01 if frame.quantized else 0x00, 0, values.size, frame.frame_id & 0xFFFFFFFF
    )
    mask_bytes = np.packbits(mask, bitorder="little").tobytes()
    payload = values[mask].astype("<f4").tobytes()
    return header + mask_bytes + payload


def decode(data: bytes) -> Frame:
    if len(data) < HEADER.size:
        raise ValueError("short frame")
    magic, version, flags, _, n, frame_id = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ValueError(f"unsupported version {version}")
    mask_len = math.ceil(n / 8)
    mask = np.unpackbits(
        np.frombuffer(data, dtype=np.uint8, count=mask_len, offset=HEADER.size), bitorder="little"
    )[:n].astype(bool)
    n_sel = int(mask.sum())
    expected = HEADER.size + mask_len + 4 * n_sel
    if len(data) != expected:
        raise ValueError(f"expected {expected} bytes, got {len(data)}")
    values = np.full(n, np.nan)
    values[mask] = np.frombuffer(data, dtype="<f4", count=n_sel, offset=HEADER.size + mask_len)
    return Frame(values=values, mask=mask, frame_id=frame_id, quantized=bool(flags & 0x01))


def write_stream(fh: BinaryIO, frames: Iterable[Frame]) -> int:
    total = 0
    for frame in frames:
        data = encode(frame)
        fh.write(data)
        total += len(data)
    return total


def read_stream(fh: BinaryIO) -> Iterator[Frame]:
    while True:
        header = fh.read(HEADER.size)
        if not header:
            return
        if len(header) < HEADER.size:
            raise ValueError("stream ended inside a header")
        _, _, _, _, n, _ = HEADER.unpack(header)
        mask_len = math.ceil(max(n, 1) / 8)
        mask_bytes = fh.read(mask_len)
        mask = np.unpackbits(np.frombuffer(mask_bytes, dtype=np.uint8), bitorder="little")[:n]
        payload = fh.read(4 * int(mask.sum()))
        yield decode(header + mask_bytes + payload)
