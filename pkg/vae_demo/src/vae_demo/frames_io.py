"""Bridging images to feature frames on the SFF1 wire."""

from __future__ import annotations

import io

import numpy as np
import torch

from .model import EncoderOutput
from .sff import Frame, decode, read_stream, write_stream
from .training import TrainedModel


def export_frames(model: TrainedModel, images: torch.Tensor, mask) -> bytes:
    """Encode each image's posterior-mean embedding as one SFF1 frame."""
    mask = np.asarray(mask, dtype=bool)
    if mask.size != model.cfg.latent_dim:
        raise ValueError(f"mask length {mask.size} != latent dim {model.cfg.latent_dim}")
    mu = model.embed(images).numpy().astype(np.float32).astype(np.float64)
    buf = io.BytesIO()
    write_stream(
        buf, (Frame(values=mu[i], mask=mask, frame_id=i) for i in range(mu.shape[0]))
    )
    return buf.getvalue()


def decode_frames(model: TrainedModel, data: bytes, fill_value: float = 0.0) -> torch.Tensor:
    """Decode an SFF1 stream back to images; absent slots take fill_value
    (the unit-Gaussian prior mean by default)."""
    frames = list(read_stream(io.BytesIO(data)))
    z = np.stack([np.where(np.isnan(f.values), fill_value, f.values) for f in frames])
    return model.decode(torch.from_numpy(z.astype(np.float32)))


def traversal_grid(model: TrainedModel, image: torch.Tensor, slots, values) -> torch.Tensor:
    """Decode a grid varying one latent slot per row over the given values,
    holding the rest of the embedding fixed."""
    mu = model.embed(image[None])[0]
    rows = []
    for slot in slots:
        z = mu.repeat(len(values), 1)
        z[:, slot] = torch.as_tensor(values, dtype=z.dtype)
        rows.append(model.decode(z))
    return torch.stack(rows)  # (slots, values, 1, H, W)
