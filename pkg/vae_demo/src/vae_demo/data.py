"""Toy image dataset: the bundled scikit-learn digits upsampled to 32x32.

The 8x8 digits ship with scikit-learn (no download), which keeps the demo
self-contained; nearest-neighbor upsampling to the network's 32x32 grid
gives 1797 grayscale images in [0, 1].
"""

from __future__ import annotations

import numpy as np
import torch
from sklearn.datasets import load_digits


def load_images() -> torch.Tensor:
    """All digit images as a (N, 1, 32, 32) float32 tensor in [0, 1]."""
    raw = load_digits().images / 16.0  # (N, 8, 8) in [0, 1]
    up = np.kron(raw, np.ones((1, 4, 4)))
    return torch.from_numpy(up[:, None, :, :].astype(np.float32))


def train_test_split(images: torch.Tensor, test_fraction: float = 0.2, seed: int = 0):
    n = images.shape[0]
    perm = torch.randperm(n, generator=torch.Generator().manual_seed(seed))
    n_test = int(round(n * test_fraction))
    return images[perm[n_test:]], images[perm[:n_test]]
