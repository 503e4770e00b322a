"""Convolutional encoder/decoder pair with a disentangling bottleneck.

Encoder feature maps run 32@32x32 -> 32@16x16 -> 64@8x8 -> 64@4x4 into a
256-unit dense layer and two parallel L-unit heads (mean and log-variance
of the approximate posterior).  The decoder mirrors it back up to a
1-channel 32x32 Bernoulli parameter map (grayscale data; the same stack
ends in 3 channels for RGB).
"""

from __future__ import annotations

from typing import NamedTuple

import torch
from torch import nn

SIGMA_FLOOR = 1e-6


class EncoderOutput(NamedTuple):
    mu: torch.Tensor
    sigma: torch.Tensor


def reparameterize(out: EncoderOutput, epsilon: torch.Tensor) -> torch.Tensor:
    """z = mu + sigma * eps, elementwise."""
    return out.mu + out.sigma * epsilon


def kl_to_prior(out: EncoderOutput) -> torch.Tensor:
    """KL(N(mu, sigma^2) || N(0, I)) in nats, summed over latent dims.

    Returns a scalar for a single vector, a length-B tensor for a batch.
    """
    var = out.sigma**2
    kl = 0.5 * (out.mu**2 + var - 1.0 - torch.log(var))
    return kl.sum(dim=-1)


class ConvEncoder(nn.Module):
    def __init__(self, latent_dim: int = 32):
        super().__init__()
        self.latent_dim = latent_dim
        self.features = nn.Sequential(
            nn.Conv2d(1, 32, kernel_size=3, stride=1, padding=1),  # 32@32x32
            nn.ReLU(),
            nn.Conv2d(32, 32, kernel_size=4, stride=2, padding=1),  # 32@16x16
            nn.ReLU(),
            nn.Conv2d(32, 64, kernel_size=4, stride=2, padding=1),  # 64@8x8
            nn.ReLU(),
            nn.Conv2d(64, 64, kernel_size=4, stride=2, padding=1),  # 64@4x4
            nn.ReLU(),
            nn.Flatten(),
            nn.Linear(64 * 4 * 4, 256),
            nn.ReLU(),
        )
        self.mu_head = nn.Linear(256, latent_dim)
        self.logvar_head = nn.Linear(256, latent_dim)

    def forward(self, x: torch.Tensor) -> EncoderOutput:
        h = self.features(x)
        mu = self.mu_head(h)
        sigma = torch.exp(0.5 * self.logvar_head(h)).clamp(min=SIGMA_FLOOR)
        return EncoderOutput(mu=mu, sigma=sigma)


class ConvDecoder(nn.Module):
    def __init__(self, latent_dim: int = 32):
        super().__init__()
        self.latent_dim = latent_dim
        self.dense = nn.Sequential(
            nn.Linear(latent_dim, 32),
            nn.ReLU(),
            nn.Linear(32, 256),
            nn.ReLU(),
            nn.Linear(256, 64 * 4 * 4),
            nn.ReLU(),
        )
        self.deconv = nn.Sequential(
            nn.ConvTranspose2d(64, 32, kernel_size=4, stride=2, padding=1),  # 32@8x8
            nn.ReLU(),
            nn.ConvTranspose2d(32, 32, kernel_size=4, stride=2, padding=1),  # 32@16x16
            nn.ReLU(),
            nn.ConvTranspose2d(32, 1, kernel_size=4, stride=2, padding=1),  # 1@32x32
            nn.Sigmoid(),
        )

    def forward(self, z: torch.Tensor) -> torch.Tensor:
        h = self.dense(z).view(-1, 64, 4, 4)
        return self.deconv(h)
