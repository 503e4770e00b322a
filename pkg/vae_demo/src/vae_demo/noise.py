"""Latent-space channel corruption used during training and evaluation.

Mirrors the transmission toolkit's channel semantics on torch tensors:
composite uniform-plus-Gaussian noise scaled so the batch's measured
signal power over the scaled noise variance hits the target SNR, with an
optional slow Rayleigh gain drawn once per sample (one latent vector is
one frame).  The corruption is treated as data: no gradients flow through
the noise scale or the draws.
"""

from __future__ import annotations

import math

import torch

from .config import ChannelSpec


def inject_semantic_noise(
    z: torch.Tensor,
    spec: ChannelSpec,
    snr_db: float,
    generator: torch.Generator | None = None,
) -> tuple[torch.Tensor, torch.Tensor]:
    """Return (z_hat, gains) with z_hat = g * z + kappa * (U(a,b) + N(0, sigma_p2)).

    z is (B, L); gains is (B, 1).  snr_db = inf disables the noise but
    still draws fading gains when the spec enables them.
    """
    if z.ndim != 2:
        raise ValueError("z must be (batch, latent)")
    b = z.shape[0]
    if spec.rayleigh_sigma_h2 is None:
        gains = torch.ones(b, 1, dtype=z.dtype)
    else:
        # Rayleigh with E[g^2] = sigma_h2: scale * sqrt(-2 ln U)
        scale = math.sqrt(spec.rayleigh_sigma_h2 / 2.0)
        u = torch.rand(b, 1, generator=generator, dtype=z.dtype)
        gains = scale * torch.sqrt(-2.0 * torch.log(u.clamp_min(1e-12)))

    if math.isinf(snr_db):
        return gains * z, gains

    p_z = float(z.detach().pow(2).mean())
    if p_z == 0.0:
        return gains * z, gains
    var = spec.noise_variance()
    kappa = math.sqrt(p_z / (var * 10.0 ** (snr_db / 10.0)))
    uniform = spec.a + (spec.b - spec.a) * torch.rand(z.shape, generator=generator, dtype=z.dtype)
    gauss = math.sqrt(spec.sigma_p2) * torch.randn(z.shape, generator=generator, dtype=z.dtype)
    return gains * z + kappa * (uniform + gauss), gains
