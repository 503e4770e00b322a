"""Robust training objective with a power-weighted reconstruction term.

The reconstruction score per pixel, with Bernoulli parameter f and target
x in [0, 1], is the limit-normalized eta estimator

    ((eta + 1) / eta) (f_obs^eta - 1) - (f1^(1+eta) + f0^(1+eta) - 1)

where f_obs = f^x (1-f)^(1-x) and f1, f0 are the probabilities of the two
pixel outcomes.  Model-independent constants are dropped so the eta -> 0
limit is exactly the Bernoulli log-likelihood; eta below 1e-6 switches to
that log-likelihood branch outright.  Raising eta down-weights pixels the
model finds implausible, which is what buys robustness to corrupted
latents.  The full loss to minimize is -reconstruction + beta * KL.
"""

from __future__ import annotations

import torch

from .config import VaeConfig
from .model import EncoderOutput, kl_to_prior

ETA_SWITCH = 1e-6
PROB_EPS = 1e-7


def bernoulli_log_likelihood(probs: torch.Tensor, targets: torch.Tensor) -> torch.Tensor:
    """Per-sample log-likelihood, summed over pixels (nats)."""
    f = probs.clamp(PROB_EPS, 1.0 - PROB_EPS)
    ll = targets * torch.log(f) + (1.0 - targets) * torch.log(1.0 - f)
    return ll.flatten(start_dim=1).sum(dim=1)


def eta_reconstruction(probs: torch.Tensor, targets: torch.Tensor, eta: float) -> torch.Tensor:
    """Per-sample robust reconstruction score, summed over pixels (nats).

    expm1 keeps the f^eta - 1 and f^(1+eta) - f differences accurate for
    small eta, where direct powers cancel catastrophically in float32.
    """
    if eta < ETA_SWITCH:
        return bernoulli_log_likelihood(probs, targets)
    f = probs.clamp(PROB_EPS, 1.0 - PROB_EPS)
    log_f1 = torch.log(f)
    log_f0 = torch.log(1.0 - f)
    log_f_obs = targets * log_f1 + (1.0 - targets) * log_f0
    observed = ((eta + 1.0) / eta) * torch.expm1(eta * log_f_obs)
    mass = f * torch.expm1(eta * log_f1) + (1.0 - f) * torch.expm1(eta * log_f0)
    return (observed - mass).flatten(start_dim=1).sum(dim=1)


def robust_loss(
    batch: torch.Tensor,
    decoder_probs: torch.Tensor,
    encoder_out: EncoderOutput,
    cfg: VaeConfig,
) -> torch.Tensor:
    """Scalar training loss: -reconstruction + beta * KL, batch mean."""
    recon = eta_reconstruction(decoder_probs, batch, cfg.eta)
    kl = kl_to_prior(encoder_out)
    return (-recon + cfg.beta * kl).mean()
