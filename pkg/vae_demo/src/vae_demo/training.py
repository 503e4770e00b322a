"""Training loop with latent-space noise injection, plus checkpointing.

Each step encodes a batch, samples z = mu + sigma * eps, corrupts it
through the channel at the configured training SNR, decodes from the
corrupted latents, and minimizes the robust loss.  Runs are deterministic
for a fixed seed (single-threaded torch, seeded batch order and draws).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import torch

from .config import ChannelSpec, VaeConfig
from .model import ConvDecoder, ConvEncoder, reparameterize
from .noise import inject_semantic_noise
from .objective import robust_loss


class DivergedTraining(RuntimeError):
    """Loss stopped being finite; carries the diagnostic context."""


@dataclass
class TrainedModel:
    encoder: ConvEncoder
    decoder: ConvDecoder
    cfg: VaeConfig
    loss_history: list[float]

    def embed(self, images: torch.Tensor) -> torch.Tensor:
        """Deterministic embedding: the posterior mean."""
        self.encoder.eval()
        with torch.no_grad():
            return self.encoder(images).mu

    def decode(self, z: torch.Tensor) -> torch.Tensor:
        self.decoder.eval()
        with torch.no_grad():
            return self.decoder(z)


def train(dataset: torch.Tensor, cfg: VaeConfig, channel: ChannelSpec) -> TrainedModel:
    if dataset.numel() == 0:
        raise ValueError("dataset is empty")
    torch.manual_seed(cfg.seed)
    torch.set_num_threads(1)
    encoder = ConvEncoder(cfg.latent_dim)
    decoder = ConvDecoder(cfg.latent_dim)
    opt = torch.optim.Adam(list(encoder.parameters()) + list(decoder.parameters()), lr=cfg.learning_rate)
    noise_gen = torch.Generator().manual_seed(cfg.seed + 1)
    order_gen = torch.Generator().manual_seed(cfg.seed + 2)

    n = dataset.shape[0]
    losses = []
    for epoch in range(cfg.epochs):
        perm = torch.randperm(n, generator=order_gen)
        epoch_loss = 0.0
        batches = 0
        for start in range(0, n, cfg.batch_size):
            batch = dataset[perm[start : start + cfg.batch_size]]
            out = encoder(batch)
            eps = torch.randn(out.mu.shape, generator=noise_gen)
            z = reparameterize(out, eps)
            z_hat, _ = inject_semantic_noise(z, channel, cfg.train_snr_db, noise_gen)
            probs = decoder(z_hat)
            loss = robust_loss(batch, probs, out, cfg)
            if not torch.isfinite(loss):
                raise DivergedTraining(
                    f"non-finite loss at epoch {epoch}, batch {batches} "
                    f"(last finite epoch losses: {losses[-3:]})"
                )
            opt.zero_grad()
            loss.backward()
            opt.step()
            epoch_loss += float(loss.detach())
            batches += 1
        losses.append(epoch_loss / batches)
    return TrainedModel(encoder=encoder, decoder=decoder, cfg=cfg, loss_history=losses)


def save_model(model: TrainedModel, path) -> None:
    torch.save(
        {
            "encoder": model.encoder.state_dict(),
            "decoder": model.decoder.state_dict(),
            "config": json.dumps(
                {
                    "latent_dim": model.cfg.latent_dim,
                    "beta": model.cfg.beta,
                    "eta": model.cfg.eta,
                    "train_snr_db": "inf" if math.isinf(model.cfg.train_snr_db) else model.cfg.train_snr_db,
                    "epochs": model.cfg.epochs,
                    "batch_size": model.cfg.batch_size,
                    "learning_rate": model.cfg.learning_rate,
                    "seed": model.cfg.seed,
                }
            ),
            "fingerprint": model.cfg.fingerprint(),
            "loss_history": model.loss_history,
        },
        path,
    )


def load_model(path) -> TrainedModel:
    blob = torch.load(path, weights_only=False)
    raw = json.loads(blob["config"])
    cfg = VaeConfig(
        latent_dim=raw["latent_dim"],
        beta=raw["beta"],
        eta=raw["eta"],
        train_snr_db=float(raw["train_snr_db"]),
        epochs=raw["epochs"],
        batch_size=raw["batch_size"],
        learning_rate=raw["learning_rate"],
        seed=raw["seed"],
    )
    if blob["fingerprint"] != cfg.fingerprint():
        raise ValueError("checkpoint fingerprint does not match its embedded config")
    encoder = ConvEncoder(cfg.latent_dim)
    decoder = ConvDecoder(cfg.latent_dim)
    encoder.load_state_dict(blob["encoder"])
    decoder.load_state_dict(blob["decoder"])
    return TrainedModel(encoder=encoder, decoder=decoder, cfg=cfg, loss_history=list(blob["loss_history"]))
