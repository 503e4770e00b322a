"""Training configuration and the shared channel-config JSON schema.

The channel JSON is the same file format the transmission toolkit reads
(noise bounds a/b, physical variance sigma_p2, optional Rayleigh fading,
snr_db, seed); it is parsed here independently so this package only
depends on the documented interface, not on the toolkit's code.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class VaeConfig:
    latent_dim: int = 32
    beta: float = 1.0
    eta: float = 0.0
    train_snr_db: float = math.inf
    epochs: int = 10
    batch_size: int = 128
    learning_rate: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.latent_dim < 1:
            raise ValueError("latent_dim must be >= 1")
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.eta < 0:
            raise ValueError("eta must be non-negative")

    def fingerprint(self) -> str:
        payload = json.dumps(
            {k: (str(v) if isinstance(v, float) and math.isinf(v) else v) for k, v in asdict(self).items()},
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class ChannelSpec:
    """Noise shape and fading read from the shared channel JSON."""

    a: float
    b: float
    sigma_p2: float
    rayleigh_sigma_h2: float | None = None
    snr_db: float = math.inf
    seed: int = 0

    def noise_variance(self) -> float:
        return self.sigma_p2 + (self.b - self.a) ** 2 / 12.0

    @classmethod
    def from_dict(cls, d: dict) -> "ChannelSpec":
        fading = d.get("fading", "none")
        if fading in (None, "none"):
            sigma_h2 = None
        elif isinstance(fading, dict) and fading.get("type") == "rayleigh":
            sigma_h2 = float(fading["sigma_h2"])
        else:
            raise ValueError(f"unknown fading spec {fading!r}")
        return cls(
            a=float(d["noise"]["a"]),
            b=float(d["noise"]["b"]),
            sigma_p2=float(d["noise"]["sigma_p2"]),
            rayleigh_sigma_h2=sigma_h2,
            snr_db=float(d.get("snr_db", "inf")),
            seed=int(d.get("seed", 0)),
        )


def load_channel_spec(path) -> ChannelSpec:
    with open(path) as fh:
        return ChannelSpec.from_dict(json.load(fh))
