"""Semantic channel: uniform quantizer, composite noise, fading, SNR scaling.

The channel corrupts feature values with the sum of two independent
components each frame: uniform quantization noise on (a, b) and zero-mean
Gaussian physical noise with variance sigma_p2.  The composite variance is
therefore sigma_p2 + (b - a)^2 / 12 exactly.  A target SNR rescales the
composite sample so that the measured per-symbol signal power of the frame
divided by the scaled noise variance hits the target, preserving the
uniform:Gaussian variance proportions.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ZeroGain
from .rng import FADING_STREAM, NOISE_STREAM, make_rng


@dataclass(frozen=True)
class Quantizer:
    """M strictly increasing reconstruction levels inside an input range."""

    levels: np.ndarray
    input_range: tuple[float, float]

    def __init__(self, levels, input_range):
        lv = np.asarray(levels, dtype=np.float64).copy()
        lo, hi = float(input_range[0]), float(input_range[1])
        if lv.ndim != 1 or lv.size < 2:
            raise ValueError("quantizer needs at least 2 levels")
        if np.any(np.diff(lv) <= 0):
            raise ValueError("levels must be strictly increasing")
        if not lo < hi:
            raise ValueError("input range must satisfy min < max")
        if lv[0] < lo or lv[-1] > hi:
            raise ValueError("levels must lie inside the input range")
        lv.setflags(write=False)
        object.__setattr__(self, "levels", lv)
        object.__setattr__(self, "input_range", (lo, hi))

    @property
    def n_levels(self) -> int:
        return self.levels.size

    @classmethod
    def midrise(cls, n_levels: int, input_range: tuple[float, float]) -> "Quantizer":
        """Uniform midrise quantizer: levels at cell midpoints, none at zero."""
        lo, hi = float(input_range[0]), float(input_range[1])
        step = (hi - lo) / n_levels
        levels = lo + (np.arange(n_levels) + 0.5) * step
        return cls(levels, (lo, hi))


def quantize(q: Quantizer, x) -> np.ndarray:
    """Map each element to its nearest level; exact midpoints go to the
    lower level, and out-of-range inputs clamp to the nearest level."""
    x = np.asarray(x, dtype=np.float64)
    midpoints = (q.levels[:-1] + q.levels[1:]) / 2
    idx = np.searchsorted(midpoints, x, side="left")
    return q.levels[idx]


def quantizer_entropy_bound(q: Quantizer, dim: int) -> float:
    """Upper bound dim * log2(M) on the entropy of quantized frames."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return dim * math.log2(q.n_levels)


@dataclass(frozen=True)
class SemanticNoiseModel:
    """Uniform(a, b) quantization noise plus independent N(0, sigma_p2)."""

    a: float
    b: float
    sigma_p2: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"need a < b, got a={self.a}, b={self.b}")
        if not self.sigma_p2 > 0:
            raise ValueError(f"sigma_p2 must be positive, got {self.sigma_p2}")

    def variance(self) -> float:
        """Composite variance: the components are independent, so variances add."""
        return self.sigma_p2 + (self.b - self.a) ** 2 / 12.0

    def mean(self) -> float:
        return (self.a + self.b) / 2.0


def sample_noise(model: SemanticNoiseModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n composite noise samples: U(a,b) + N(0, sigma_p2)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    u = rng.uniform(model.a, model.b, size=n)
    g = rng.normal(0.0, math.sqrt(model.sigma_p2), size=n)
    return u + g


@dataclass(frozen=True)
class RayleighFading:
    """Slow Rayleigh fading with mean-square gain sigma_h2 (E[g^2] = sigma_h2)."""

    sigma_h2: float

    def __post_init__(self):
        if not self.sigma_h2 > 0:
            raise ValueError(f"sigma_h2 must be positive, got {self.sigma_h2}")


@dataclass(frozen=True)
class ChannelConfig:
    noise: SemanticNoiseModel
    fading: RayleighFading | None = None
    snr_db: float = math.inf
    seed: int = 0

    def to_dict(self) -> dict:
        fading = "none" if self.fading is None else {"type": "rayleigh", "sigma_h2": self.fading.sigma_h2}
        snr = "inf" if math.isinf(self.snr_db) else self.snr_db
        return {
            "noise": {"a": self.noise.a, "b": self.noise.b, "sigma_p2": self.noise.sigma_p2},
            "fading": fading,
            "snr_db": snr,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ChannelConfig":
        noise = SemanticNoiseModel(
            a=float(d["noise"]["a"]), b=float(d["noise"]["b"]), sigma_p2=float(d["noise"]["sigma_p2"])
        )
        fading_spec = d.get("fading", "none")
        if fading_spec in (None, "none"):
            fading = None
        elif isinstance(fading_spec, dict) and fading_spec.get("type") == "rayleigh":
            fading = RayleighFading(sigma_h2=float(fading_spec["sigma_h2"]))
        else:
            raise ValueError(f"unknown fading spec: {fading_spec!r}")
        return cls(
            noise=noise,
            fading=fading,
            snr_db=float(d.get("snr_db", "inf")),
            seed=int(d.get("seed", 0)),
        )


def load_channel_config(path) -> ChannelConfig:
    with open(path) as fh:
        return ChannelConfig.from_dict(json.load(fh))


def save_channel_config(cfg: ChannelConfig, path) -> None:
    with open(path, "w") as fh:
        json.dump(cfg.to_dict(), fh, indent=2)
        fh.write("\n")


class TransmitResult(NamedTuple):
    received: np.ndarray
    gains: np.ndarray


class ChannelStreams(NamedTuple):
    """Independent RNG streams for one frame's noise and fading draws."""

    noise: np.random.Generator
    fading: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int, frame_id: int = 0) -> "ChannelStreams":
        return cls(
            noise=make_rng(seed, NOISE_STREAM, frame_id),
            fading=make_rng(seed, FADING_STREAM, frame_id),
        )


def _noise_scale(cfg: ChannelConfig, x: np.ndarray) -> float:
    """Factor applied to the composite noise so that the frame's measured
    signal power over the scaled noise variance equals the target SNR."""
    if math.isinf(cfg.snr_db):
        return 0.0
    p_x = float(np.mean(x * x))
    if p_x == 0.0:
        return 0.0
    snr_linear = 10.0 ** (cfg.snr_db / 10.0)
    return math.sqrt(p_x / (cfg.noise.variance() * snr_linear))


def transmit(cfg: ChannelConfig, x, streams: ChannelStreams | None = None) -> TransmitResult:
    """Send one frame through the semantic channel: received = g*x + n.

    The fading gain is drawn once per frame (slow fading) from the fading
    stream; the composite noise comes from the noise stream and is scaled
    to the configured SNR.  With fading disabled the gain is exactly 1.
    """
    x = np.asarray(x, dtype=np.float64)
    if streams is None:
        streams = ChannelStreams.from_seed(cfg.seed)
    if cfg.fading is None:
        gain = 1.0
    else:
        # Rayleigh with E[g^2] = sigma_h2 has scale sqrt(sigma_h2 / 2)
        gain = float(streams.fading.rayleigh(math.sqrt(cfg.fading.sigma_h2 / 2.0)))
    gains = np.full(x.shape, gain)
    kappa = _noise_scale(cfg, x)
    if kappa == 0.0:
        noise = np.zeros(x.shape)
    else:
        noise = kappa * sample_noise(cfg.noise, x.size, streams.noise).reshape(x.shape)
    return TransmitResult(received=gain * x + noise, gains=gains)


def equalize(received, gains) -> np.ndarray:
    """Element-wise gain compensation: received / gain."""
    received = np.asarray(received, dtype=np.float64)
    gains = np.asarray(gains, dtype=np.float64)
    if np.any(gains <= 0):
        raise ZeroGain(f"gains must be strictly positive, got min {gains.min()}")
    return received / gains


def noise_trace_to_csv(model: SemanticNoiseModel, n: int, seed: int, path) -> None:
    """Dump n seeded composite-noise samples for offline inspection."""
    samples = sample_noise(model, n, make_rng(seed, NOISE_STREAM))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "sample"])
        for i, s in enumerate(samples):
            writer.writerow([i, repr(float(s))])
