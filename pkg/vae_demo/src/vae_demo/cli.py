"""Train/export/reconstruct/traverse commands for the VAE demo."""

from __future__ import annotations

import math

import click
import numpy as np
import torch

from .config import ChannelSpec, VaeConfig, load_channel_spec
from .data import load_images, train_test_split
from .frames_io import decode_frames, export_frames, traversal_grid
from .training import load_model, save_model, train


def _parse_mask(text: str, latent_dim: int) -> np.ndarray:
    if text == "all":
        return np.ones(latent_dim, dtype=bool)
    if text.startswith("first:"):
        k = int(text.split(":")[1])
        mask = np.zeros(latent_dim, dtype=bool)
        mask[:k] = True
        return mask
    return np.array([tok.strip() in ("1", "true") for tok in text.split(",")], dtype=bool)


@click.group()
def main():
    """Robust disentangling VAE demo for the feature pipeline."""


@main.command("train")
@click.option("--channel", "channel_path", default=None, type=click.Path(exists=True),
              help="Shared channel config JSON (noise shape / fading).")
@click.option("--latent-dim", default=32, type=int)
@click.option("--beta", default=1.0, type=float)
@click.option("--eta", default=0.0, type=float)
@click.option("--train-snr-db", default="inf", help="Training SNR in dB, or 'inf' for noise-free.")
@click.option("--epochs", default=10, type=int)
@click.option("--batch-size", default=128, type=int)
@click.option("--learning-rate", default=1e-3, type=float)
@click.option("--seed", default=0, type=int)
@click.option("--out", "out_path", required=True, type=click.Path(), help="Checkpoint path.")
def train_cmd(channel_path, latent_dim, beta, eta, train_snr_db, epochs, batch_size,
              learning_rate, seed, out_path):
    """Train on the bundled digit images with latent-noise injection."""
    spec = load_channel_spec(channel_path) if channel_path else ChannelSpec(a=-0.1, b=0.1, sigma_p2=1.0)
    cfg = VaeConfig(
        latent_dim=latent_dim,
        beta=beta,
        eta=eta,
        train_snr_db=float(train_snr_db),
        epochs=epochs,
        batch_size=batch_size,
        learning_rate=learning_rate,
        seed=seed,
    )
    train_images, _ = train_test_split(load_images(), seed=seed)
    model = train(train_images, cfg, spec)
    save_model(model, out_path)
    click.echo(f"trained {epochs} epochs, final loss {model.loss_history[-1]:.3f} -> {out_path}")


@main.command("export")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--mask", default="all", help="'all', 'first:K', or a comma list of 0/1.")
@click.option("--count", default=16, type=int, help="Number of test images to export.")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--seed", default=0, type=int, help="Test-split seed (match training).")
def export_cmd(model_path, mask, count, out_path, seed):
    """Embed test images and write their feature frames as SFF1."""
    model = load_model(model_path)
    _, test_images = train_test_split(load_images(), seed=seed)
    data = export_frames(model, test_images[:count], _parse_mask(mask, model.cfg.latent_dim))
    with open(out_path, "wb") as fh:
        fh.write(data)
    click.echo(f"wrote {count} frames ({len(data)} bytes) -> {out_path}")


@main.command("reconstruct")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--in", "in_path", required=True, type=click.Path(exists=True), help="SFF1 stream.")
@click.option("--out", "out_path", required=True, type=click.Path(), help="PNG contact sheet.")
@click.option("--reference-count", default=None, type=int,
              help="Also report PSNR against the first N test images.")
@click.option("--seed", default=0, type=int)
def reconstruct_cmd(model_path, in_path, out_path, reference_count, seed):
    """Decode an SFF1 stream back to images and save a contact sheet."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    model = load_model(model_path)
    with open(in_path, "rb") as fh:
        images = decode_frames(model, fh.read()).numpy()[:, 0]
    cols = min(8, len(images))
    rows = math.ceil(len(images) / cols)
    fig, axes = plt.subplots(rows, cols, figsize=(1.2 * cols, 1.2 * rows), squeeze=False)
    for ax in axes.ravel():
        ax.axis("off")
    for i, img in enumerate(images):
        axes[i // cols][i % cols].imshow(img, cmap="gray", vmin=0, vmax=1)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    msg = f"decoded {len(images)} frames -> {out_path}"
    if reference_count:
        _, test_images = train_test_split(load_images(), seed=seed)
        ref = test_images[: len(images)].numpy()[:, 0]
        mse = float(np.mean((ref - images[: len(ref)]) ** 2))
        psnr = 100.0 if mse == 0 else 10 * math.log10(1.0 / mse)
        msg += f", psnr {psnr:.2f} dB"
    click.echo(msg)


@main.command("traverse")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--image-index", default=0, type=int)
@click.option("--slots", default="0:8", help="Latent slots to traverse ('a:b' range or comma list).")
@click.option("--steps", default=7, type=int)
@click.option("--span", default=3.0, type=float, help="Traverse each slot over [-span, span].")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--seed", default=0, type=int)
def traverse_cmd(model_path, image_index, slots, steps, span, out_path, seed):
    """Render a latent traversal grid (one row per slot)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    model = load_model(model_path)
    _, test_images = train_test_split(load_images(), seed=seed)
    if ":" in slots:
        lo, hi = slots.split(":")
        slot_list = list(range(int(lo), int(hi)))
    else:
        slot_list = [int(s) for s in slots.split(",")]
    values = np.linspace(-span, span, steps)
    grid = traversal_grid(model, test_images[image_index], slot_list, values).numpy()
    fig, axes = plt.subplots(
        len(slot_list), steps, figsize=(1.1 * steps, 1.1 * len(slot_list)), squeeze=False
    )
    for r in range(len(slot_list)):
        for c in range(steps):
            axes[r][c].imshow(grid[r, c, 0], cmap="gray", vmin=0, vmax=1)
            axes[r][c].axis("off")
        axes[r][0].set_ylabel(f"z[{slot_list[r]}]", rotation=0, labelpad=18, fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    click.echo(f"traversal grid ({len(slot_list)} slots x {steps} steps) -> {out_path}")


if __name__ == "__main__":
    main()
