"""Command-line interface.

Exit codes: 0 on success, 2 when some frames failed but the run completed,
1 on fatal errors.  Randomness is controlled by --seed, falling back to the
config file's seed and then the SEMCOM_SEED environment variable.
"""

from __future__ import annotations

import json
import os
import sys

import click
import numpy as np

from . import capacity as cap
from . import rdp as rdp_mod
from .channel import ChannelConfig, SemanticNoiseModel
from .distributions import DiscreteDistribution
from .errors import SemcomError
from .frames import CompletionPolicy, read_frames, write_frames
from .pipeline import run_pipeline, transmit_frames


def parse_grid(text: str) -> list[float]:
    """Parse '1,2,3' as a list, 'start:stop:count' as linspace, and
    'log:start:stop:count' as geomspace."""
    text = text.strip()
    if text.startswith("log:"):
        start, stop, count = text[4:].split(":")
        return list(np.geomspace(float(start), float(stop), int(count)))
    if ":" in text:
        start, stop, count = text.split(":")
        return list(np.linspace(float(start), float(stop), int(count)))
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _resolve_seed(cli_seed, config_seed):
    """Seed precedence: --seed, then the config file, then SEMCOM_SEED."""
    if cli_seed is not None:
        return int(cli_seed)
    if config_seed is not None:
        return int(config_seed)
    env = os.environ.get("SEMCOM_SEED")
    if env is not None:
        return int(env)
    return 0


def _load_config_with_seed(config_path, cli_seed) -> ChannelConfig:
    with open(config_path) as fh:
        raw = json.load(fh)
    cfg = ChannelConfig.from_dict(raw)
    return ChannelConfig(
        noise=cfg.noise,
        fading=cfg.fading,
        snr_db=cfg.snr_db,
        seed=_resolve_seed(cli_seed, raw.get("seed")),
    )


def _write_report(report, path):
    payload = json.dumps(report.to_dict(), indent=2)
    if path == "-":
        click.echo(payload)
    else:
        with open(path, "w") as fh:
            fh.write(payload + "\n")


@click.group()
def main():
    """Semantic communication toolkit."""


@main.command("rdp")
@click.option("--source", required=True, help="Source probabilities, e.g. '0.5,0.5'.")
@click.option("--source-alphabet", default=None, help="Source symbols (default 0,1,...).")
@click.option("--recon-alphabet", default=None, help="Reconstruction symbols (default: source alphabet).")
@click.option("--alpha-grid", required=True, help="Distortion multipliers ('a,b,c' or 'start:stop:count').")
@click.option("--mu-grid", default="0", help="Perception multipliers (same syntax).")
@click.option("--tol", default=1e-10, type=float, help="Fixed-point stopping tolerance.")
@click.option("--max-iters", default=10_000, type=int, help="Iteration cap per grid point.")
@click.option("--out", "out_csv", required=True, type=click.Path(), help="Output CSV path.")
@click.option("--plot", "plot_path", default=None, type=click.Path(), help="Also render a PNG figure.")
def rdp_cmd(source, source_alphabet, recon_alphabet, alpha_grid, mu_grid, tol, max_iters, out_csv, plot_path):
    """Sweep the rate-distortion-perception multipliers and export a CSV."""
    try:
        probs = parse_grid(source)
        alphabet = parse_grid(source_alphabet) if source_alphabet else list(range(len(probs)))
        src = DiscreteDistribution(alphabet, probs)
        recon = parse_grid(recon_alphabet) if recon_alphabet else None
        config = rdp_mod.SolverConfig(tolerance=tol, max_iterations=max_iters)
        points = rdp_mod.sweep(src, parse_grid(alpha_grid), parse_grid(mu_grid), config, recon)
        rdp_mod.sweep_to_csv(points, out_csv)
        if plot_path:
            from .plots import plot_rdp_sweep

            plot_rdp_sweep(points, plot_path)
        failed = sum(1 for p in points if p.error)
        click.echo(f"wrote {len(points)} points to {out_csv}" + (f" ({failed} failed)" if failed else ""))
        if failed:
            sys.exit(2)
    except (SemcomError, ValueError) as exc:
        raise click.ClickException(str(exc))


@main.command("capacity")
@click.option("--a", "a_", required=True, type=float, help="Quantization noise lower bound.")
@click.option("--b", "b_", required=True, type=float, help="Quantization noise upper bound.")
@click.option("--sigma-p2", required=True, type=float, help="Physical noise variance.")
@click.option("--snr-grid", required=True, help="SNR grid in dB ('a,b,c' or 'start:stop:count').")
@click.option("--tol-bits", default=1e-9, type=float, help="Quadrature tolerance in bits.")
@click.option("--out", "out_csv", required=True, type=click.Path(), help="Output CSV path.")
@click.option("--plot", "plot_path", default=None, type=click.Path(), help="Also render a PNG figure.")
def capacity_cmd(a_, b_, sigma_p2, snr_grid, tol_bits, out_csv, plot_path):
    """Compute semantic channel capacity bounds across an SNR sweep."""
    try:
        model = SemanticNoiseModel(a=a_, b=b_, sigma_p2=sigma_p2)
        quad = cap.QuadratureConfig(tolerance_bits=tol_bits)
        results = cap.capacity_bounds_sweep(model, parse_grid(snr_grid), quad)
        cap.capacity_sweep_to_csv(results, out_csv)
        if plot_path:
            from .plots import plot_capacity_bounds

            plot_capacity_bounds(results, plot_path)
        click.echo(
            f"wrote {len(results)} points to {out_csv} (kl gap = {results[0].kl_gap:.6f} bits)"
        )
    except (SemcomError, ValueError) as exc:
        raise click.ClickException(str(exc))


@main.command("channel")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True), help="Channel config JSON.")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True), help="Input SFF1 stream.")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Output SFF1 stream.")
@click.option("--seed", default=None, type=int, help="Override the config seed.")
@click.option("--report", "report_path", default=None, type=click.Path(), help="Write a JSON report ('-' for stdout).")
def channel_cmd(config_path, in_path, out_path, seed, report_path):
    """Corrupt the selected values of an SFF1 stream through the channel."""
    try:
        cfg = _load_config_with_seed(config_path, seed)
        with open(in_path, "rb") as fh:
            frames = list(read_frames(fh))
        frames_out, report = transmit_frames(frames, cfg)
        with open(out_path, "wb") as fh:
            write_frames(fh, frames_out)
        if report_path:
            _write_report(report, report_path)
        click.echo(f"transmitted {report.frames_sent} frames -> {out_path}")
        if report.frames_failed:
            sys.exit(2)
    except (SemcomError, ValueError, OSError) as exc:
        raise click.ClickException(str(exc))


@main.command("pipeline")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True), help="Input SFF1 stream.")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True), help="Channel config JSON.")
@click.option("--policy", default="prior-mean", type=click.Choice(["prior-mean", "prior-sample"]),
              help="Completion policy for unselected features.")
@click.option("--policy-seed", default=0, type=int, help="Seed for prior-sample completion.")
@click.option("--out", "out_path", default=None, type=click.Path(), help="Write completed frames as SFF1.")
@click.option("--seed", default=None, type=int, help="Override the config seed.")
@click.option("--report", "report_path", required=True, type=click.Path(), help="JSON report path ('-' for stdout).")
def pipeline_cmd(in_path, config_path, policy, policy_seed, out_path, seed, report_path):
    """Run the full select/transmit/complete pipeline over an SFF1 stream."""
    try:
        cfg = _load_config_with_seed(config_path, seed)
        pol = CompletionPolicy(mode=policy.replace("-", "_"), seed=policy_seed)
        with open(in_path, "rb") as fh:
            frames = list(read_frames(fh))
        frames_out, report = run_pipeline(frames, cfg, pol)
        if out_path:
            with open(out_path, "wb") as fh:
                write_frames(fh, frames_out)
        _write_report(report, report_path)
        click.echo(
            f"pipeline: {report.frames_sent} frames, psnr {report.psnr_db:.2f} dB, "
            f"compression x{report.compression_ratio:.2f}"
        )
        if report.frames_failed:
            sys.exit(2)
    except (SemcomError, ValueError, OSError) as exc:
        raise click.ClickException(str(exc))


if __name__ == "__main__":
    main()
