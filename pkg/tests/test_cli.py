"""CLI surface: subcommands, CSV/figure artifacts, exit codes, seeds."""

import csv
import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from semcom import FeatureFrame, encode_frame
from semcom.cli import main, parse_grid


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def channel_config(tmp_path):
    path = tmp_path / "channel.json"
    path.write_text(
        json.dumps(
            {
                "noise": {"a": -1.0, "b": 1.0, "sigma_p2": 0.01},
                "fading": "none",
                "snr_db": "inf",
                "seed": 5,
            }
        )
    )
    return path


@pytest.fixture
def sff_stream(tmp_path):
    rng = np.random.default_rng(17)
    path = tmp_path / "in.sff"
    with open(path, "wb") as fh:
        for i in range(10):
            feats = rng.standard_normal(32).astype(np.float32)
            mask = np.ones(32, dtype=bool)
            fh.write(encode_frame(FeatureFrame(feats, mask, frame_id=i)))
    return path


class TestParseGrid:
    def test_comma_list(self):
        assert parse_grid("1,2,3.5") == [1.0, 2.0, 3.5]

    def test_linspace(self):
        assert parse_grid("0:1:3") == pytest.approx([0.0, 0.5, 1.0])

    def test_geomspace(self):
        assert parse_grid("log:1:100:3") == pytest.approx([1.0, 10.0, 100.0])


class TestRdpCommand:
    def test_csv_and_plot(self, runner, tmp_path):
        out = tmp_path / "rdp.csv"
        png = tmp_path / "rdp.png"
        result = runner.invoke(
            main,
            [
                "rdp",
                "--source", "0.5,0.5",
                "--alpha-grid", "0.5:3:5",
                "--mu-grid", "0",
                "--out", str(out),
                "--plot", str(png),
            ],
        )
        assert result.exit_code == 0, result.output
        with open(out) as fh:
            rows = list(csv.reader(fh))
        assert rows[0][0] == "alpha"
        assert len(rows) == 6
        assert png.stat().st_size > 0

    def test_bad_source_is_fatal(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["rdp", "--source", "0.5,0.6", "--alpha-grid", "1", "--out", str(tmp_path / "x.csv")],
        )
        assert result.exit_code == 1

    def test_partial_failure_exit_code(self, runner, tmp_path):
        # mu = 50 collapses the marginal for the asymmetric source
        result = runner.invoke(
            main,
            [
                "rdp",
                "--source", "0.28,0.72",
                "--alpha-grid", "1.5",
                "--mu-grid", "0,50",
                "--out", str(tmp_path / "x.csv"),
            ],
        )
        assert result.exit_code == 2


class TestCapacityCommand:
    def test_csv_and_plot(self, runner, tmp_path):
        out = tmp_path / "cap.csv"
        png = tmp_path / "cap.png"
        result = runner.invoke(
            main,
            [
                "capacity",
                "--a", "-1", "--b", "1", "--sigma-p2", "0.01",
                "--snr-grid", "0:20:11",
                "--out", str(out),
                "--plot", str(png),
            ],
        )
        assert result.exit_code == 0, result.output
        with open(out) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["snr_db", "lower_bits", "upper_bits", "kl_gap_bits"]
        assert len(rows) == 12
        lower = float(rows[1][1])
        assert lower == pytest.approx(0.5, abs=1e-9)  # 0.5 log2(1 + 1) at 0 dB
        assert png.stat().st_size > 0


class TestChannelCommand:
    def test_noiseless_roundtrip(self, runner, tmp_path, channel_config, sff_stream):
        out = tmp_path / "out.sff"
        report = tmp_path / "report.json"
        result = runner.invoke(
            main,
            [
                "channel",
                "--config", str(channel_config),
                "--in", str(sff_stream),
                "--out", str(out),
                "--report", str(report),
            ],
        )
        assert result.exit_code == 0, result.output
        assert out.read_bytes() == sff_stream.read_bytes()
        rep = json.loads(report.read_text())
        assert rep["frames_sent"] == 10
        assert rep["psnr_db"] == 100.0

    def test_deterministic_with_seed(self, runner, tmp_path, sff_stream):
        cfg = tmp_path / "noisy.json"
        cfg.write_text(
            json.dumps({"noise": {"a": -1, "b": 1, "sigma_p2": 0.01}, "snr_db": 6.0})
        )
        outs = []
        for name in ("a.sff", "b.sff"):
            out = tmp_path / name
            result = runner.invoke(
                main,
                ["channel", "--config", str(cfg), "--in", str(sff_stream), "--out", str(out), "--seed", "99"],
            )
            assert result.exit_code == 0, result.output
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_env_seed_fallback(self, runner, tmp_path, sff_stream, monkeypatch):
        cfg = tmp_path / "noisy.json"
        cfg.write_text(
            json.dumps({"noise": {"a": -1, "b": 1, "sigma_p2": 0.01}, "snr_db": 6.0})
        )
        out_env = tmp_path / "env.sff"
        monkeypatch.setenv("SEMCOM_SEED", "99")
        result = runner.invoke(
            main, ["channel", "--config", str(cfg), "--in", str(sff_stream), "--out", str(out_env)]
        )
        assert result.exit_code == 0, result.output
        out_flag = tmp_path / "flag.sff"
        runner.invoke(
            main,
            ["channel", "--config", str(cfg), "--in", str(sff_stream), "--out", str(out_flag), "--seed", "99"],
        )
        assert out_env.read_bytes() == out_flag.read_bytes()


class TestPipelineCommand:
    def test_report_and_output(self, runner, tmp_path, channel_config, sff_stream):
        report = tmp_path / "rep.json"
        out = tmp_path / "out.sff"
        result = runner.invoke(
            main,
            [
                "pipeline",
                "--in", str(sff_stream),
                "--config", str(channel_config),
                "--policy", "prior-mean",
                "--out", str(out),
                "--report", str(report),
            ],
        )
        assert result.exit_code == 0, result.output
        rep = json.loads(report.read_text())
        assert rep["frames_sent"] == 10
        assert rep["compression_ratio"] == pytest.approx(1.0)
        assert rep["psnr_db"] == 100.0
        assert out.exists()

    def test_partial_failure_exit_code(self, runner, tmp_path, channel_config):
        path = tmp_path / "mixed.sff"
        rng = np.random.default_rng(23)
        with open(path, "wb") as fh:
            fh.write(encode_frame(FeatureFrame(rng.standard_normal(8), np.ones(8, bool), frame_id=0)))
            fh.write(encode_frame(FeatureFrame(rng.standard_normal(8), np.zeros(8, bool), frame_id=1)))
        result = runner.invoke(
            main,
            [
                "pipeline",
                "--in", str(path),
                "--config", str(channel_config),
                "--report", "-",
            ],
        )
        assert result.exit_code == 2, result.output

    def test_missing_input_is_fatal(self, runner, tmp_path, channel_config):
        result = runner.invoke(
            main,
            [
                "pipeline",
                "--in", str(tmp_path / "nope.sff"),
                "--config", str(channel_config),
                "--report", "-",
            ],
        )
        assert result.exit_code != 0
