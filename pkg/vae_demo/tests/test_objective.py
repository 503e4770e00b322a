"""Robust objective: log-likelihood limit, continuity, beta linearity."""

import pytest
import torch

from vae_demo import (
    EncoderOutput,
    VaeConfig,
    bernoulli_log_likelihood,
    eta_reconstruction,
    kl_to_prior,
    robust_loss,
)


def fixed_batch(seed=0, b=4, pixels=(1, 8, 8)):
    gen = torch.Generator().manual_seed(seed)
    targets = (torch.rand((b, *pixels), generator=gen) > 0.6).float()
    probs = torch.rand((b, *pixels), generator=gen) * 0.9 + 0.05
    out = EncoderOutput(
        mu=torch.randn(b, 16, generator=gen), sigma=torch.rand(b, 16, generator=gen) + 0.1
    )
    return targets, probs, out


class TestEtaReconstruction:
    def test_eta_zero_is_log_likelihood(self):
        targets, probs, _ = fixed_batch()
        assert torch.allclose(
            eta_reconstruction(probs, targets, 0.0), bernoulli_log_likelihood(probs, targets)
        )

    def test_below_switch_uses_log_likelihood_branch(self):
        targets, probs, _ = fixed_batch()
        exact = bernoulli_log_likelihood(probs, targets)
        assert torch.equal(eta_reconstruction(probs, targets, 1e-7), exact)

    def test_estimator_continuous_at_switch(self):
        # the estimator branch just above the cutoff stays close to the
        # log-likelihood branch just below it
        targets, probs, _ = fixed_batch()
        above = eta_reconstruction(probs, targets, 2e-6)
        below = eta_reconstruction(probs, targets, 1e-7)
        assert torch.allclose(above, below, atol=1e-3)

    def test_perfect_reconstruction_maximizes(self):
        targets = (torch.rand(2, 1, 4, 4) > 0.5).float()
        perfect = targets.clamp(1e-7, 1 - 1e-7)
        for eta in (0.0, 0.1, 0.5):
            best = eta_reconstruction(perfect, targets, eta)
            worse = eta_reconstruction(0.5 * torch.ones_like(targets), targets, eta)
            assert torch.all(best > worse)


class TestRobustLoss:
    def test_eta_zero_equals_negative_elbo(self):
        targets, probs, out = fixed_batch()
        cfg = VaeConfig(latent_dim=16, beta=1.0, eta=0.0)
        loss = robust_loss(targets, probs, out, cfg)
        # independent reference: BCE (sum over pixels) + closed-form KL
        f = probs.clamp(1e-7, 1 - 1e-7)
        bce = -(targets * f.log() + (1 - targets) * (1 - f).log()).flatten(1).sum(1)
        var = out.sigma**2
        kl = 0.5 * (out.mu**2 + var - 1 - var.log()).sum(1)
        reference = (bce + kl).mean()
        assert loss.item() == pytest.approx(reference.item(), rel=1e-6)

    def test_beta_linearity(self):
        targets, probs, out = fixed_batch()
        kl = kl_to_prior(out).mean().item()
        losses = {}
        for beta in (1.0, 2.5, 4.0):
            cfg = VaeConfig(latent_dim=16, beta=beta, eta=0.1)
            losses[beta] = robust_loss(targets, probs, out, cfg).item()
        assert losses[2.5] - losses[1.0] == pytest.approx(1.5 * kl, rel=1e-6)
        assert losses[4.0] - losses[1.0] == pytest.approx(3.0 * kl, rel=1e-6)

    def test_gradient_check_toy_decoder(self):
        # 10-parameter decoder: Linear(4 -> 2) with bias; central finite
        # differences against autograd for each eta branch (float64, as
        # float32 rounding would swamp the h=1e-5 difference quotient)
        for eta in (0.0, 0.1, 0.5):
            torch.manual_seed(7)
            lin = torch.nn.Linear(4, 2).double()
            z = torch.randn(3, 4, dtype=torch.float64)
            targets = (torch.rand(3, 2) > 0.5).double()
            out = EncoderOutput(
                mu=torch.zeros(3, 4, dtype=torch.float64),
                sigma=torch.ones(3, 4, dtype=torch.float64),
            )
            cfg = VaeConfig(latent_dim=4, beta=1.0, eta=eta)

            def loss_fn():
                probs = torch.sigmoid(lin(z))
                return robust_loss(targets, probs, out, cfg)

            loss = loss_fn()
            loss.backward()
            params = list(lin.parameters())
            assert sum(p.numel() for p in params) == 10
            h = 1e-5
            for p in params:
                grad = p.grad.clone()
                fd = torch.zeros_like(p)
                flat = p.data.view(-1)
                fd_flat = fd.view(-1)
                for i in range(flat.numel()):
                    orig = flat[i].item()
                    flat[i] = orig + h
                    up = loss_fn().item()
                    flat[i] = orig - h
                    down = loss_fn().item()
                    flat[i] = orig
                    fd_flat[i] = (up - down) / (2 * h)
                rel = (grad - fd).norm() / fd.norm().clamp_min(1e-12)
                assert rel.item() < 1e-4, f"eta={eta}: relative gradient error {rel.item()}"
