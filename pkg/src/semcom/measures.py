"""Information measures over finite distributions, in bits.

Conventions: all public quantities use log base 2, and 0*log(0) is 0
everywhere.
"""

from __future__ import annotations

import numpy as np

from .distributions import DiscreteDistribution, JointDistribution
from .errors import AbsoluteContinuityViolation, LengthMismatch

PSNR_CAP_DB = 100.0


def _entropy_bits(p: np.ndarray) -> float:
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return float(max(0.0, -terms.sum()))


def entropy(d: DiscreteDistribution) -> float:
    """Shannon entropy -sum p log2 p, in bits."""
    return _entropy_bits(d.probs)


def kl_divergence(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """KL divergence sum p log2(p/q), in bits.

    Requires absolute continuity: p must put no mass where q has none.
    """
    if len(p) != len(q) or not np.array_equal(p.alphabet, q.alphabet):
        raise LengthMismatch("kl_divergence requires matching alphabets")
    pa, qa = p.probs, q.probs
    bad = (pa > 0) & (qa == 0)
    if np.any(bad):
        sym = p.alphabet[bad][0]
        raise AbsoluteContinuityViolation(
            f"p({sym}) = {pa[bad][0]} > 0 but q({sym}) = 0"
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(pa > 0, pa * (np.log2(np.where(pa > 0, pa, 1.0)) - np.log2(np.where(qa > 0, qa, 1.0))), 0.0)
    return float(terms.sum())


def mutual_information(j: JointDistribution) -> float:
    """I(X;Y) = sum j(x,y) log2[ j(x,y) / (p(x) r(y)) ], in bits."""
    m = j.matrix
    px = m.sum(axis=1)
    py = m.sum(axis=0)
    denom = px[:, None] * py[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(m > 0, m * np.log2(np.where(m > 0, m, 1.0) / np.where(denom > 0, denom, 1.0)), 0.0)
    return float(max(0.0, terms.sum()))


def conditional_entropy_y_given_x(j: JointDistribution) -> float:
    """H(Y|X) = sum_x p(x) H(Y | X=x), computed from the row conditionals."""
    m = j.matrix
    px = m.sum(axis=1)
    total = 0.0
    for i in range(m.shape[0]):
        if px[i] > 0:
            total += px[i] * _entropy_bits(m[i] / px[i])
    return total


def chain_identity_residual(joint_sx: JointDistribution) -> float:
    """Deviation from H(X) = H(S) + H(X|S) - H(S|X) for a joint over (S, X).

    The conditional entropies are computed from the row/column conditional
    distributions (not via the chain rule), so a nonzero residual flags a
    defect in the entropy machinery rather than being algebraically zero.
    """
    h_s = entropy(joint_sx.marginal_x())
    h_x = entropy(joint_sx.marginal_y())
    h_x_given_s = conditional_entropy_y_given_x(joint_sx)
    flipped = JointDistribution(joint_sx.matrix.T, joint_sx.y_values, joint_sx.x_values)
    h_s_given_x = conditional_entropy_y_given_x(flipped)
    return abs(h_x - h_s - h_x_given_s + h_s_given_x)


def psnr(reference, reconstruction, peak: float) -> float:
    """Peak signal-to-noise ratio 10 log10(peak^2 / MSE), in dB.

    A zero MSE returns the lossless cap of 100 dB.
    """
    ref = np.asarray(reference, dtype=np.float64)
    rec = np.asarray(reconstruction, dtype=np.float64)
    if ref.shape != rec.shape:
        raise LengthMismatch(f"psnr shapes differ: {ref.shape} vs {rec.shape}")
    if ref.size == 0:
        raise LengthMismatch("psnr requires at least one sample")
    if not peak > 0:
        raise ValueError(f"peak must be positive, got {peak}")
    mse = float(np.mean((ref - rec) ** 2))
    if mse == 0.0:
        return PSNR_CAP_DB
    return 10.0 * np.log10(peak * peak / mse)
