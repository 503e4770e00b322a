"""Rate-distortion-perception solver by alternating minimization.

Finds operating points of the constrained problem

    min_q I(X; Xhat)   s.t.  E[(x - xhat)^2] <= D,   KL(p || r) <= P

by iterating the two closed-form updates for fixed Lagrange multipliers
(alpha for distortion, mu for the KL perception term):

    q(xhat|x)  proportional to  r(xhat) * exp( mu p(x)/r(xhat) - alpha (x - xhat)^2 )
    r(xhat) = sum_x p(x) q(xhat|x)

For mu = 0 this is the classical Blahut-Arimoto iteration and converges
to the rate-distortion optimum.  For mu > 0 the update is applied exactly
as written above; it is a heuristic fixed point (the marginal r depends on
q, which the q-update ignores), so optimality is validated empirically on
small instances rather than assumed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import ConditionalDistribution, DiscreteDistribution, JointDistribution
from .errors import InvalidDistribution, NumericOverflow, SemcomError, ZeroMarginal
from .measures import mutual_information

# r entries below this are treated as a collapsed marginal, not pruned:
# the fixed point update divides by r and assumes strict positivity.
MARGINAL_FLOOR = 1e-300
# largest exponent argument allowed after the per-row shift
EXP_GUARD = 700.0

CSV_COLUMNS = ("alpha", "mu", "rate_bits", "distortion", "perception_bits", "iterations", "converged")


@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = 1e-10
    max_iterations: int = 10_000

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class RdpProblem:
    """Source distribution, reconstruction alphabet, and multipliers.

    The reconstruction alphabet defaults to the source alphabet.  The
    source must have full support because the conditional update divides
    by r(xhat) and r inherits zeros from p.
    """

    source: DiscreteDistribution
    reconstruction_alphabet: np.ndarray = field(default=None)
    alpha: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        if not self.source.has_full_support():
            raise InvalidDistribution("source must have full support (p(x) > 0 for all x)")
        if self.alpha < 0 or self.mu < 0:
            raise ValueError(f"multipliers must be non-negative, got alpha={self.alpha}, mu={self.mu}")
        recon = self.reconstruction_alphabet
        if recon is None:
            recon = self.source.alphabet
        recon = np.asarray(recon, dtype=np.float64).copy()
        if recon.ndim != 1 or recon.size == 0 or np.any(np.diff(recon) <= 0):
            raise InvalidDistribution("reconstruction alphabet must be non-empty and strictly increasing")
        recon.setflags(write=False)
        object.__setattr__(self, "reconstruction_alphabet", recon)


@dataclass(frozen=True)
class RdpState:
    conditional: ConditionalDistribution
    marginal: DiscreteDistribution
    iteration: int


@dataclass(frozen=True)
class RdpPoint:
    rate: float
    distortion: float
    perception: float
    alpha: float
    mu: float
    iterations: int
    converged: bool
    error: str | None = None


def update_conditional(problem: RdpProblem, marginal: DiscreteDistribution) -> ConditionalDistribution:
    """Closed-form optimal conditional for a fixed output marginal.

    Exponents are shifted by the row maximum before exponentiation so the
    only way to overflow is a non-finite exponent (mu p/r blowing up as
    r -> 0), which raises NumericOverflow.
    """
    r = marginal.probs
    if np.any(r <= MARGINAL_FLOOR):
        raise ZeroMarginal(f"marginal entry {r.min():.3e} is at or below the positivity floor")
    p = problem.source.probs
    x = problem.source.alphabet
    xhat = marginal.alphabet
    sq = (x[:, None] - xhat[None, :]) ** 2
    with np.errstate(over="ignore"):
        t = problem.mu * p[:, None] / r[None, :] - problem.alpha * sq
    if not np.all(np.isfinite(t)):
        raise NumericOverflow("exponent in the conditional update is not finite")
    shifted = t - t.max(axis=1, keepdims=True)
    if shifted.max() > EXP_GUARD:
        raise NumericOverflow("shifted exponent exceeds the safe threshold")
    w = r[None, :] * np.exp(shifted)
    q = w / w.sum(axis=1, keepdims=True)
    return ConditionalDistribution(xhat, q)


def update_marginal(source: DiscreteDistribution, conditional: ConditionalDistribution) -> DiscreteDistribution:
    """Pushforward of the source through the conditional: r = p q."""
    if conditional.n_inputs != len(source):
        raise InvalidDistribution(
            f"conditional has {conditional.n_inputs} rows for a {len(source)}-symbol source"
        )
    r = source.probs @ conditional.matrix
    return DiscreteDistribution(conditional.output_alphabet, r)


def iterate(problem: RdpProblem, config: SolverConfig = SolverConfig()) -> tuple[RdpState, bool]:
    """Run the alternating updates from a uniform marginal.

    Stops when the sup-norm change of r between iterations drops below
    config.tolerance, or after max_iterations.  Returns the final state
    and whether the stopping tolerance was reached.
    """
    r = DiscreteDistribution.uniform(problem.reconstruction_alphabet)
    q = None
    converged = False
    iteration = 0
    for iteration in range(1, config.max_iterations + 1):
        q = update_conditional(problem, r)
        assert np.allclose(q.matrix.sum(axis=1), 1.0, atol=1e-12)
        r_new = update_marginal(problem.source, q)
        delta = float(np.abs(r_new.probs - r.probs).max())
        r = r_new
        if delta < config.tolerance:
            converged = True
            break
    return RdpState(conditional=q, marginal=r, iteration=iteration), converged


def _perception_bits(source: DiscreteDistribution, marginal: DiscreteDistribution) -> float:
    """KL(p || r) matching symbols by value; +inf where r lacks p's support."""
    total = 0.0
    for sym, prob in zip(source.alphabet, source.probs):
        if prob <= 0:
            continue
        idx = np.nonzero(marginal.alphabet == sym)[0]
        r_val = marginal.probs[idx[0]] if idx.size else 0.0
        if r_val <= 0:
            return math.inf
        total += prob * math.log2(prob / r_val)
    return max(0.0, total)


def evaluate(problem: RdpProblem, state: RdpState, iterations: int, converged: bool) -> RdpPoint:
    """Compute the (rate, distortion, perception) triple of a solver state."""
    joint = JointDistribution.from_conditional(problem.source, state.conditional)
    rate = mutual_information(joint)
    sq = (problem.source.alphabet[:, None] - state.conditional.output_alphabet[None, :]) ** 2
    distortion = float((joint.matrix * sq).sum())
    perception = _perception_bits(problem.source, state.marginal)
    return RdpPoint(
        rate=rate,
        distortion=distortion,
        perception=perception,
        alpha=problem.alpha,
        mu=problem.mu,
        iterations=iterations,
        converged=converged,
    )


def solve(problem: RdpProblem, config: SolverConfig = SolverConfig()) -> RdpPoint:
    """Solve one (alpha, mu) operating point.

    Non-convergence is reported through the flag, not an error; numeric
    failures (overflow, collapsed marginal) propagate as exceptions.
    """
    state, converged = iterate(problem, config)
    return evaluate(problem, state, state.iteration, converged)


def sweep(
    source: DiscreteDistribution,
    alpha_grid,
    mu_grid,
    config: SolverConfig = SolverConfig(),
    reconstruction_alphabet=None,
) -> list[RdpPoint]:
    """Trace operating points over the (alpha, mu) multiplier grid.

    Output is sorted by (alpha, mu).  A failure at one grid point is
    recorded in that point (NaN metrics plus the error message) and never
    aborts the rest of the sweep.
    """
    alphas = sorted(float(a) for a in alpha_grid)
    mus = sorted(float(m) for m in mu_grid)
    if not alphas or not mus:
        raise ValueError("alpha and mu grids must be non-empty")
    points: list[RdpPoint] = []
    for alpha in alphas:
        for mu in mus:
            problem = RdpProblem(
                source=source,
                reconstruction_alphabet=reconstruction_alphabet,
                alpha=alpha,
                mu=mu,
            )
            try:
                points.append(solve(problem, config))
            except SemcomError as exc:
                points.append(
                    RdpPoint(
                        rate=math.nan,
                        distortion=math.nan,
                        perception=math.nan,
                        alpha=alpha,
                        mu=mu,
                        iterations=0,
                        converged=False,
                        error=f"{type(exc).__name__}: {exc}",
                    )
                )
    return points


def sweep_to_csv(points: list[RdpPoint], path) -> None:
    """Write sweep results as CSV with the documented column set."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for pt in points:
            writer.writerow(
                [pt.alpha, pt.mu, pt.rate, pt.distortion, pt.perception, pt.iterations, pt.converged]
            )
