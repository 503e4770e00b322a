"""Finite probability objects: marginal, conditional, and joint distributions.

All three types are immutable after construction (arrays are copied and
marked read-only), validate their normalization to 1e-12, and silently
renormalize only when the deviation is small enough (< 1e-9) to be float
accumulation rather than a bug.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidDistribution

NORM_TOL = 1e-12
RENORM_TOL = 1e-9


def _clean_probs(values, shape_name: str) -> np.ndarray:
    p = np.asarray(values, dtype=np.float64)
    if p.size == 0:
        raise InvalidDistribution(f"{shape_name}: empty probability array")
    if not np.all(np.isfinite(p)):
        raise InvalidDistribution(f"{shape_name}: non-finite probabilities")
    if np.any(p < 0):
        raise InvalidDistribution(f"{shape_name}: negative probability {p.min()}")
    total = p.sum()
    if abs(total - 1.0) > RENORM_TOL:
        raise InvalidDistribution(f"{shape_name}: probabilities sum to {total}, not 1")
    if abs(total - 1.0) > NORM_TOL:
        p = p / total
    p = p.copy()
    p.setflags(write=False)
    return p


def _clean_values(values, name: str) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise InvalidDistribution(f"{name}: must be a non-empty 1-D array")
    if not np.all(np.isfinite(v)):
        raise InvalidDistribution(f"{name}: non-finite symbols")
    if np.any(np.diff(v) <= 0):
        raise InvalidDistribution(f"{name}: symbols must be strictly increasing")
    v = v.copy()
    v.setflags(write=False)
    return v


@dataclass(frozen=True)
class DiscreteDistribution:
    """Probability vector over a strictly increasing real alphabet."""

    alphabet: np.ndarray
    probs: np.ndarray

    def __init__(self, alphabet, probs):
        object.__setattr__(self, "alphabet", _clean_values(alphabet, "alphabet"))
        object.__setattr__(self, "probs", _clean_probs(probs, "probs"))
        if self.alphabet.shape != self.probs.shape:
            raise InvalidDistribution(
                f"alphabet has {self.alphabet.size} symbols but probs has {self.probs.size}"
            )

    def __len__(self) -> int:
        return self.probs.size

    @classmethod
    def uniform(cls, alphabet) -> "DiscreteDistribution":
        alphabet = np.asarray(alphabet, dtype=np.float64)
        return cls(alphabet, np.full(alphabet.size, 1.0 / alphabet.size))

    def has_full_support(self) -> bool:
        return bool(np.all(self.probs > 0))


@dataclass(frozen=True)
class ConditionalDistribution:
    """Row-stochastic matrix: one output distribution per input symbol.

    Rows share the output alphabet; ``matrix[i, j]`` is the probability of
    output symbol j given input symbol i.
    """

    output_alphabet: np.ndarray
    matrix: np.ndarray

    def __init__(self, output_alphabet, matrix):
        object.__setattr__(
            self, "output_alphabet", _clean_values(output_alphabet, "output_alphabet")
        )
        m = np.asarray(matrix, dtype=np.float64)
        if m.ndim != 2:
            raise InvalidDistribution("conditional matrix must be 2-D")
        if m.shape[1] != self.output_alphabet.size:
            raise InvalidDistribution(
                f"matrix has {m.shape[1]} columns but output alphabet has "
                f"{self.output_alphabet.size} symbols"
            )
        rows = [_clean_probs(row, f"row {i}") for i, row in enumerate(m)]
        m = np.stack(rows)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n_inputs(self) -> int:
        return self.matrix.shape[0]

    def row(self, i: int) -> DiscreteDistribution:
        return DiscreteDistribution(self.output_alphabet, self.matrix[i])


@dataclass(frozen=True)
class JointDistribution:
    """Joint probability matrix over (x, y) pairs with marginal accessors.

    Axis values default to 0..n-1 when not supplied; they only matter for
    operations that need the symbols themselves (e.g. distortion).
    """

    matrix: np.ndarray
    x_values: np.ndarray = field(default=None)
    y_values: np.ndarray = field(default=None)

    def __init__(self, matrix, x_values=None, y_values=None):
        m = np.asarray(matrix, dtype=np.float64)
        if m.ndim != 2 or m.size == 0:
            raise InvalidDistribution("joint matrix must be a non-empty 2-D array")
        flat = _clean_probs(m.ravel(), "joint")
        m = flat.reshape(m.shape).copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if x_values is None:
            x_values = np.arange(m.shape[0], dtype=np.float64)
        if y_values is None:
            y_values = np.arange(m.shape[1], dtype=np.float64)
        object.__setattr__(self, "x_values", _clean_values(x_values, "x_values"))
        object.__setattr__(self, "y_values", _clean_values(y_values, "y_values"))
        if self.x_values.size != m.shape[0] or self.y_values.size != m.shape[1]:
            raise InvalidDistribution("axis values do not match joint matrix shape")

    @classmethod
    def from_conditional(
        cls, source: DiscreteDistribution, conditional: ConditionalDistribution
    ) -> "JointDistribution":
        """Couple a source with a channel: j(x, y) = p(x) q(y|x)."""
        if conditional.n_inputs != len(source):
            raise InvalidDistribution(
                f"conditional has {conditional.n_inputs} rows for a "
                f"{len(source)}-symbol source"
            )
        j = source.probs[:, None] * conditional.matrix
        return cls(j, source.alphabet, conditional.output_alphabet)

    def marginal_x(self) -> DiscreteDistribution:
        return DiscreteDistribution(self.x_values, self.matrix.sum(axis=1))

    def marginal_y(self) -> DiscreteDistribution:
        return DiscreteDistribution(self.y_values, self.matrix.sum(axis=0))
