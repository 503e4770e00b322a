"""Seedable counter-based random streams.

All randomness in the toolkit flows through numpy's Philox generator
(counter-based, so streams derived from distinct entropy tuples are
independent by construction).  Stream splitting is done by seeding a
SeedSequence with the tuple ``(seed, stream, frame_id)``: the same tuple
always reproduces the same draws, and distinct tuples give statistically
independent streams.  Noise, fading, and completion sampling each own a
stream id so that, e.g., toggling fading on or off never perturbs the
noise draws.
"""

from __future__ import annotations

import numpy as np

NOISE_STREAM = 0
FADING_STREAM = 1
COMPLETION_STREAM = 2


def make_rng(seed: int, stream: int = 0, frame_id: int = 0) -> np.random.Generator:
    """Return the Philox generator for (seed, stream, frame_id)."""
    ss = np.random.SeedSequence(entropy=(int(seed) & (2**64 - 1), int(stream), int(frame_id)))
    return np.random.Generator(np.random.Philox(ss))
