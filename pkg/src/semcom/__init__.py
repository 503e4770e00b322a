"""Numerical toolkit for task-oriented semantic communications.

Core pieces: discrete information measures, a rate-distortion-perception
solver, a quantization-plus-Gaussian semantic channel with capacity
bounds, and a feature-frame transmission pipeline with a binary wire
format.
"""

from .capacity import (
    CapacityBoundsResult,
    NoiseDensity,
    QuadratureConfig,
    capacity_bounds_sweep,
    capacity_lower,
    kl_gap,
    semantic_noise_pdf,
)
from .channel import (
    ChannelConfig,
    ChannelStreams,
    Quantizer,
    RayleighFading,
    SemanticNoiseModel,
    equalize,
    load_channel_config,
    quantize,
    quantizer_entropy_bound,
    sample_noise,
    save_channel_config,
    transmit,
)
from .distributions import ConditionalDistribution, DiscreteDistribution, JointDistribution
from .errors import (
    AbsoluteContinuityViolation,
    BadMagic,
    EmptySelection,
    FrameFormatError,
    GridTooCoarse,
    InvalidDistribution,
    LengthMismatch,
    NumericOverflow,
    SemcomError,
    TruncatedFrame,
    VersionUnsupported,
    ZeroGain,
    ZeroMarginal,
)
from .frames import (
    CompletionPolicy,
    FeatureFrame,
    complete_features,
    decode_frame,
    encode_frame,
    encoded_length,
    read_frames,
    select_features,
    write_frames,
)
from .measures import chain_identity_residual, entropy, kl_divergence, mutual_information, psnr
from .pipeline import RunReport, run_pipeline, transmit_frames
from .rdp import (
    RdpPoint,
    RdpProblem,
    RdpState,
    SolverConfig,
    iterate,
    solve,
    sweep,
    sweep_to_csv,
    update_conditional,
    update_marginal,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
