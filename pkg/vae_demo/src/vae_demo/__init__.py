"""Toy-scale robust disentangling VAE feeding the feature-transmission pipeline."""

from .config import ChannelSpec, VaeConfig, load_channel_spec
from .frames_io import decode_frames, export_frames, traversal_grid
from .model import ConvDecoder, ConvEncoder, EncoderOutput, kl_to_prior, reparameterize
from .noise import inject_semantic_noise
from .objective import bernoulli_log_likelihood, eta_reconstruction, robust_loss
from .training import DivergedTraining, TrainedModel, load_model, save_model, train

__all__ = [name for name in dir() if not name.startswith("_")]
