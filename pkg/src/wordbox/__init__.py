"""Synthetic word-box image generation for scene text recognition training."""

from wordbox.blend import BlendMode, blend, blend_pixel
from wordbox.config import GenConfig, load_config
from wordbox.kernels import BACKEND
from wordbox.layer import Layer
from wordbox.pipeline import generate_batch, generate_sample, preview, stats
from wordbox.resources import load_resources

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BlendMode", "GenConfig", "Layer", "blend", "blend_pixel", "generate_batch",
    "generate_sample", "load_config", "load_resources", "preview", "stats",
]
