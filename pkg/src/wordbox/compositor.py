"""Background synthesis, layer blending and the flood-fill visibility check."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.ndimage import distance_transform_edt

from wordbox import kernels
from wordbox.blend import BlendMode, blend
from wordbox.layer import Layer, alpha_over, round_u8
from wordbox.resources import ResourceSet, load_texture, pick_texture
from wordbox.styler import random_crop

# alpha at or above this marks a pixel as target text for the visibility check
TEXT_ALPHA_CUTOFF = 128


@dataclass(eq=False)
class CompositeScene:
    background: Layer
    foreground: Layer
    midground: Optional[Layer] = None
    fg_protect_margin: int = 2

    def __post_init__(self):
        if not (self.background.alpha == 255).all():
            raise ValueError("background must be fully opaque")
        if self.fg_protect_margin < 0:
            raise ValueError("fg_protect_margin must be >= 0")


def make_background(resources, size: Tuple[int, int], bg_gray: int, rng: np.random.Generator,
                    opacity: Optional[float] = None, texture=None) -> Layer:
    """Solid ``bg_gray`` canvas with a random texture crop mixed in.

    ``resources`` may be a ResourceSet or a TexturePool; it is only
    consulted when ``texture`` is not given.  ``opacity`` defaults to a
    uniform draw from [0, 1].
    """
    w, h = size
    if w < 1 or h < 1:
        raise ValueError("background size must be at least 1x1")
    layer = Layer.solid(w, h, bg_gray)
    if opacity is None:
        opacity = float(rng.uniform())
    if opacity <= 0:
        return layer
    if texture is None:
        pool = resources.textures if isinstance(resources, ResourceSet) else resources
        texture = pick_texture(pool, rng)
    pixels = texture if isinstance(texture, np.ndarray) else load_texture(texture)
    crop = random_crop(pixels, w, h, rng)
    layer.pixels[..., :3] = round_u8((1.0 - opacity) * layer.rgb.astype(np.float64) + opacity * crop)
    return layer


def _place(layer: Layer, x: int, y: int, width: int, height: int) -> np.ndarray:
    """RGBA array of ``layer`` with its raster top-left at canvas ``(x, y)``, clipped."""
    out = np.zeros((height, width, 4), np.uint8)
    x0, y0 = max(0, x), max(0, y)
    x1, y1 = min(width, x + layer.width), min(height, y + layer.height)
    if x0 < x1 and y0 < y1:
        out[y0:y1, x0:x1] = layer.pixels[y0 - y:y1 - y, x0 - x:x1 - x]
    return out


def protected_mask(fg_alpha: np.ndarray, margin: int) -> np.ndarray:
    """Pixels within Euclidean distance ``margin`` of any foreground pixel."""
    mask = fg_alpha > 0
    if margin <= 0 or not mask.any():
        return mask
    return distance_transform_edt(~mask) <= margin


def _blend_over(base_rgb: np.ndarray, top: np.ndarray, mode) -> np.ndarray:
    """Blend ``top`` onto an opaque base with ``mode``, weighted by the top alpha."""
    blended = top.copy()
    blended[..., :3] = blend(base_rgb, top[..., :3], mode)
    base = np.empty(top.shape, np.uint8)
    base[..., :3] = base_rgb
    base[..., 3] = 255
    return alpha_over(blended, base)[..., :3]


def composite(scene: CompositeScene, mid_mode=BlendMode.NORMAL, fg_mode=BlendMode.NORMAL,
              mid_shift: Tuple[int, int] = (0, 0)) -> Layer:
    """Merge noise text into the background, then the target text on top.

    The foreground is positioned by its frame offset relative to the
    background.  The midground raster's top-left goes to ``mid_shift``
    in canvas pixels.  Mid-ground pixels within ``fg_protect_margin`` of
    any foreground pixel are dropped before blending.
    """
    bg = scene.background
    w, h = bg.width, bg.height
    fg = _place(scene.foreground, scene.foreground.offset_x - bg.offset_x,
                scene.foreground.offset_y - bg.offset_y, w, h)
    rgb = bg.rgb.copy()
    if scene.midground is not None:
        mid = _place(scene.midground, mid_shift[0], mid_shift[1], w, h)
        mid[protected_mask(fg[..., 3], scene.fg_protect_margin)] = 0
        if mid[..., 3].any():
            rgb = _blend_over(rgb, mid, mid_mode)
    rgb = _blend_over(rgb, fg, fg_mode)
    out = np.empty((h, w, 4), np.uint8)
    out[..., :3] = rgb
    out[..., 3] = 255
    return Layer(out, bg.offset_x, bg.offset_y)


def to_gray(image) -> np.ndarray:
    """Integer mean of R, G and B."""
    px = image.pixels if isinstance(image, Layer) else np.asarray(image)
    if px.ndim == 2:
        return px.astype(np.uint8)
    return (px[..., :3].astype(np.uint16).sum(axis=2) // 3).astype(np.uint8)


def text_mask(fg_alpha) -> np.ndarray:
    alpha = fg_alpha.alpha if isinstance(fg_alpha, Layer) else np.asarray(fg_alpha)
    return alpha >= TEXT_ALPHA_CUTOFF


def leak_ratio(image, fg_alpha, tolerance: int = 10) -> Optional[float]:
    """Share of text boundary pixels whose fill region escapes the text.

    Returns None when the text has no boundary pixels.
    """
    leaking, total = kernels.leak_counts(to_gray(image), text_mask(fg_alpha), tolerance)
    if total == 0:
        return None
    return leaking / total


def visibility_check(image, fg_alpha, tolerance: int = 10, threshold: float = 0.5) -> bool:
    """True to keep the image, False when text and background are indistinguishable."""
    ratio = leak_ratio(image, fg_alpha, tolerance)
    if ratio is None:
        return False
    return ratio <= threshold
