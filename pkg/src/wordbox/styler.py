"""Text colour, texture fill and boundary effects (border, shadow, extrude)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from wordbox.layer import Layer, dilate_alpha, round_u8, stack
from wordbox.resources import ColorMap, TextureRef, load_texture


@dataclass(frozen=True)
class Border:
    width: int
    gray: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("border width must be >= 1")


@dataclass(frozen=True)
class Shadow:
    dx: int
    dy: int
    gray: int


@dataclass(frozen=True)
class Extrude:
    depth: int
    gray: int
    # unit diagonal direction of the stacked copies
    direction: Tuple[int, int] = (1, 1)

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("extrude depth must be >= 1")
        if any(abs(d) != 1 for d in self.direction):
            raise ValueError("extrude direction must be a unit diagonal")


Effect = Union[Border, Shadow, Extrude]


@dataclass(frozen=True)
class StyleParams:
    colormap_entry_index: int
    texture: Optional[TextureRef] = None
    texture_alpha: float = 0.0
    effect: Optional[Effect] = None

    def __post_init__(self):
        if not 0.0 <= self.texture_alpha <= 1.0:
            raise ValueError("texture_alpha must be in [0, 1]")


def sample_entry_colors(entry, rng: np.random.Generator) -> List[int]:
    out = []
    for mean, std in entry:
        value = rng.normal(mean, std) if std > 0 else mean
        out.append(int(min(255.0, max(0.0, np.floor(value + 0.5)))))
    return out


def sample_colors(cmap: ColorMap, rng: np.random.Generator) -> List[int]:
    """Pick an entry uniformly, then one gray per cluster in order.

    The first value colours the text, the second the background and the
    third, when the entry has one, the text effect.
    """
    entry = cmap.entries[int(rng.integers(len(cmap.entries)))]
    return sample_entry_colors(entry, rng)


def colorize(layer: Layer, gray: int) -> Layer:
    out = layer.copy()
    out.pixels[out.alpha > 0, :3] = gray
    return out


def random_crop(texture: np.ndarray, width: int, height: int, rng: np.random.Generator) -> np.ndarray:
    """Random ``height x width`` crop, tiling the texture first if it is too small."""
    th, tw = texture.shape[:2]
    if tw < width or th < height:
        texture = np.tile(texture, (-(-height // th), -(-width // tw), 1))
        th, tw = texture.shape[:2]
    x = int(rng.integers(tw - width + 1))
    y = int(rng.integers(th - height + 1))
    return texture[y:y + height, x:x + width]


def apply_texture(layer: Layer, texture, alpha: float, rng: np.random.Generator) -> Layer:
    """Blend a random texture crop into the text colour at opacity ``alpha``.

    ``texture`` may be a TextureRef, a path, or an RGB array.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must be in [0, 1]")
    pixels = texture if isinstance(texture, np.ndarray) else load_texture(texture)
    crop = random_crop(pixels, layer.width, layer.height, rng)
    out = layer.copy()
    mask = out.alpha > 0
    mixed = (1.0 - alpha) * out.rgb[mask].astype(np.float64) + alpha * crop[mask]
    out.pixels[mask, :3] = round_u8(mixed)
    return out


def _under(layer: Layer, effect_layers: List[Layer]) -> Layer:
    return stack(effect_layers + [layer])


def apply_effect(layer: Layer, effect: Optional[Effect]) -> Layer:
    """Draw ``effect`` beneath the text; the canvas grows to fit it."""
    if effect is None:
        return layer.copy()
    if isinstance(effect, Border):
        w = effect.width
        ring = Layer.from_alpha(dilate_alpha(layer.alpha, w), effect.gray,
                                layer.offset_x - w, layer.offset_y - w)
        return _under(layer, [ring])
    if isinstance(effect, Shadow):
        shadow = Layer.from_alpha(layer.alpha, effect.gray,
                                  layer.offset_x + effect.dx, layer.offset_y + effect.dy)
        return _under(layer, [shadow])
    if isinstance(effect, Extrude):
        sx, sy = effect.direction
        # deepest copy first so nearer copies sit on top
        copies = [Layer.from_alpha(layer.alpha, effect.gray,
                                   layer.offset_x + k * sx, layer.offset_y + k * sy)
                  for k in range(effect.depth, 0, -1)]
        return _under(layer, copies)
    raise TypeError(f"unknown effect {effect!r}")
