"""Per-character glyph boards and their placement on a line or a parabola."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from PIL import Image, ImageDraw, ImageFont
from scipy.ndimage import gaussian_filter

from wordbox.layer import Layer, dilate_alpha, erode_alpha, remap, stack, warp
from wordbox.resources import FontInfo


class GlyphRenderError(RuntimeError):
    """A covered codepoint produced no raster (broken font)."""


@dataclass(frozen=True)
class ShapeParams:
    font: FontInfo
    font_size: int
    thickness: int = 0
    char_margin: int = 0
    curve_gap: int = 0
    curved: bool = False
    curve_upward: bool = False
    rotate_with_slope: bool = False
    # (alpha, sigma) of the displacement field, or None
    elastic: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.font_size <= 0:
            raise ValueError("font_size must be positive")
        if self.curve_gap < 0:
            raise ValueError("curve_gap must be >= 0")
        if self.elastic is not None and self.elastic[1] <= 0:
            raise ValueError("elastic sigma must be positive")


@dataclass(frozen=True)
class CharBoard:
    char: str
    layer: Layer
    advance: float
    # centre of the character cell, relative to the pen origin
    center: Tuple[float, float]


@functools.lru_cache(maxsize=256)
def load_font(path: str, size: int) -> ImageFont.FreeTypeFont:
    return ImageFont.truetype(path, size)


def _round(x: float) -> int:
    return math.floor(x + 0.5)


def render_char_boards(text: str, params: ShapeParams) -> List[CharBoard]:
    """Rasterize each character of ``text`` onto its own board.

    Board layers are cropped tight to the glyph and positioned relative to
    the pen origin, with y = 0 on the ascender line so that baselines line
    up when boards share a row.
    """
    font = load_font(params.font.path, params.font_size)
    ascent, descent = font.getmetrics()
    center_y = (ascent + descent) / 2.0
    boards = []
    for ch in text:
        advance = float(font.getlength(ch))
        center = (advance / 2.0, center_y)
        if ch.isspace():
            boards.append(CharBoard(ch, Layer.blank(1, 1), advance, center))
            continue
        left, top, right, bottom = font.getbbox(ch, anchor="la")
        if right <= left or bottom <= top:
            raise GlyphRenderError(f"empty glyph for {ch!r} in {params.font.path}")
        canvas = Image.new("L", (right - left, bottom - top), 0)
        ImageDraw.Draw(canvas).text((-left, -top), ch, fill=255, font=font, anchor="la")
        alpha = np.asarray(canvas, dtype=np.uint8)
        k = params.thickness
        if k > 0:
            alpha = dilate_alpha(alpha, k)
            left, top = left - k, top - k
        elif k < 0:
            alpha = erode_alpha(alpha, -k)
        layer = Layer.from_alpha(alpha, 0, left, top).crop_to_content()
        if not layer.alpha.any():
            raise GlyphRenderError(f"glyph {ch!r} vanished after thickness {k}")
        boards.append(CharBoard(ch, layer, advance, center))
    return boards


def elastic_field(shape: Tuple[int, int], alpha: float, sigma: float,
                  rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Smoothed random displacement field scaled so its largest vector is ``alpha`` px."""
    dx = gaussian_filter(rng.uniform(-1.0, 1.0, shape), sigma, mode="reflect")
    dy = gaussian_filter(rng.uniform(-1.0, 1.0, shape), sigma, mode="reflect")
    peak = float(np.sqrt(dx * dx + dy * dy).max())
    if peak == 0.0:
        return np.zeros(shape), np.zeros(shape)
    return dx * (alpha / peak), dy * (alpha / peak)


def apply_elastic(board: CharBoard, alpha: float, sigma: float, rng: np.random.Generator) -> CharBoard:
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if alpha == 0 or board.char.isspace():
        return board
    grow = math.ceil(alpha)
    src = board.layer
    padded = Layer(np.pad(src.pixels, ((grow, grow), (grow, grow), (0, 0))),
                   src.offset_x - grow, src.offset_y - grow)
    dx, dy = elastic_field((padded.height, padded.width), alpha, sigma, rng)
    ys, xs = np.mgrid[0:padded.height, 0:padded.width]
    out = remap(padded, xs + dx, ys + dy).crop_to_content()
    return replace(board, layer=out)


def _pen_positions(boards: Sequence[CharBoard], char_margin: float) -> List[int]:
    xs, pen = [], 0.0
    for b in boards:
        xs.append(_round(pen))
        pen += b.advance + char_margin
    return xs


def layout_straight(boards: Sequence[CharBoard], char_margin: float = 0) -> Layer:
    if not boards:
        raise ValueError("need at least one board")
    xs = _pen_positions(boards, char_margin)
    placed = [b.layer.translated(x, 0) for b, x in zip(boards, xs)]
    return stack(placed).crop_to_content()


def rotate_about(layer: Layer, cx: float, cy: float, degrees: float) -> Layer:
    """Rotate by ``degrees`` (clockwise on screen) about frame point ``(cx, cy)``."""
    t = math.radians(degrees)
    c, s = math.cos(t), math.sin(t)
    lx, ly = cx - layer.offset_x, cy - layer.offset_y
    m = np.array([[c, -s, lx - c * lx + s * ly],
                  [s, c, ly - s * lx - c * ly],
                  [0, 0, 1]], np.float64)
    return warp(layer, m)


def curve_offsets(centers_x: Sequence[float], gap: float, upward: bool = False) -> Tuple[List[float], List[float]]:
    """Vertical offsets and slopes of board centres on the parabola.

    The vertex sits halfway between the first and last centre; centres
    are normalised to [-1, 1] and the extreme ones sit ``gap`` px away
    from the vertex height.
    """
    first, last = centers_x[0], centers_x[-1]
    mid, half = (first + last) / 2.0, (last - first) / 2.0
    a = -gap if upward else gap
    if half <= 0:
        return [0.0] * len(centers_x), [0.0] * len(centers_x)
    dys = [a * ((x - mid) / half) ** 2 for x in centers_x]
    slopes = [2.0 * a * (x - mid) / (half * half) for x in centers_x]
    return dys, slopes


def layout_curved(boards: Sequence[CharBoard], char_margin: float = 0, gap: float = 0,
                  rotate_with_slope: bool = False, upward: bool = False) -> Layer:
    if not boards:
        raise ValueError("need at least one board")
    if gap < 0:
        raise ValueError("gap must be >= 0")
    xs = _pen_positions(boards, char_margin)
    centers_x = [x + b.center[0] for b, x in zip(boards, xs)]
    dys, slopes = curve_offsets(centers_x, gap, upward)
    placed = []
    for b, x, dy, slope in zip(boards, xs, dys, slopes):
        layer = b.layer.translated(x, _round(dy))
        if rotate_with_slope and slope != 0 and not b.char.isspace():
            cx, cy = x + b.center[0], _round(dy) + b.center[1]
            layer = rotate_about(layer, cx, cy, math.degrees(math.atan(slope)))
        placed.append(layer)
    return stack(placed).crop_to_content()


def shape_text(text: str, params: ShapeParams, rng: np.random.Generator) -> Layer:
    """Boards, optional elastic distortion, then straight or curved layout."""
    boards = render_char_boards(text, params)
    if params.elastic is not None:
        e_alpha, e_sigma = params.elastic
        boards = [apply_elastic(b, e_alpha, e_sigma, rng) for b in boards]
    if params.curved:
        return layout_curved(boards, params.char_margin, params.curve_gap,
                             params.rotate_with_slope, params.curve_upward)
    return layout_straight(boards, params.char_margin)
