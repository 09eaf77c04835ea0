"""RGBA raster layers placed in a shared integer coordinate frame.

Every pipeline stage consumes and produces :class:`Layer` objects.  Pixels
are stored straight (not premultiplied) as ``uint8`` with shape
``(height, width, 4)``.  Fully transparent pixels always carry RGB 0 so
that layers built along different code paths compare bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import cv2
import numpy as np


def round_u8(values: np.ndarray) -> np.ndarray:
    """Round half up and clamp to ``uint8``."""
    return np.clip(np.floor(values + 0.5), 0, 255).astype(np.uint8)


@dataclass(eq=False)
class Layer:
    pixels: np.ndarray
    offset_x: int = 0
    offset_y: int = 0

    def __post_init__(self):
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 4:
            raise ValueError(f"expected (H, W, 4) pixels, got {self.pixels.shape}")
        if self.pixels.shape[0] < 1 or self.pixels.shape[1] < 1:
            raise ValueError("layer must be at least 1x1")
        if self.pixels.dtype != np.uint8:
            raise ValueError("layer pixels must be uint8")

    @classmethod
    def blank(cls, width: int, height: int, offset_x: int = 0, offset_y: int = 0) -> "Layer":
        return cls(np.zeros((height, width, 4), np.uint8), offset_x, offset_y)

    @classmethod
    def from_alpha(cls, alpha: np.ndarray, gray: int = 0, offset_x: int = 0, offset_y: int = 0) -> "Layer":
        pixels = np.zeros(alpha.shape + (4,), np.uint8)
        pixels[..., 3] = alpha
        pixels[alpha > 0, :3] = gray
        return cls(pixels, offset_x, offset_y)

    @classmethod
    def solid(cls, width: int, height: int, rgb, offset_x: int = 0, offset_y: int = 0) -> "Layer":
        pixels = np.empty((height, width, 4), np.uint8)
        pixels[..., :3] = rgb
        pixels[..., 3] = 255
        return cls(pixels, offset_x, offset_y)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def alpha(self) -> np.ndarray:
        return self.pixels[..., 3]

    @property
    def rgb(self) -> np.ndarray:
        return self.pixels[..., :3]

    @property
    def extent(self) -> Tuple[int, int, int, int]:
        """``(left, top, right, bottom)`` of the raster in frame coordinates."""
        return (self.offset_x, self.offset_y,
                self.offset_x + self.width, self.offset_y + self.height)

    def copy(self) -> "Layer":
        return Layer(self.pixels.copy(), self.offset_x, self.offset_y)

    def content_bbox(self) -> Optional[Tuple[int, int, int, int]]:
        """Tight frame-coordinate bbox of non-transparent pixels, or None."""
        ys, xs = np.nonzero(self.alpha)
        if len(xs) == 0:
            return None
        return (self.offset_x + int(xs.min()), self.offset_y + int(ys.min()),
                self.offset_x + int(xs.max()) + 1, self.offset_y + int(ys.max()) + 1)

    def crop_to_content(self) -> "Layer":
        bbox = self.content_bbox()
        if bbox is None:
            return Layer.blank(1, 1, self.offset_x, self.offset_y)
        x0, y0, x1, y1 = bbox
        px = self.pixels[y0 - self.offset_y:y1 - self.offset_y, x0 - self.offset_x:x1 - self.offset_x]
        return Layer(px.copy(), x0, y0)

    def translated(self, dx: int, dy: int) -> "Layer":
        return Layer(self.pixels.copy(), self.offset_x + dx, self.offset_y + dy)

    def normalized(self) -> "Layer":
        """Zero the RGB of fully transparent pixels."""
        out = self.copy()
        out.pixels[out.alpha == 0, :3] = 0
        return out


def layers_equal(a: Layer, b: Layer) -> bool:
    return (a.offset_x == b.offset_x and a.offset_y == b.offset_y
            and a.pixels.shape == b.pixels.shape and np.array_equal(a.pixels, b.pixels))


def alpha_over(top: np.ndarray, bottom: np.ndarray) -> np.ndarray:
    """Porter-Duff *over* for two equally shaped straight-alpha RGBA arrays."""
    ta = top[..., 3:4].astype(np.float64) / 255.0
    ba = bottom[..., 3:4].astype(np.float64) / 255.0
    out_a = ta + ba * (1.0 - ta)
    num = top[..., :3] * ta + bottom[..., :3] * ba * (1.0 - ta)
    safe = np.where(out_a > 0, out_a, 1.0)
    out = np.empty(top.shape, np.uint8)
    out[..., :3] = np.where(out_a > 0, round_u8(num / safe), 0)
    out[..., 3] = round_u8(out_a[..., 0] * 255.0)
    return out


def union_extent(layers: Iterable[Layer]) -> Tuple[int, int, int, int]:
    exts = [layer.extent for layer in layers]
    return (min(e[0] for e in exts), min(e[1] for e in exts),
            max(e[2] for e in exts), max(e[3] for e in exts))


def paste_over(canvas: Layer, src: Layer) -> None:
    """Composite ``src`` over ``canvas`` in place, clipped to the canvas."""
    x0 = max(canvas.offset_x, src.offset_x)
    y0 = max(canvas.offset_y, src.offset_y)
    x1 = min(canvas.offset_x + canvas.width, src.offset_x + src.width)
    y1 = min(canvas.offset_y + canvas.height, src.offset_y + src.height)
    if x0 >= x1 or y0 >= y1:
        return
    dst = canvas.pixels[y0 - canvas.offset_y:y1 - canvas.offset_y, x0 - canvas.offset_x:x1 - canvas.offset_x]
    top = src.pixels[y0 - src.offset_y:y1 - src.offset_y, x0 - src.offset_x:x1 - src.offset_x]
    dst[...] = alpha_over(top, dst)


def stack(layers: Iterable[Layer]) -> Layer:
    """Composite layers bottom-to-top onto a canvas covering their union."""
    layers = list(layers)
    x0, y0, x1, y1 = union_extent(layers)
    canvas = Layer.blank(x1 - x0, y1 - y0, x0, y0)
    for layer in layers:
        paste_over(canvas, layer)
    return canvas


def pad(layer: Layer, top: int, bottom: int, left: int, right: int) -> Layer:
    px = np.pad(layer.pixels, ((top, bottom), (left, right), (0, 0)))
    return Layer(px, layer.offset_x - left, layer.offset_y - top)


def dilate_alpha(alpha: np.ndarray, radius: int) -> np.ndarray:
    """Grey dilation with a disk of ``radius`` px; the array grows by radius per side."""
    if radius <= 0:
        return alpha.copy()
    padded = np.pad(alpha, radius)
    kernel = cv2.getStructuringElement(cv2.MORPH_ELLIPSE, (2 * radius + 1, 2 * radius + 1))
    return cv2.dilate(padded, kernel)


def erode_alpha(alpha: np.ndarray, radius: int) -> np.ndarray:
    if radius <= 0:
        return alpha.copy()
    kernel = cv2.getStructuringElement(cv2.MORPH_ELLIPSE, (2 * radius + 1, 2 * radius + 1))
    return cv2.erode(alpha, kernel, borderType=cv2.BORDER_CONSTANT, borderValue=0)


def _premultiplied(layer: Layer) -> np.ndarray:
    px = layer.pixels.astype(np.float32)
    px[..., :3] *= px[..., 3:4] / 255.0
    return px


def _unpremultiplied(prem: np.ndarray) -> np.ndarray:
    a = prem[..., 3:4]
    out = np.empty(prem.shape, np.uint8)
    safe = np.where(a > 0, a, 1.0)
    rgb = np.where(a > 0, prem[..., :3] * 255.0 / safe, 0.0)
    alpha = round_u8(a[..., 0])
    out[..., :3] = np.where(alpha[..., None] > 0, round_u8(rgb), 0)
    out[..., 3] = alpha
    return out


def warp(layer: Layer, matrix: np.ndarray, max_dim: Optional[int] = None) -> Layer:
    """Apply a 3x3 projective map given in pixel-edge coordinates.

    The result is nudged by at most half a pixel per axis so the top-left
    of the mapped bounding box falls on the pixel grid; a 90 degree turn of
    an odd-by-even raster then stays exact instead of straddling pixels.
    The output canvas holds every mapped corner.  Resampling is bilinear
    on premultiplied colour.
    """
    w, h = layer.width, layer.height
    corners = np.array([[0, 0, 1], [w, 0, 1], [w, h, 1], [0, h, 1]], np.float64).T
    mapped = matrix @ corners
    mapped = mapped[:2] / mapped[2]
    eps = 1e-6
    x_min = math.floor(mapped[0].min() + 0.5)
    y_min = math.floor(mapped[1].min() + 0.5)
    snap_x, snap_y = x_min - mapped[0].min(), y_min - mapped[1].min()
    out_w = max(1, math.ceil(mapped[0].max() + snap_x - eps) - x_min)
    out_h = max(1, math.ceil(mapped[1].max() + snap_y - eps) - y_min)
    if max_dim is not None and max(out_w, out_h) > max_dim:
        raise ValueError(f"warped canvas {out_w}x{out_h} exceeds max dimension {max_dim}")
    shift = np.array([[1, 0, snap_x - x_min], [0, 1, snap_y - y_min], [0, 0, 1]], np.float64)
    to_edge = np.array([[1, 0, 0.5], [0, 1, 0.5], [0, 0, 1]], np.float64)
    to_center = np.array([[1, 0, -0.5], [0, 1, -0.5], [0, 0, 1]], np.float64)
    m = to_center @ shift @ matrix @ to_edge
    prem = _premultiplied(layer)
    out = cv2.warpPerspective(prem, m, (out_w, out_h), flags=cv2.INTER_LINEAR,
                              borderMode=cv2.BORDER_CONSTANT, borderValue=0)
    return Layer(_unpremultiplied(out), layer.offset_x + x_min, layer.offset_y + y_min)


def remap(layer: Layer, map_x: np.ndarray, map_y: np.ndarray) -> Layer:
    """Sample ``layer`` at ``(map_x, map_y)`` (pixel-centre coordinates)."""
    prem = _premultiplied(layer)
    out = cv2.remap(prem, map_x.astype(np.float32), map_y.astype(np.float32),
                    interpolation=cv2.INTER_LINEAR, borderMode=cv2.BORDER_CONSTANT, borderValue=0)
    return Layer(_unpremultiplied(out), layer.offset_x, layer.offset_y)
