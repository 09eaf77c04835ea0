"""Final image degradations: noise, blur, resolution loss and JPEG artefacts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

import cv2
import numpy as np

from wordbox.layer import Layer, round_u8


@dataclass(frozen=True)
class GaussianNoise:
    sigma: float


@dataclass(frozen=True)
class GaussianBlur:
    radius: float


@dataclass(frozen=True)
class Resize:
    scale: float

    def __post_init__(self):
        if not 0.0 < self.scale <= 1.0:
            raise ValueError("resize scale must be in (0, 1]")


@dataclass(frozen=True)
class MedianBlur:
    kernel: int

    def __post_init__(self):
        if self.kernel < 1 or self.kernel % 2 == 0:
            raise ValueError("median kernel must be odd and >= 1")


@dataclass(frozen=True)
class Jpeg:
    quality: int

    def __post_init__(self):
        if not 1 <= self.quality <= 100:
            raise ValueError("jpeg quality must be in [1, 100]")


PostOp = Union[GaussianNoise, GaussianBlur, Resize, MedianBlur, Jpeg]
# order in which sampled ops are applied
OP_ORDER = (GaussianNoise, GaussianBlur, Resize, MedianBlur, Jpeg)


@dataclass(frozen=True)
class PostParams:
    ops: Tuple[PostOp, ...] = ()


def _apply(rgb: np.ndarray, op: PostOp, rng: np.random.Generator) -> np.ndarray:
    if isinstance(op, GaussianNoise):
        if op.sigma <= 0:
            return rgb
        return round_u8(rgb + rng.normal(0.0, op.sigma, rgb.shape))
    if isinstance(op, GaussianBlur):
        if op.radius <= 0:
            return rgb
        return cv2.GaussianBlur(rgb, (0, 0), sigmaX=op.radius, borderType=cv2.BORDER_REPLICATE)
    if isinstance(op, Resize):
        if op.scale >= 1.0:
            return rgb
        h, w = rgb.shape[:2]
        small = cv2.resize(rgb, (max(1, round(w * op.scale)), max(1, round(h * op.scale))),
                           interpolation=cv2.INTER_AREA)
        return cv2.resize(small, (w, h), interpolation=cv2.INTER_LINEAR)
    if isinstance(op, MedianBlur):
        if op.kernel == 1:
            return rgb
        return cv2.medianBlur(np.ascontiguousarray(rgb), op.kernel)
    if isinstance(op, Jpeg):
        ok, buf = cv2.imencode(".jpg", rgb[..., ::-1], [cv2.IMWRITE_JPEG_QUALITY, op.quality])
        if not ok:
            raise RuntimeError("JPEG encoding failed")
        return cv2.imdecode(buf, cv2.IMREAD_COLOR)[..., ::-1]
    raise TypeError(f"unknown post-processing op {op!r}")


def postprocess(layer: Layer, params: PostParams, rng: np.random.Generator) -> Layer:
    """Apply ``params.ops`` in order; the output keeps the input size and is opaque."""
    rgb = np.ascontiguousarray(layer.rgb)
    for op in params.ops:
        rgb = np.ascontiguousarray(_apply(rgb, op, rng))
    out = np.empty(layer.pixels.shape, np.uint8)
    out[..., :3] = rgb
    out[..., 3] = 255
    return Layer(out, layer.offset_x, layer.offset_y)
