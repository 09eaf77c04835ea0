"""Geometric distortions and detector-style margins."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import cv2
import numpy as np

from wordbox.layer import Layer, pad, warp

KINDS = ("stretch", "trapezoidate", "skew", "rotate", "none")
EDGES = ("top", "bottom", "left", "right")


class TransformError(ValueError):
    """The transformed canvas would exceed the configured size limit."""


@dataclass(frozen=True)
class TransformParams:
    kind: str = "none"
    stretch: Tuple[float, float] = (1.0, 1.0)
    trapezoid_edge: str = "top"
    trapezoid_ratio: float = 1.0
    skew_direction: str = "right"
    skew_angle: float = 0.0
    rotate_angle: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown transform kind {self.kind!r}")
        if min(self.stretch) <= 0:
            raise ValueError("stretch factors must be positive")
        if self.trapezoid_edge not in EDGES:
            raise ValueError(f"unknown trapezoid edge {self.trapezoid_edge!r}")
        if not 0.0 < self.trapezoid_ratio <= 1.0:
            raise ValueError("trapezoid ratio must be in (0, 1]")
        if self.skew_direction not in ("right", "left", "top", "bottom"):
            raise ValueError(f"unknown skew direction {self.skew_direction!r}")

    def is_identity(self) -> bool:
        return (self.kind == "none"
                or (self.kind == "stretch" and self.stretch == (1.0, 1.0))
                or (self.kind == "trapezoidate" and self.trapezoid_ratio == 1.0)
                or (self.kind == "skew" and self.skew_angle == 0.0)
                or (self.kind == "rotate" and self.rotate_angle % 360.0 == 0.0))


def _trapezoid_matrix(w: int, h: int, edge: str, ratio: float) -> np.ndarray:
    src = np.float32([[0, 0], [w, 0], [w, h], [0, h]])
    dst = src.copy()
    if edge in ("top", "bottom"):
        cut = (1.0 - ratio) * w / 2.0
        i, j = (0, 1) if edge == "top" else (3, 2)
        dst[i, 0] += cut
        dst[j, 0] -= cut
    else:
        cut = (1.0 - ratio) * h / 2.0
        i, j = (0, 3) if edge == "left" else (1, 2)
        dst[i, 1] += cut
        dst[j, 1] -= cut
    return cv2.getPerspectiveTransform(src, dst).astype(np.float64)


def transform_matrix(params: TransformParams, w: int, h: int) -> np.ndarray:
    """3x3 map in pixel-edge coordinates of a ``w x h`` raster."""
    if params.kind == "stretch":
        fx, fy = params.stretch
        return np.diag([fx, fy, 1.0])
    if params.kind == "trapezoidate":
        return _trapezoid_matrix(w, h, params.trapezoid_edge, params.trapezoid_ratio)
    if params.kind == "skew":
        t = math.tan(math.radians(params.skew_angle))
        # right/left lean the top edge; top/bottom lift or drop the right edge
        if params.skew_direction == "right":
            return np.array([[1, -t, t * h], [0, 1, 0], [0, 0, 1]], np.float64)
        if params.skew_direction == "left":
            return np.array([[1, t, 0], [0, 1, 0], [0, 0, 1]], np.float64)
        if params.skew_direction == "top":
            return np.array([[1, 0, 0], [-t, 1, t * w], [0, 0, 1]], np.float64)
        return np.array([[1, 0, 0], [t, 1, 0], [0, 0, 1]], np.float64)
    if params.kind == "rotate":
        # positive angles turn anticlockwise on screen (y axis points down)
        r = math.radians(params.rotate_angle)
        c, s = math.cos(r), math.sin(r)
        cx, cy = w / 2.0, h / 2.0
        return np.array([[c, s, cx - c * cx - s * cy],
                         [-s, c, cy + s * cx - c * cy],
                         [0, 0, 1]], np.float64)
    return np.eye(3)


def transform(layer: Layer, params: TransformParams, max_dim: Optional[int] = None) -> Layer:
    if params.is_identity():
        return layer.copy()
    m = transform_matrix(params, layer.width, layer.height)
    try:
        return warp(layer, m, max_dim)
    except ValueError as exc:
        raise TransformError(str(exc)) from exc


def add_margins(layer: Layer, margins: Tuple[int, int, int, int]) -> Layer:
    """Grow the canvas by ``(top, bottom, left, right)`` transparent pixels."""
    top, bottom, left, right = margins
    if min(margins) < 0:
        raise ValueError("margins must be non-negative")
    return pad(layer, top, bottom, left, right)
