"""Separable per-channel blend modes on 8-bit values.

``base`` is the backdrop, ``top`` the layer being blended onto it.  Each
mode is evaluated once over all 256 x 256 channel pairs into a lookup
table; blending is then a table lookup.  Rational modes are computed as
one division of exact integers so round-half-up is exact.

==============  ============================================================
mode            result (a = base, b = top, both in 0..255)
==============  ============================================================
normal          b
multiply        a*b / 255
screen          255 - (255-a)(255-b) / 255
overlay         a <= 127.5: 2ab/255; else 255 - 2(255-a)(255-b)/255
hard_light      overlay with a and b swapped
soft_light      W3C soft-light (b <= 127.5 darkens, else lightens via D(a))
dodge           a == 0: 0; b == 255: 255; else min(255, 255a / (255-b))
divide          b == 0: 255; else min(255, 255a / b)
addition        min(255, a + b)
difference      |a - b|
darken_only     min(a, b)
lighten_only    max(a, b)
==============  ============================================================
"""

from __future__ import annotations

import enum
import functools

import numpy as np


class BlendMode(str, enum.Enum):
    NORMAL = "normal"
    MULTIPLY = "multiply"
    SCREEN = "screen"
    OVERLAY = "overlay"
    HARD_LIGHT = "hard_light"
    SOFT_LIGHT = "soft_light"
    DODGE = "dodge"
    DIVIDE = "divide"
    ADDITION = "addition"
    DIFFERENCE = "difference"
    DARKEN_ONLY = "darken_only"
    LIGHTEN_ONLY = "lighten_only"


def _grid():
    a, b = np.meshgrid(np.arange(256, dtype=np.float64), np.arange(256, dtype=np.float64), indexing="ij")
    return a, b


def _soft_light(a, b):
    # everything scaled by 255^3 so the polynomial branch stays integral
    n = 255.0
    dark = (a * n * n - (n - 2 * b) * a * (n - a)) / (n * n)
    d_poly = ((16 * a - 12 * n) * a + 4 * n * n) * a  # D(a) * 255^3
    light_poly = (a * n ** 3 + (2 * b - n) * (d_poly - a * n * n)) / n ** 3
    light_sqrt = a + (2 * b - n) * (np.sqrt(n * a) - a) / n
    light = np.where(4 * a <= n, light_poly, light_sqrt)
    return np.where(2 * b <= n, dark, light)


def _formula(mode: BlendMode, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = 255.0
    if mode is BlendMode.NORMAL:
        return b.copy()
    if mode is BlendMode.MULTIPLY:
        return a * b / n
    if mode is BlendMode.SCREEN:
        return (n * n - (n - a) * (n - b)) / n
    if mode is BlendMode.OVERLAY:
        return np.where(2 * a <= n, 2 * a * b / n, (n * n - 2 * (n - a) * (n - b)) / n)
    if mode is BlendMode.HARD_LIGHT:
        return np.where(2 * b <= n, 2 * a * b / n, (n * n - 2 * (n - a) * (n - b)) / n)
    if mode is BlendMode.SOFT_LIGHT:
        return _soft_light(a, b)
    if mode is BlendMode.DODGE:
        with np.errstate(divide="ignore", invalid="ignore"):
            q = np.minimum(n, n * a / (n - b))
        return np.where(a == 0, 0.0, np.where(b == n, n, q))
    if mode is BlendMode.DIVIDE:
        with np.errstate(divide="ignore", invalid="ignore"):
            q = np.minimum(n, n * a / b)
        return np.where(b == 0, n, q)
    if mode is BlendMode.ADDITION:
        return np.minimum(n, a + b)
    if mode is BlendMode.DIFFERENCE:
        return np.abs(a - b)
    if mode is BlendMode.DARKEN_ONLY:
        return np.minimum(a, b)
    if mode is BlendMode.LIGHTEN_ONLY:
        return np.maximum(a, b)
    raise ValueError(f"unknown blend mode {mode!r}")


@functools.lru_cache(maxsize=None)
def blend_table(mode: BlendMode) -> np.ndarray:
    """``table[base, top]`` for every 8-bit pair."""
    a, b = _grid()
    table = np.clip(np.floor(_formula(BlendMode(mode), a, b) + 0.5), 0, 255).astype(np.uint8)
    table.setflags(write=False)
    return table


def blend(base: np.ndarray, top: np.ndarray, mode) -> np.ndarray:
    """Blend ``top`` onto ``base`` channel by channel (uint8 arrays)."""
    return blend_table(BlendMode(mode))[np.asarray(base, np.uint8), np.asarray(top, np.uint8)]


def blend_pixel(base, top, mode):
    """Blend two pixels (scalars or channel tuples); returns a tuple of ints."""
    return tuple(int(v) for v in blend(np.atleast_1d(base), np.atleast_1d(top), mode))
