"""Reference implementations written independently of the package code.

They favour obviousness over speed: exact integer arithmetic for the
blend formulas and union-find components for the flood-fill leak count.
"""

import math


def _rhu(num, den):
    """Round num/den half up, for integers with den > 0 and num >= 0."""
    return (2 * num + den) // (2 * den)


def _clamp(v):
    return max(0, min(255, v))


def ref_normal(a, b):
    return b


def ref_multiply(a, b):
    return _rhu(a * b, 255)


def ref_screen(a, b):
    return _rhu(255 * 255 - (255 - a) * (255 - b), 255)


def ref_overlay(a, b):
    if 2 * a <= 255:
        return _rhu(2 * a * b, 255)
    return _rhu(255 * 255 - 2 * (255 - a) * (255 - b), 255)


def ref_hard_light(a, b):
    return ref_overlay(b, a)


def ref_soft_light(a, b):
    x, y = a / 255, b / 255
    if 2 * b <= 255:
        # x - (1 - 2y) x (1 - x), exactly: (a*255^2 - (255 - 2b) a (255 - a)) / 255^2
        return _clamp(_rhu(a * 255 ** 2 - (255 - 2 * b) * a * (255 - a), 255 ** 2))
    if 4 * a <= 255:
        # D(x) = ((16x - 12)x + 4)x, scaled by 255^3 and kept integral
        d = 16 * a ** 3 - 12 * 255 * a ** 2 + 4 * 255 ** 2 * a
        num = a * 255 ** 3 + (2 * b - 255) * (d - a * 255 ** 2)
        return _clamp(_rhu(num, 255 ** 3))
    value = 255 * (x + (2 * y - 1) * (math.sqrt(x) - x))
    return _clamp(math.floor(value + 0.5))


def ref_dodge(a, b):
    if a == 0:
        return 0
    if b == 255:
        return 255
    return min(255, _rhu(255 * a, 255 - b))


def ref_divide(a, b):
    if b == 0:
        return 255
    return min(255, _rhu(255 * a, b))


def ref_addition(a, b):
    return min(255, a + b)


def ref_difference(a, b):
    return abs(a - b)


def ref_darken_only(a, b):
    return a if a < b else b


def ref_lighten_only(a, b):
    return a if a > b else b


REFERENCE = {
    "normal": ref_normal,
    "multiply": ref_multiply,
    "screen": ref_screen,
    "overlay": ref_overlay,
    "hard_light": ref_hard_light,
    "soft_light": ref_soft_light,
    "dodge": ref_dodge,
    "divide": ref_divide,
    "addition": ref_addition,
    "difference": ref_difference,
    "darken_only": ref_darken_only,
    "lighten_only": ref_lighten_only,
}


def leak_counts_oracle(gray, text, tolerance):
    """Union-find over the tolerance graph, then a scan of boundary pixels.

    A boundary text pixel leaks when its component also holds a non-text
    pixel.
    """
    h, w = len(gray), len(gray[0])
    parent = list(range(h * w))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj

    for y in range(h):
        for x in range(w):
            if x + 1 < w and abs(int(gray[y][x]) - int(gray[y][x + 1])) <= tolerance:
                union(y * w + x, y * w + x + 1)
            if y + 1 < h and abs(int(gray[y][x]) - int(gray[y + 1][x])) <= tolerance:
                union(y * w + x, (y + 1) * w + x)

    dirty_roots = {find(y * w + x) for y in range(h) for x in range(w) if not text[y][x]}
    leaking = total = 0
    for y in range(h):
        for x in range(w):
            if not text[y][x]:
                continue
            nbrs = [(y + dy, x + dx) for dy, dx in ((0, 1), (0, -1), (1, 0), (-1, 0))
                    if 0 <= y + dy < h and 0 <= x + dx < w]
            if any(not text[ny][nx] for ny, nx in nbrs):
                total += 1
                if find(y * w + x) in dirty_roots:
                    leaking += 1
    return leaking, total
