"""Pure-Python flood-fill leak counter, used when the extension is absent."""

from __future__ import annotations

from typing import Tuple

import numpy as np


def leak_counts(gray: np.ndarray, text: np.ndarray, tolerance: int) -> Tuple[int, int]:
    h, w = gray.shape
    if text.shape != (h, w):
        raise ValueError("gray and text masks differ in shape")
    g = gray.ravel().tolist()
    t = text.ravel().astype(bool).tolist()
    n = h * w

    boundary = [False] * n
    total = 0
    for p in range(n):
        if not t[p]:
            continue
        y, x = divmod(p, w)
        if ((x > 0 and not t[p - 1]) or (x < w - 1 and not t[p + 1])
                or (y > 0 and not t[p - w]) or (y < h - 1 and not t[p + w])):
            boundary[p] = True
            total += 1

    visited = [False] * n
    leaking = 0
    for seed in range(n):
        if not t[seed] or visited[seed]:
            continue
        visited[seed] = True
        component = [seed]
        leaks = False
        i = 0
        while i < len(component):
            p = component[i]
            i += 1
            if not t[p]:
                leaks = True
            gp = g[p]
            y, x = divmod(p, w)
            for q, ok in ((p - 1, x > 0), (p + 1, x < w - 1), (p - w, y > 0), (p + w, y < h - 1)):
                if ok and not visited[q] and abs(g[q] - gp) <= tolerance:
                    visited[q] = True
                    component.append(q)
        if leaks:
            leaking += sum(1 for p in component if boundary[p])
    return leaking, total
