# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled flood-fill leak counter; mirrors wordbox._floodfill_py."""

import numpy as np

cimport numpy as cnp


def leak_counts(const unsigned char[:, ::1] gray, const unsigned char[:, ::1] text, int tolerance):
    cdef Py_ssize_t h = gray.shape[0]
    cdef Py_ssize_t w = gray.shape[1]
    cdef Py_ssize_t n = h * w
    cdef Py_ssize_t y, x, p, q, seed, head, tail, start, k
    cdef Py_ssize_t total = 0, leaking = 0
    cdef int g, d
    cdef bint leaks
    if text.shape[0] != h or text.shape[1] != w:
        raise ValueError("gray and text masks differ in shape")

    cdef cnp.uint8_t[::1] boundary = np.zeros(n, np.uint8)
    cdef cnp.uint8_t[::1] visited = np.zeros(n, np.uint8)
    cdef cnp.intp_t[::1] queue = np.empty(max(n, 1), np.intp)
    cdef const unsigned char* gp = &gray[0, 0]
    cdef const unsigned char* tp = &text[0, 0]

    for y in range(h):
        for x in range(w):
            p = y * w + x
            if not tp[p]:
                continue
            if ((x > 0 and not tp[p - 1]) or (x < w - 1 and not tp[p + 1])
                    or (y > 0 and not tp[p - w]) or (y < h - 1 and not tp[p + w])):
                boundary[p] = 1
                total += 1

    tail = 0
    for seed in range(n):
        if not tp[seed] or visited[seed]:
            continue
        start = tail
        head = tail
        queue[tail] = seed
        tail += 1
        visited[seed] = 1
        leaks = False
        while head < tail:
            p = queue[head]
            head += 1
            if not tp[p]:
                leaks = True
            g = gp[p]
            y = p // w
            x = p - y * w
            for k in range(4):
                if k == 0:
                    if x == 0:
                        continue
                    q = p - 1
                elif k == 1:
                    if x == w - 1:
                        continue
                    q = p + 1
                elif k == 2:
                    if y == 0:
                        continue
                    q = p - w
                else:
                    if y == h - 1:
                        continue
                    q = p + w
                if visited[q]:
                    continue
                d = <int>gp[q] - g
                if d < 0:
                    d = -d
                if d <= tolerance:
                    visited[q] = 1
                    queue[tail] = q
                    tail += 1
        if leaks:
            for k in range(start, tail):
                if boundary[queue[k]]:
                    leaking += 1
    return leaking, total
