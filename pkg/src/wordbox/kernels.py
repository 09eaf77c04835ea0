"""Backend selection for the hot raster kernels.

The compiled extension is used when it was built; otherwise, or when
``WORDBOX_PURE_PYTHON`` is set to a non-empty value, the pure-Python
implementation is loaded.  ``BACKEND`` names the active choice.
"""

from __future__ import annotations

import os

import numpy as np

from wordbox import _floodfill_py

try:
    if os.environ.get("WORDBOX_PURE_PYTHON"):
        raise ImportError("pure-Python backend requested")
    from wordbox import _floodfill as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _floodfill_py


def leak_counts(gray, text, tolerance: int, backend=None):
    """Count text boundary pixels whose flood-fill region reaches non-text pixels.

    Regions are 4-connected and grow across neighbours whose gray values
    differ by at most ``tolerance``.  Returns ``(leaking, total)`` boundary
    pixel counts.
    """
    impl = _impl
    if backend == "python":
        impl = _floodfill_py
    elif backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled flood-fill extension is not built")
        impl = _compiled
    gray = np.ascontiguousarray(gray, dtype=np.uint8)
    text = np.ascontiguousarray(text, dtype=np.uint8)
    return impl.leak_counts(gray, text, int(tolerance))
