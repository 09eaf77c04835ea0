"""Rebuild the small resource set bundled under src/wordbox/data.

Fonts are copied from the system DejaVu package, textures are generated
procedurally from a fixed seed, and the lexicon is the 1,000 most frequent
words of the CPython help-topic corpus.
"""

import argparse
import re
import shutil
from collections import Counter
from pathlib import Path

import numpy as np
from PIL import Image
from scipy.ndimage import gaussian_filter

DEJAVU = Path("/usr/share/fonts/truetype/dejavu")
FONTS = ("DejaVuSans.ttf", "DejaVuSerif.ttf", "DejaVuSansMono.ttf")
DEJAVU_LICENSE = Path("/usr/share/doc/fonts-dejavu-core/copyright")


def _norm(x):
    x = x - x.min()
    return x / max(x.max(), 1e-9)


def _tint(gray, rgb_lo, rgb_hi):
    lo, hi = np.array(rgb_lo, float), np.array(rgb_hi, float)
    return (lo + gray[..., None] * (hi - lo)).clip(0, 255).astype(np.uint8)


def make_textures(rng, size=256):
    yy, xx = np.mgrid[0:size, 0:size] / size
    out = {}
    out["stone"] = _tint(_norm(gaussian_filter(rng.random((size, size)), 3)), (70, 70, 75), (190, 185, 180))
    grain = 0.85 + 0.15 * _norm(gaussian_filter(rng.random((size, size)), 0.7))
    out["paper"] = _tint(grain, (0, 0, 0), (250, 244, 228))
    rings = 0.5 + 0.5 * np.sin(40 * xx + 6 * gaussian_filter(rng.random((size, size)), 8) * 10)
    out["wood"] = _tint(rings, (90, 55, 30), (180, 130, 80))
    grad = _norm(xx + 0.4 * yy + 0.1 * gaussian_filter(rng.random((size, size)), 2))
    out["gradient"] = _tint(grad, (20, 40, 90), (220, 200, 160))
    bricks = ((np.floor(yy * 8) % 2 == 0) ^ (np.floor(xx * 4 + 0.5 * (np.floor(yy * 8) % 2)) % 2 == 0))
    mortar = (np.abs((yy * 8) % 1 - 0.5) > 0.45) | (np.abs((xx * 4 + 0.5 * (np.floor(yy * 8) % 2)) % 1 - 0.5) > 0.47)
    brick = np.where(mortar, 0.9, 0.3 + 0.1 * bricks + 0.2 * gaussian_filter(rng.random((size, size)), 1))
    out["brick"] = _tint(brick, (60, 20, 15), (230, 220, 210))
    clouds = sum(gaussian_filter(rng.random((size, size)), s) * (s / 8) for s in (1, 2, 4, 8, 16))
    out["clouds"] = _tint(_norm(clouds), (40, 60, 70), (200, 220, 230))
    return out


def make_lexicon(n=1000):
    from pydoc_data import topics

    text = " ".join(topics.topics.values())
    words = re.findall(r"\b[a-z]{2,}\b", text.lower())
    return [w for w, _ in Counter(words).most_common(n)]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "src/wordbox/data")
    parser.add_argument("--seed", type=int, default=2022)
    args = parser.parse_args()
    out = args.out
    (out / "fonts").mkdir(parents=True, exist_ok=True)
    (out / "textures").mkdir(parents=True, exist_ok=True)

    for name in FONTS:
        shutil.copy(DEJAVU / name, out / "fonts" / name)
    if DEJAVU_LICENSE.exists():
        shutil.copy(DEJAVU_LICENSE, out / "fonts" / "LICENSE-DejaVu.txt")

    rng = np.random.default_rng(args.seed)
    for name, pixels in make_textures(rng).items():
        Image.fromarray(pixels, "RGB").save(out / "textures" / f"{name}.png")

    (out / "lexicon.txt").write_text("\n".join(make_lexicon()) + "\n", encoding="utf-8")
    (out / "colormap.txt").write_text(
        "# K mean std mean std [mean std]: text, background, effect\n"
        "2 40 20 215 25\n"
        "3 225 20 50 20 120 30\n",
        encoding="utf-8",
    )


if __name__ == "__main__":
    main()
