"""Time the flood-fill leak counter on both backends.

Usage: python3 benchmarks/bench_floodfill.py [--repeat N]

Grids mimic composited word boxes: a textured background with blob-shaped
text of a different gray.  Both backends are checked to agree before any
timing is reported.
"""

import argparse
import timeit

import numpy as np

from wordbox import kernels

SIZES = [(32, 100), (64, 256), (128, 512)]


def make_grid(h, w, rng):
    gray = np.clip(180 + rng.integers(-12, 13, (h, w)), 0, 255)
    yy, xx = np.mgrid[0:h, 0:w]
    text = np.zeros((h, w), bool)
    for cx in np.linspace(w * 0.1, w * 0.9, max(2, w // 24)):
        text |= ((yy - h / 2) / (h * 0.3)) ** 2 + ((xx - cx) / (h * 0.2)) ** 2 <= 1
    gray[text] = np.clip(40 + rng.integers(-12, 13, int(text.sum())), 0, 255)
    return gray.astype(np.uint8), text


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--tolerance", type=int, default=10)
    args = parser.parse_args()

    backends = ["python"] + (["cython"] if kernels._compiled is not None else [])
    if len(backends) == 1:
        print("compiled extension not built; timing the pure-Python backend only")
    rng = np.random.default_rng(0)
    print(f"{'grid':>10} " + " ".join(f"{b + ' ms':>12}" for b in backends) + f" {'speedup':>9}")
    for h, w in SIZES:
        gray, text = make_grid(h, w, rng)
        results = {b: kernels.leak_counts(gray, text, args.tolerance, b) for b in backends}
        assert len(set(results.values())) == 1, f"backends disagree: {results}"
        times = {}
        for b in backends:
            number = 3 if b == "python" else 50
            best = min(timeit.repeat(lambda: kernels.leak_counts(gray, text, args.tolerance, b),
                                     number=number, repeat=args.repeat))
            times[b] = 1000 * best / number
        speedup = times["python"] / times["cython"] if "cython" in times else float("nan")
        row = " ".join(f"{times[b]:12.3f}" for b in backends)
        print(f"{h:>4}x{w:<5} {row} {speedup:8.1f}x")


if __name__ == "__main__":
    main()
