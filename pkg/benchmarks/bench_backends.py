"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the hot per-pixel stages on a synthetic 600x400 bar chart and prints a
timing table. The numba path is warmed up first so JIT compilation is not
billed to the measurement.

Usage: python benchmarks/bench_backends.py [--size WxH] [--repeats N]
"""

import argparse
import time

import numpy as np

from chartfield.backend import get_kernels
from chartfield.fixtures import FixtureSpec, render_fixture
from chartfield.tensorfield import gaussian_kernel1d


def build_stages(kernels, image):
    gx, gy = kernels.sobel_gradient(image)
    xx, xy, yy = gx * gx, gx * gy, gy * gy
    weights = gaussian_kernel1d(1.0)
    c = float(np.exp(-0.25))
    return {
        "sobel": lambda: kernels.sobel_gradient(image),
        "gaussian blur (x3)": lambda: [kernels.separable_blur(a, weights) for a in (xx, xy, yy)],
        "vote aggregation": lambda: kernels.vote_field(xx, xy, yy, c),
        "eigendecomposition": lambda: kernels.eigh2(xx, xy, yy),
        "diffusion": lambda: kernels.diffuse(xx, xy, yy, 0.16),
    }


def time_stage(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", default="600x400")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    w, h = (int(v) for v in args.size.split("x"))

    values = tuple(float(v) for v in (5, 3, 8, 6, 9, 2, 7, 4))
    image, _ = render_fixture(
        FixtureSpec(kind="bar", values=values, width=w, height=h, margin=20)
    )

    results = {}
    for name in ("numpy", "numba"):
        try:
            kernels = get_kernels(name)
        except ImportError:
            print(f"{name} backend unavailable, skipping")
            continue
        stages = build_stages(kernels, image)
        for fn in stages.values():
            fn()  # warmup (JIT compile on numba)
        results[name] = {label: time_stage(fn, args.repeats) for label, fn in stages.items()}

    labels = list(next(iter(results.values())).keys())
    print(f"\nimage {w}x{h}, best of {args.repeats} runs (ms)")
    header = f"{'stage':<22}" + "".join(f"{n:>12}" for n in results)
    if len(results) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label in labels:
        row = f"{label:<22}"
        for name in results:
            row += f"{results[name][label] * 1e3:>12.2f}"
        if len(results) == 2:
            a, b = (results[n][label] for n in results)
            row += f"{a / b:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
