"""Independent straightforward reference implementations used as oracles.

Everything here is written naively (explicit loops, numpy matrix products,
textbook pseudocode) and stays independent of the package's kernel code.
"""

from __future__ import annotations

import itertools

import numpy as np


def naive_sobel(image: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Direct 3x3 convolution at every pixel with replicate padding."""
    kx = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
    ky = kx.T
    h, w = image.shape
    gx = np.zeros((h, w))
    gy = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            sx = 0.0
            sy = 0.0
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    yy = min(max(y + dy, 0), h - 1)
                    xx = min(max(x + dx, 0), w - 1)
                    sx += kx[dy + 1, dx + 1] * image[yy, xx]
                    sy += ky[dy + 1, dx + 1] * image[yy, xx]
            gx[y, x] = sx
            gy[y, x] = sy
    return gx, gy


def naive_gaussian_blur(image: np.ndarray, rho: float) -> np.ndarray:
    """Direct 2D convolution with the truncated product kernel."""
    radius = int(np.ceil(3.0 * rho))
    ks = np.arange(-radius, radius + 1, dtype=np.float64)
    w1 = np.exp(-(ks * ks) / (2.0 * rho * rho))
    w1 = w1 / w1.sum()
    kernel = np.outer(w1, w1)
    h, w = image.shape
    out = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for dy in range(-radius, radius + 1):
                for dx in range(-radius, radius + 1):
                    yy = min(max(y + dy, 0), h - 1)
                    xx = min(max(x + dx, 0), w - 1)
                    acc += kernel[dy + radius, dx + radius] * image[yy, xx]
            out[y, x] = acc
    return out


def psd_project(m: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(m)
    return (vecs * np.maximum(vals, 0.0)) @ vecs.T


def naive_cast_vote(receiver, voter, k: np.ndarray, sigma_d: float) -> np.ndarray:
    """Matrix evaluation of the closed-form vote, symmetrized and projected."""
    d = np.array([voter[0] - receiver[0], voter[1] - receiver[1]], dtype=np.float64)
    r = d / np.linalg.norm(d)
    rrt = np.outer(r, r)
    big_r = np.eye(2) - 2.0 * rrt
    big_r_prime = (np.eye(2) - 0.5 * rrt) @ big_r
    c = np.exp(-float(d @ d) / sigma_d)
    s = c * (big_r @ k @ big_r_prime)
    return psd_project(0.5 * (s + s.T))


def naive_vote_field(data: np.ndarray, sigma_d: float) -> np.ndarray:
    """All-pairs-in-N4 aggregation; data and result are (H, W, 3) tensors."""
    h, w = data.shape[:2]
    out = np.zeros((h, w, 3))
    for y in range(h):
        for x in range(w):
            total = np.zeros((2, 2))
            for dx, dy in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                nx, ny = x + dx, y + dy
                if not (0 <= nx < w and 0 <= ny < h):
                    continue
                xx, xy, yy = data[ny, nx]
                k = np.array([[xx, xy], [xy, yy]])
                total = total + naive_cast_vote((x, y), (nx, ny), k, sigma_d)
            out[y, x] = (total[0, 0], total[0, 1], total[1, 1])
    return out


def naive_dbscan(points, eps: float, min_pts: int):
    """Textbook seed-list DBSCAN; returns per-point labels (-1 = noise)."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    n = len(pts)
    labels: dict[int, int] = {}
    cluster_id = 0

    def region_query(i):
        out = []
        for j in range(n):
            if (pts[i, 0] - pts[j, 0]) ** 2 + (pts[i, 1] - pts[j, 1]) ** 2 <= eps * eps:
                out.append(j)
        return out

    for i in range(n):
        if i in labels:
            continue
        seeds = region_query(i)
        if len(seeds) < min_pts:
            labels[i] = -1
            continue
        labels[i] = cluster_id
        seeds = [j for j in seeds if j != i]
        pos = 0
        while pos < len(seeds):
            j = seeds[pos]
            pos += 1
            if labels.get(j) == -1:
                labels[j] = cluster_id
            if j in labels:
                continue
            labels[j] = cluster_id
            j_neighbors = region_query(j)
            if len(j_neighbors) >= min_pts:
                seeds.extend(k for k in j_neighbors if labels.get(k, -2) in (-1, -2))
        cluster_id += 1
    return np.array([labels[i] for i in range(n)], dtype=np.int64)


def partition_sets(labels: np.ndarray) -> tuple[set[frozenset], frozenset]:
    """Order-free view of a clustering: cluster member sets plus noise set."""
    clusters = {}
    noise = set()
    for idx, lab in enumerate(labels):
        if lab == -1:
            noise.add(idx)
        else:
            clusters.setdefault(lab, set()).add(idx)
    return {frozenset(m) for m in clusters.values()}, frozenset(noise)


def brute_emd_equal(a: np.ndarray, b: np.ndarray) -> float:
    """Minimum mean assignment cost over all permutations."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n = len(a)
    best = np.inf
    for perm in itertools.permutations(range(n)):
        cost = sum(np.linalg.norm(a[i] - b[perm[i]]) for i in range(n)) / n
        best = min(best, cost)
    return float(best)
