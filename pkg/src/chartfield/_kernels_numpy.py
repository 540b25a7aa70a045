"""Pure-numpy kernel implementations.

Arithmetic mirrors the numba build expression-for-expression so both backends
agree bit-for-bit (up to libm exp rounding in `diffuse`). Vote aggregation
keeps the fixed left, right, up, down order.
"""

from __future__ import annotations

import numpy as np


def sobel_gradient(image: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Raw 3x3 Sobel derivatives with replicate padding."""
    p = np.pad(image, 1, mode="edge")
    tl = p[:-2, :-2]
    tc = p[:-2, 1:-1]
    tr = p[:-2, 2:]
    ml = p[1:-1, :-2]
    mr = p[1:-1, 2:]
    bl = p[2:, :-2]
    bc = p[2:, 1:-1]
    br = p[2:, 2:]
    gx = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl)
    gy = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr)
    return gx, gy


def separable_blur(image: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Separable convolution with a symmetric 1D kernel, replicate padding."""
    radius = len(weights) // 2
    h, w = image.shape

    p = np.pad(image, ((0, 0), (radius, radius)), mode="edge")
    out = weights[0] * p[:, 0:w]
    for k in range(1, len(weights)):
        out += weights[k] * p[:, k:k + w]

    p = np.pad(out, ((radius, radius), (0, 0)), mode="edge")
    out = weights[0] * p[0:h, :]
    for k in range(1, len(weights)):
        out += weights[k] * p[k:k + h, :]
    return out


def _clamp_psd(xx: np.ndarray, xy: np.ndarray, yy: np.ndarray):
    """Project symmetric 2x2 tensors onto the PSD cone (elementwise)."""
    t = xx + yy
    diff = xx - yy
    s = np.sqrt(diff * diff + 4.0 * (xy * xy))
    l1 = 0.5 * (t - s)
    l0 = 0.5 * (t + s)

    keep = l1 >= 0.0
    zero = l0 <= 0.0

    # rank-1 projection l0 * v0 v0^T, v0 = (xy, l0 - xx) when xy != 0
    vx = xy
    vy = l0 - xx
    n = vx * vx + vy * vy
    n_safe = np.where(n > 0.0, n, 1.0)
    scale = l0 / n_safe
    pxx = scale * (vx * vx)
    pxy = scale * (vx * vy)
    pyy = scale * (vy * vy)

    # diagonal tensors: clamp the negative axis directly
    diag = xy == 0.0
    dxx = np.where(xx >= yy, l0, 0.0)
    dyy = np.where(xx >= yy, 0.0, l0)
    pxx = np.where(diag, dxx, pxx)
    pxy = np.where(diag, 0.0, pxy)
    pyy = np.where(diag, dyy, pyy)

    pxx = np.where(zero, 0.0, pxx)
    pxy = np.where(zero, 0.0, pxy)
    pyy = np.where(zero, 0.0, pyy)

    oxx = np.where(keep, xx, pxx)
    oxy = np.where(keep, xy, pxy)
    oyy = np.where(keep, yy, pyy)
    return oxx, oxy, oyy


def _h_vote(a: np.ndarray, b: np.ndarray, d: np.ndarray, c: float):
    """Symmetrized closed-form vote from a horizontal neighbor, PSD-projected."""
    return _clamp_psd(c * (0.5 * a), c * (-0.75 * b), c * d)


def _v_vote(a: np.ndarray, b: np.ndarray, d: np.ndarray, c: float):
    """Symmetrized closed-form vote from a vertical neighbor, PSD-projected."""
    return _clamp_psd(c * a, c * (-0.75 * b), c * (0.5 * d))


def vote_field(xx: np.ndarray, xy: np.ndarray, yy: np.ndarray, c: float):
    """Aggregate N4 votes at every pixel; summation order left, right, up, down.

    Border pixels only accumulate in-bounds neighbors.
    """
    h, w = xx.shape
    oxx = np.zeros((h, w))
    oxy = np.zeros((h, w))
    oyy = np.zeros((h, w))

    # left neighbor votes into columns 1..w-1
    vxx, vxy, vyy = _h_vote(xx[:, :-1], xy[:, :-1], yy[:, :-1], c)
    oxx[:, 1:] += vxx
    oxy[:, 1:] += vxy
    oyy[:, 1:] += vyy

    # right neighbor votes into columns 0..w-2
    vxx, vxy, vyy = _h_vote(xx[:, 1:], xy[:, 1:], yy[:, 1:], c)
    oxx[:, :-1] += vxx
    oxy[:, :-1] += vxy
    oyy[:, :-1] += vyy

    # up neighbor votes into rows 1..h-1
    vxx, vxy, vyy = _v_vote(xx[:-1, :], xy[:-1, :], yy[:-1, :], c)
    oxx[1:, :] += vxx
    oxy[1:, :] += vxy
    oyy[1:, :] += vyy

    # down neighbor votes into rows 0..h-2
    vxx, vxy, vyy = _v_vote(xx[1:, :], xy[1:, :], yy[1:, :], c)
    oxx[:-1, :] += vxx
    oxy[:-1, :] += vxy
    oyy[:-1, :] += vyy

    return oxx, oxy, oyy


def eigh2(xx: np.ndarray, xy: np.ndarray, yy: np.ndarray):
    """Closed-form eigendecomposition of symmetric 2x2 tensors, l0 >= l1."""
    t = xx + yy
    diff = xx - yy
    s = np.sqrt(diff * diff + 4.0 * (xy * xy))
    l0 = 0.5 * (t + s)
    l1 = 0.5 * (t - s)

    vx = xy.copy()
    vy = l0 - xx
    n = np.sqrt(vx * vx + vy * vy)
    n_safe = np.where(n > 0.0, n, 1.0)
    vx = vx / n_safe
    vy = vy / n_safe

    # xy == 0: axis-aligned eigenvectors
    diag = xy == 0.0
    vx = np.where(diag, np.where(xx >= yy, 1.0, 0.0), vx)
    vy = np.where(diag, np.where(xx >= yy, 0.0, 1.0), vy)
    return l0, l1, vx, vy


def diffuse(xx: np.ndarray, xy: np.ndarray, yy: np.ndarray, delta: float):
    """Eigenvalue remap l -> exp(-l/delta); strictly positive-definite output."""
    l0, l1, vx, vy = eigh2(xx, xy, yy)
    m0 = np.exp(-np.maximum(l0, 0.0) / delta)
    m1 = np.exp(-np.maximum(l1, 0.0) / delta)
    # post tensor = m0 * v0 v0^T + m1 * (I - v0 v0^T); m0 <= m1
    dm = m0 - m1
    oxx = m1 + dm * (vx * vx)
    oxy = dm * (vx * vy)
    oyy = m1 + dm * (vy * vy)
    return oxx, oxy, oyy
