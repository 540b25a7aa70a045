"""Numba @njit kernel implementations.

Same signatures and arithmetic order as chartfield._kernels_numpy; the numpy
build is the reference for equivalence tests.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def sobel_gradient(image: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    h, w = image.shape
    gx = np.empty((h, w))
    gy = np.empty((h, w))
    for y in range(h):
        ym = y - 1 if y > 0 else 0
        yp = y + 1 if y < h - 1 else h - 1
        for x in range(w):
            xm = x - 1 if x > 0 else 0
            xp = x + 1 if x < w - 1 else w - 1
            tl = image[ym, xm]
            tc = image[ym, x]
            tr = image[ym, xp]
            ml = image[y, xm]
            mr = image[y, xp]
            bl = image[yp, xm]
            bc = image[yp, x]
            br = image[yp, xp]
            gx[y, x] = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl)
            gy[y, x] = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr)
    return gx, gy


@njit(cache=True)
def separable_blur(image: np.ndarray, weights: np.ndarray) -> np.ndarray:
    h, w = image.shape
    radius = len(weights) // 2
    tmp = np.empty((h, w))
    out = np.empty((h, w))
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for k in range(len(weights)):
                xi = x - radius + k
                if xi < 0:
                    xi = 0
                elif xi > w - 1:
                    xi = w - 1
                if k == 0:
                    acc = weights[0] * image[y, xi]
                else:
                    acc += weights[k] * image[y, xi]
            tmp[y, x] = acc
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for k in range(len(weights)):
                yi = y - radius + k
                if yi < 0:
                    yi = 0
                elif yi > h - 1:
                    yi = h - 1
                if k == 0:
                    acc = weights[0] * tmp[yi, x]
                else:
                    acc += weights[k] * tmp[yi, x]
            out[y, x] = acc
    return out


@njit(cache=True, inline="always")
def _clamp_psd_one(xx: float, xy: float, yy: float) -> tuple[float, float, float]:
    t = xx + yy
    diff = xx - yy
    s = np.sqrt(diff * diff + 4.0 * (xy * xy))
    l1 = 0.5 * (t - s)
    if l1 >= 0.0:
        return xx, xy, yy
    l0 = 0.5 * (t + s)
    if l0 <= 0.0:
        return 0.0, 0.0, 0.0
    if xy == 0.0:
        if xx >= yy:
            return l0, 0.0, 0.0
        return 0.0, 0.0, l0
    vx = xy
    vy = l0 - xx
    n = vx * vx + vy * vy
    scale = l0 / n
    return scale * (vx * vx), scale * (vx * vy), scale * (vy * vy)


@njit(cache=True, inline="always")
def _h_vote_one(a: float, b: float, d: float, c: float) -> tuple[float, float, float]:
    return _clamp_psd_one(c * (0.5 * a), c * (-0.75 * b), c * d)


@njit(cache=True, inline="always")
def _v_vote_one(a: float, b: float, d: float, c: float) -> tuple[float, float, float]:
    return _clamp_psd_one(c * a, c * (-0.75 * b), c * (0.5 * d))


@njit(cache=True)
def vote_field(xx: np.ndarray, xy: np.ndarray, yy: np.ndarray, c: float):
    h, w = xx.shape
    oxx = np.zeros((h, w))
    oxy = np.zeros((h, w))
    oyy = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            axx = 0.0
            axy = 0.0
            ayy = 0.0
            if x > 0:
                vxx, vxy, vyy = _h_vote_one(xx[y, x - 1], xy[y, x - 1], yy[y, x - 1], c)
                axx += vxx
                axy += vxy
                ayy += vyy
            if x < w - 1:
                vxx, vxy, vyy = _h_vote_one(xx[y, x + 1], xy[y, x + 1], yy[y, x + 1], c)
                axx += vxx
                axy += vxy
                ayy += vyy
            if y > 0:
                vxx, vxy, vyy = _v_vote_one(xx[y - 1, x], xy[y - 1, x], yy[y - 1, x], c)
                axx += vxx
                axy += vxy
                ayy += vyy
            if y < h - 1:
                vxx, vxy, vyy = _v_vote_one(xx[y + 1, x], xy[y + 1, x], yy[y + 1, x], c)
                axx += vxx
                axy += vxy
                ayy += vyy
            oxx[y, x] = axx
            oxy[y, x] = axy
            oyy[y, x] = ayy
    return oxx, oxy, oyy


@njit(cache=True, inline="always")
def _eigh2_one(xx: float, xy: float, yy: float) -> tuple[float, float, float, float]:
    t = xx + yy
    diff = xx - yy
    s = np.sqrt(diff * diff + 4.0 * (xy * xy))
    l0 = 0.5 * (t + s)
    l1 = 0.5 * (t - s)
    if xy == 0.0:
        if xx >= yy:
            return l0, l1, 1.0, 0.0
        return l0, l1, 0.0, 1.0
    vx = xy
    vy = l0 - xx
    n = np.sqrt(vx * vx + vy * vy)
    return l0, l1, vx / n, vy / n


@njit(cache=True)
def eigh2(xx: np.ndarray, xy: np.ndarray, yy: np.ndarray):
    h, w = xx.shape
    l0 = np.empty((h, w))
    l1 = np.empty((h, w))
    vx = np.empty((h, w))
    vy = np.empty((h, w))
    for y in range(h):
        for x in range(w):
            a, b, px, py = _eigh2_one(xx[y, x], xy[y, x], yy[y, x])
            l0[y, x] = a
            l1[y, x] = b
            vx[y, x] = px
            vy[y, x] = py
    return l0, l1, vx, vy


@njit(cache=True)
def diffuse(xx: np.ndarray, xy: np.ndarray, yy: np.ndarray, delta: float):
    h, w = xx.shape
    oxx = np.empty((h, w))
    oxy = np.empty((h, w))
    oyy = np.empty((h, w))
    for y in range(h):
        for x in range(w):
            l0, l1, vx, vy = _eigh2_one(xx[y, x], xy[y, x], yy[y, x])
            a = l0 if l0 > 0.0 else 0.0
            b = l1 if l1 > 0.0 else 0.0
            m0 = np.exp(-a / delta)
            m1 = np.exp(-b / delta)
            dm = m0 - m1
            oxx[y, x] = m1 + dm * (vx * vx)
            oxy[y, x] = dm * (vx * vy)
            oyy[y, x] = m1 + dm * (vy * vy)
    return oxx, oxy, oyy
