"""Deterministic synthetic chart rasterizer with exact ground truth.

Renders bar charts, histograms, and scatter plots from known tables so tests
and the acceptance suite can compare extracted data against the source.
Rasterization is pure integer arithmetic when anti-aliasing is off;
anti-aliasing is 4x4 supersampling with a box filter.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpecError

SUPERSAMPLE = 4


@dataclass(frozen=True)
class FixtureSpec:
    kind: str  # "bar" | "histogram" | "scatter"
    values: tuple[float, ...] = ()  # bar/histogram heights in data units
    points: tuple[tuple[float, float], ...] = ()  # scatter, data space [0,1]^2
    width: int = 300
    height: int = 200
    margin: int = 12
    bar_width: int = 24
    gap: int = 12
    mark_shape: str = "circle"  # "circle" | "square" | "cross"
    mark_radius: int = 4
    border_width: int = 2  # ring width for outline-only rendering
    gridlines: bool = False
    outline_only: bool = False
    antialias: bool = False
    seed: int = 0


@dataclass
class GroundTruth:
    """Exact pixel geometry of a rendered fixture."""

    kind: str
    width: int
    height: int
    values: tuple[float, ...] = ()
    baseline_y: int | None = None  # bottom ink row of the bars
    bar_corners: list[list[tuple[int, int]]] = field(default_factory=list)
    rows: list[tuple[float, float]] = field(default_factory=list)  # (x_center, height_px)
    bin_edges: list[int] = field(default_factory=list)
    mark_centers: list[tuple[int, int]] = field(default_factory=list)
    bboxes: list[tuple[int, int, int, int]] = field(default_factory=list)  # x0, y0, x1, y1 excl
    ink_count: int = 0


def _bar_layout(spec: FixtureSpec) -> tuple[list[tuple[int, int]], int, int]:
    """Per-bar (x0, x1) column spans, the baseline (exclusive), plot height."""
    n = len(spec.values)
    if n == 0:
        raise InvalidSpecError("bar fixture needs at least one value")
    if any(v < 0 for v in spec.values):
        raise InvalidSpecError("bar values must be non-negative")
    gap = 0 if spec.kind == "histogram" else spec.gap
    total = n * spec.bar_width + (n - 1) * gap
    if total > spec.width - 2 * spec.margin:
        raise InvalidSpecError(
            f"{n} bars of width {spec.bar_width} do not fit a "
            f"{spec.width}px canvas with margin {spec.margin}"
        )
    start = (spec.width - total) // 2
    spans = [
        (start + i * (spec.bar_width + gap), start + i * (spec.bar_width + gap) + spec.bar_width)
        for i in range(n)
    ]
    baseline = spec.height - spec.margin
    plot_h = spec.height - 2 * spec.margin
    if plot_h < 8:
        raise InvalidSpecError("canvas too short for the requested margin")
    return spans, baseline, plot_h


def _bar_heights(values: tuple[float, ...], plot_h: int) -> list[int]:
    vmax = max(values)
    if vmax <= 0:
        raise InvalidSpecError("bar values must contain a positive maximum")
    return [int(round(v / vmax * plot_h)) for v in values]


def _fill_rect(img: np.ndarray, ss: int, x0: int, y0: int, x1: int, y1: int) -> None:
    img[y0 * ss:y1 * ss, x0 * ss:x1 * ss] = 0.0


def _carve_rect(img: np.ndarray, ss: int, x0: int, y0: int, x1: int, y1: int) -> None:
    if x1 > x0 and y1 > y0:
        img[y0 * ss:y1 * ss, x0 * ss:x1 * ss] = 1.0


def _render_bars(spec: FixtureSpec, img: np.ndarray, ss: int, gt: GroundTruth) -> None:
    spans, baseline, plot_h = _bar_layout(spec)
    heights = _bar_heights(spec.values, plot_h)
    gt.baseline_y = baseline - 1
    for (x0, x1), h in zip(spans, heights):
        top = baseline - h
        if h > 0:
            _fill_rect(img, ss, x0, top, x1, baseline)
            if spec.outline_only:
                bw = spec.border_width
                _carve_rect(img, ss, x0 + bw, top + bw, x1 - bw, baseline - bw)
            gt.bboxes.append((x0, top, x1, baseline))
            gt.bar_corners.append(
                [
                    (x0, top),
                    (x1 - 1, top),
                    (x0, baseline - 1),
                    (x1 - 1, baseline - 1),
                ]
            )
        else:
            gt.bboxes.append((x0, baseline, x1, baseline))
            gt.bar_corners.append([])
        gt.rows.append(((x0 + x1 - 1) / 2.0, float(h)))
    if spec.kind == "histogram":
        gt.bin_edges = [spans[0][0]] + [s[1] for s in spans]


def _render_marks(spec: FixtureSpec, img: np.ndarray, ss: int, gt: GroundTruth) -> None:
    if not spec.points:
        raise InvalidSpecError("scatter fixture needs at least one point")
    if spec.mark_radius < 2:
        raise InvalidSpecError("mark radius must be at least 2")
    r = spec.mark_radius
    span_x = spec.width - 2 * spec.margin
    span_y = spec.height - 2 * spec.margin
    fh, fw = img.shape
    for dx, dy in spec.points:
        if not (0.0 <= dx <= 1.0 and 0.0 <= dy <= 1.0):
            raise InvalidSpecError(f"scatter point ({dx}, {dy}) outside the unit square")
        cx = spec.margin + int(round(dx * span_x))
        cy = (spec.height - spec.margin) - int(round(dy * span_y))
        if cx - r < 1 or cx + r > spec.width - 1 or cy - r < 1 or cy + r > spec.height - 1:
            raise InvalidSpecError("mark overflows the canvas")
        if spec.mark_shape == "square":
            _fill_rect(img, ss, cx - r, cy - r, cx + r + 1, cy + r + 1)
        elif spec.mark_shape == "cross":
            t = max(1, r // 3)
            _fill_rect(img, ss, cx - r, cy - t, cx + r + 1, cy + t + 1)
            _fill_rect(img, ss, cx - t, cy - r, cx + t + 1, cy + r + 1)
        elif spec.mark_shape == "circle":
            # fine-grid coverage test against the circle equation
            fy, fx = np.mgrid[(cy - r) * ss:(cy + r + 1) * ss, (cx - r) * ss:(cx + r + 1) * ss]
            px = (fx + 0.5) / ss - (cx + 0.5)
            py = (fy + 0.5) / ss - (cy + 0.5)
            inside = px * px + py * py <= (r + 0.5) ** 2
            patch = img[(cy - r) * ss:(cy + r + 1) * ss, (cx - r) * ss:(cx + r + 1) * ss]
            patch[inside] = 0.0
        else:
            raise InvalidSpecError(f"unknown mark shape {spec.mark_shape!r}")
        gt.mark_centers.append((cx, cy))
        gt.bboxes.append((cx - r, cy - r, cx + r + 1, cy + r + 1))


def _render_gridlines(spec: FixtureSpec, img: np.ndarray, ss: int) -> None:
    """Horizontal gridlines plus an x-axis line; 1px, clear of image borders."""
    x0, x1 = max(2, spec.margin - 4), min(spec.width - 2, spec.width - spec.margin + 4)
    baseline = spec.height - spec.margin
    step = max(10, (spec.height - 2 * spec.margin) // 5)
    rows = [baseline] + [baseline - k * step for k in range(1, 6) if baseline - k * step >= spec.margin]
    for y in rows:
        img[y * ss:(y + 1) * ss, x0 * ss:x1 * ss] = 0.0


def correlated_points(
    count: int,
    seed: int,
    correlation: float = 0.0,
    min_sep: float = 0.12,
    lo: float = 0.06,
    hi: float = 0.94,
) -> tuple[tuple[float, float], ...]:
    """Rejection-sampled data-space points with a minimum pairwise separation.

    correlation > 0 places points near the rising diagonal, < 0 near the
    falling one, 0 uniformly.
    """
    rng = np.random.default_rng(seed)
    pts: list[tuple[float, float]] = []
    attempts = 0
    while len(pts) < count:
        attempts += 1
        if attempts > 20000:
            raise InvalidSpecError(
                f"cannot place {count} points with min separation {min_sep}"
            )
        x = rng.uniform(lo, hi)
        if correlation == 0.0:
            y = rng.uniform(lo, hi)
        else:
            center = x if correlation > 0 else (lo + hi - x)
            y = center + rng.normal(0.0, 0.35 * (1.0 - abs(correlation)) + 0.02)
            if not (lo <= y <= hi):
                continue
        if all((x - px) ** 2 + (y - py) ** 2 >= min_sep**2 for px, py in pts):
            pts.append((float(x), float(y)))
    return tuple(pts)


def render_fixture(spec: FixtureSpec) -> tuple[np.ndarray, GroundTruth]:
    """Rasterize `spec`; returns (float intensity image in [0,1], GroundTruth)."""
    if spec.kind not in ("bar", "histogram", "scatter"):
        raise InvalidSpecError(f"unknown fixture kind {spec.kind!r}")
    if spec.width < 16 or spec.height < 16:
        raise InvalidSpecError("canvas must be at least 16x16")
    ss = SUPERSAMPLE if spec.antialias else 1
    img = np.ones((spec.height * ss, spec.width * ss))
    gt = GroundTruth(kind=spec.kind, width=spec.width, height=spec.height, values=spec.values)

    if spec.gridlines:
        _render_gridlines(spec, img, ss)
    if spec.kind in ("bar", "histogram"):
        _render_bars(spec, img, ss, gt)
    else:
        _render_marks(spec, img, ss, gt)

    if ss > 1:
        img = img.reshape(spec.height, ss, spec.width, ss).mean(axis=(1, 3))
    gt.ink_count = int(np.count_nonzero(img < 0.5))
    return img, gt
