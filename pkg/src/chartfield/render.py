"""Renderers for saliency dot plots, ellipse glyph fields, and degenerate
point overlays, plus the tuner bundle export consumed by the browser UI.

All renderers are deterministic: identical inputs produce byte-identical
files.
"""

from __future__ import annotations

import base64
import io
import json
import math
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from ._coolwarm import COOLWARM
from .errors import InvalidParameterError
from .preprocess import CanvasImage
from .tensorfield import DegeneratePoint, TensorField, eigen_field, saliency_maps

HOMOGENEOUS_GRAY = (128, 128, 128)
TUNER_SCHEMA_VERSION = 1


def colormap(cl: np.ndarray) -> np.ndarray:
    """Map curve saliency in [0, 1] onto the committed palette."""
    lut = np.array(COOLWARM, dtype=np.uint8)
    idx = np.clip(np.round(cl * 255.0), 0, 255).astype(np.intp)
    return lut[idx]


def render_saliency(
    field: TensorField, homogeneity_trace: np.ndarray | None = None
) -> Image.Image:
    """Dot plot of the curve map: one colored pixel per canvas pixel.

    Blue marks degenerate (junction) pixels, red line-like ones; homogeneous
    pixels are neutral gray.
    """
    cl, _, homog = saliency_maps(field, homogeneity_trace=homogeneity_trace)
    rgb = colormap(cl)
    rgb[homog] = HOMOGENEOUS_GRAY
    return Image.fromarray(rgb, "RGB")


def _ellipse_points(cx, cy, a, b, vx, vy, steps: int = 24):
    pts = []
    for k in range(steps):
        t = 2.0 * math.pi * k / steps
        ex = a * math.cos(t)
        ey = b * math.sin(t)
        pts.append((cx + ex * vx - ey * vy, cy + ex * vy + ey * vx))
    return pts


def render_glyphs(
    field: TensorField,
    stride: int = 4,
    scale_to: int | None = None,
    homogeneity_trace: np.ndarray | None = None,
) -> Image.Image:
    """Ellipse glyphs on a subsampled grid.

    Semi-axes are proportional to the eigenvalues, normalized by the field
    maximum so the largest glyph fills one stride cell; orientation follows
    the major eigenvector and fill color the curve saliency. Zero tensors
    draw nothing.
    """
    if stride < 1:
        raise InvalidParameterError(f"stride must be >= 1, got {stride}")
    zoom = scale_to or max(1, 512 // max(field.width, field.height))
    w, h = field.width * zoom, field.height * zoom
    img = Image.new("RGB", (w, h), (255, 255, 255))
    draw = ImageDraw.Draw(img)

    l0, l1, vx, vy = eigen_field(field)
    cl, _, homog = saliency_maps(field, homogeneity_trace=homogeneity_trace)
    colors = colormap(cl)
    lmax = float(l0.max())
    if lmax <= 0:
        return img
    half = 0.5 * stride * zoom

    for y in range(0, field.height, stride):
        for x in range(0, field.width, stride):
            if homog[y, x] or l0[y, x] <= 0:
                continue
            a = half * l0[y, x] / lmax
            b = half * l1[y, x] / lmax
            if a < 0.5:
                continue
            cx = (x + 0.5) * zoom
            cy = (y + 0.5) * zoom
            pts = _ellipse_points(cx, cy, a, max(b, 0.0), vx[y, x], vy[y, x])
            draw.polygon(pts, fill=tuple(int(v) for v in colors[y, x]))
    return img


def overlay_degenerates(
    canvas: CanvasImage | np.ndarray, points: list[DegeneratePoint]
) -> Image.Image:
    """Source canvas with a high-contrast cross at every degenerate point."""
    intensity = canvas.intensity if isinstance(canvas, CanvasImage) else np.asarray(canvas)
    gray = np.round(np.clip(intensity, 0.0, 1.0) * 255.0).astype(np.uint8)
    img = Image.fromarray(gray, "L").convert("RGB")
    draw = ImageDraw.Draw(img)
    for p in points:
        draw.line([(p.x - 2, p.y), (p.x + 2, p.y)], fill=(255, 0, 0))
        draw.line([(p.x, p.y - 2), (p.x, p.y + 2)], fill=(255, 0, 0))
    return img


def _png_base64(intensity: np.ndarray) -> str:
    gray = np.round(np.clip(intensity, 0.0, 1.0) * 255.0).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(gray, "L").save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


def tuner_bundle(
    canvas: CanvasImage | np.ndarray,
    points: list[DegeneratePoint],
    defaults: dict | None = None,
    thresholds: dict | None = None,
) -> dict:
    """Bundle dict for the browser tuner (canvas image plus point list)."""
    intensity = canvas.intensity if isinstance(canvas, CanvasImage) else np.asarray(canvas)
    return {
        "schema": TUNER_SCHEMA_VERSION,
        "width": int(intensity.shape[1]),
        "height": int(intensity.shape[0]),
        "image": _png_base64(intensity),
        "points": [
            {"x": p.x, "y": p.y, "cp": round(p.cp, 9), "norm_trace": round(p.norm_trace, 9)}
            for p in points
        ],
        "defaults": dict(defaults or {"eps": 5.0, "min_pts": 3}),
        "thresholds": dict(thresholds or {}),
    }


def export_tuner_bundle(
    path,
    canvas: CanvasImage | np.ndarray,
    points: list[DegeneratePoint],
    defaults: dict | None = None,
    thresholds: dict | None = None,
) -> dict:
    """Write the tuner bundle JSON to `path`; returns the bundle dict."""
    bundle = tuner_bundle(canvas, points, defaults, thresholds)
    Path(path).write_text(json.dumps(bundle, indent=2, sort_keys=True))
    return bundle


def load_tuner_bundle(path) -> dict:
    bundle = json.loads(Path(path).read_text())
    if bundle.get("schema") != TUNER_SCHEMA_VERSION:
        raise InvalidParameterError(
            f"unsupported tuner bundle schema {bundle.get('schema')!r}"
        )
    return bundle


def bundle_points(bundle: dict) -> list[tuple[float, float]]:
    """(x, y) pairs from a tuner bundle, ready for clustering."""
    return [(float(p["x"]), float(p["y"])) for p in bundle["points"]]
