"""End-to-end orchestration: canvas extraction, descriptor fields, degenerate
point detection, clustering, and table extraction."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .clustering import CentroidPoint, centroids, dbscan
from .errors import InvalidInputError
from .extract import DataTable, extract_bars, extract_histogram, extract_scatter
from .params import Params
from .preprocess import CanvasImage, extract_canvas
from .tensorfield import (
    DegeneratePoint,
    TensorField,
    anisotropic_diffuse,
    compute_gradient,
    detect_degenerate_points,
    gradient_tensor,
    multichannel_vote_field,
    structure_tensor,
    tensor_vote_field,
)


@dataclass
class ExtractResult:
    table: DataTable
    canvas: CanvasImage
    points: list[DegeneratePoint]
    cluster_centroids: list[CentroidPoint]
    params: Params
    descriptor_field: TensorField
    trace_field: TensorField
    diagnostics: list[str] = field(default_factory=list)


def load_image(path, channel: str = "luminance") -> np.ndarray:
    """Load a PNG into a float intensity grid in [0, 1].

    Transparent pixels composite onto white, matching the chart-background
    convention.
    """
    from PIL import Image

    with Image.open(path) as img:
        if "A" in img.getbands():
            background = Image.new("RGBA", img.size, (255, 255, 255, 255))
            img = Image.alpha_composite(background, img.convert("RGBA"))
        rgb = np.asarray(img.convert("RGB"), dtype=np.float64) / 255.0
    if channel == "luminance":
        return 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    try:
        idx = "rgb".index(channel)
    except ValueError:
        raise InvalidInputError(f"unknown channel {channel!r}") from None
    return rgb[..., idx]


def descriptor_fields(
    intensity: np.ndarray, params: Params, channels: list[np.ndarray] | None = None
) -> tuple[TensorField, TensorField]:
    """(descriptor field, strength field) for degenerate point detection.

    The tensor-voting descriptor diffuses the vote field and keeps the
    undiffused votes as the strength (trace) source; the structure tensor is
    its own strength source.
    """
    g = compute_gradient(intensity)
    tg = gradient_tensor(g)
    if params.descriptor == "structure-tensor":
        ts = structure_tensor(tg, params.rho)
        return ts, ts
    if params.multichannel and channels:
        tv = multichannel_vote_field(
            [gradient_tensor(compute_gradient(c)) for c in channels], params.sigma_d
        )
    else:
        tv = tensor_vote_field(tg, params.sigma_d)
    return anisotropic_diffuse(tv, params.delta), tv


def detect_points(
    intensity: np.ndarray, params: Params, channels: list[np.ndarray] | None = None
) -> tuple[list[DegeneratePoint], TensorField, TensorField]:
    desc, strength = descriptor_fields(intensity, params, channels)
    pts = detect_degenerate_points(
        desc, params.tau_cp, params.resolved_tau_wd(), trace_field=strength
    )
    return pts, desc, strength


def extract_table(
    cents: list[CentroidPoint], canvas: CanvasImage, params: Params
) -> DataTable:
    if params.chart_type == "bar":
        return extract_bars(cents, canvas, params.orientation, params.x_tol, params.y_tol)
    if params.chart_type == "histogram":
        return extract_histogram(cents, canvas, params.orientation, params.x_tol, params.y_tol)
    return extract_scatter(cents)


def run_fields(
    image: np.ndarray,
    params: Params,
    source: str = "",
    debug_dir=None,
    channels: list[np.ndarray] | None = None,
) -> tuple[CanvasImage, list[DegeneratePoint], TensorField, TensorField]:
    """Canvas extraction plus degenerate point detection (no table yet)."""
    params.validate()
    if params.preprocess:
        canvas = extract_canvas(image, source=source, debug_dir=debug_dir)
    else:
        canvas = CanvasImage(
            intensity=np.asarray(image, dtype=np.float64), source=source, steps=[]
        )
    masked_channels = None
    if params.multichannel and channels:
        object_mask = canvas.intensity < 0.5
        masked_channels = [np.where(object_mask, c, 1.0) for c in channels]
    points, desc, strength = detect_points(canvas.intensity, params, masked_channels)
    return canvas, points, desc, strength


def run_extract(
    image: np.ndarray,
    params: Params,
    source: str = "",
    debug_dir=None,
    channels: list[np.ndarray] | None = None,
) -> ExtractResult:
    """Run canvas extraction and data extraction on an intensity image."""
    canvas, points, desc, strength = run_fields(image, params, source, debug_dir, channels)
    diagnostics = []
    if not points:
        diagnostics.append("no degenerate points detected")
    ordered = [(p.x, p.y) for p in points]  # detection emits (y, x) sorted order
    cs = dbscan(ordered, params.eps, params.min_pts)
    cents = centroids(cs, ordered)
    if cs.noise:
        diagnostics.append(f"{len(cs.noise)} degenerate points classified as noise")

    table = extract_table(cents, canvas, params)
    table.provenance = {
        "source": source,
        "chartfield_version": __version__,
        **{f"param_{k}": v for k, v in sorted(params.as_manifest_dict().items())},
    }
    return ExtractResult(
        table=table,
        canvas=canvas,
        points=points,
        cluster_centroids=cents,
        params=params,
        descriptor_field=desc,
        trace_field=strength,
        diagnostics=diagnostics + table.diagnostics,
    )


def manifest_for(result: ExtractResult, input_path: str, input_bytes: bytes, outputs: dict) -> dict:
    """Reproducible run manifest (no wall-clock fields: repeat runs must be
    byte-identical)."""
    return {
        "schema": 1,
        "chartfield_version": __version__,
        "input": {
            "path": str(input_path),
            "sha256": hashlib.sha256(input_bytes).hexdigest(),
        },
        "parameters": result.params.as_manifest_dict(),
        "counts": {
            "degenerate_points": len(result.points),
            "clusters": len(result.cluster_centroids),
            "rows": len(result.table.rows),
        },
        "preprocessing_steps": result.canvas.steps,
        "diagnostics": result.diagnostics,
        "outputs": outputs,
    }
