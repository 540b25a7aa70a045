"""Chart canvas extraction.

Reduces a chart image to its canvas: binarize, fill outline-only objects,
strip gridlines/axes/text with morphological opening and component filters,
recover object regions with marker-based watershed, and redraw a uniform
2px border around every object. The output has a white background and solid
black objects, ready for tensor field construction.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import cv2
import numpy as np

from .errors import EmptyCanvasError, InvalidInputError

#: Objects are considered unfilled outlines when ink covers less than this
#: fraction of the canvas (chart data-ink ratios sit well below it).
FILL_CHECK_FRACTION = 0.2

#: Components thinner than this in either bbox dimension are axes/gridlines.
MIN_COMPONENT_THICKNESS = 3
#: Components smaller than this area are text glyphs or specks.
MIN_COMPONENT_AREA = 30

BORDER_WIDTH = 2
CANNY_LOW = 25  # 0.1 * 255
CANNY_HIGH = 76  # 0.3 * 255

_KERNEL3 = np.ones((3, 3), np.uint8)


@dataclass
class BinaryImage:
    """Per-pixel ink mask; True = foreground (dark ink)."""

    bits: np.ndarray

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    def ink_fraction(self) -> float:
        return float(self.bits.mean())


@dataclass
class LabelMap:
    """N8 connected-component labels; 0 = background, labels contiguous 0..count."""

    labels: np.ndarray
    count: int

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]


@dataclass
class CanvasImage:
    """Preprocessed chart canvas: white background, black chart objects."""

    intensity: np.ndarray
    source: str = ""
    steps: list[str] = field(default_factory=list)

    @property
    def height(self) -> int:
        return self.intensity.shape[0]

    @property
    def width(self) -> int:
        return self.intensity.shape[1]


def _as_float_gray(image: np.ndarray) -> np.ndarray:
    image = np.asarray(image)
    if image.size == 0:
        raise InvalidInputError("empty image")
    if image.ndim == 3:
        # ITU-R 601 luminance
        image = 0.299 * image[..., 0] + 0.587 * image[..., 1] + 0.114 * image[..., 2]
    if image.dtype == np.uint8:
        image = image.astype(np.float64) / 255.0
    return np.clip(image.astype(np.float64), 0.0, 1.0)


def binarize(image: np.ndarray) -> BinaryImage:
    """Otsu threshold on intensity; the darker side is foreground."""
    gray = _as_float_gray(image)
    u8 = np.round(gray * 255.0).astype(np.uint8)
    if u8.min() == u8.max():
        # uniform image: no ink
        return BinaryImage(np.zeros(gray.shape, dtype=bool))
    _, inv = cv2.threshold(u8, 0, 255, cv2.THRESH_BINARY_INV + cv2.THRESH_OTSU)
    return BinaryImage(inv > 0)


def label_components(binary: BinaryImage) -> LabelMap:
    """N8 connected components of the ink mask."""
    count, labels = cv2.connectedComponents(binary.bits.astype(np.uint8), connectivity=8)
    return LabelMap(labels, count - 1)


#: A hole is an outline interior (and gets filled) when it covers at least
#: this fraction of its enclosing ink component's bounding box; smaller
#: enclosed background (grid cells, loops in glyphs) is left alone.
HOLE_FILL_RATIO = 0.35


def _hole_mask(bits: np.ndarray) -> np.ndarray:
    """Outline interiors: enclosed background dominating its enclosing component.

    A hole fills only when nothing else is drawn inside it; the axes frame
    of a real chart also encloses its background, but the chart objects
    sitting in that background mark it as a container, not an outline.
    """
    bg = (~bits).astype(np.uint8)
    count, labels, stats, _ = cv2.connectedComponentsWithStats(bg, connectivity=4)
    reach = np.zeros(count, dtype=bool)
    for border in (labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]):
        reach[np.unique(border)] = True

    _, ink_labels, ink_stats, _ = cv2.connectedComponentsWithStats(
        bits.astype(np.uint8), connectivity=8
    )
    # strokes of an unfilled outline vanish under erosion; components that
    # keep an interior are already-filled shapes (or frames fused to them)
    # and their enclosed background is not an outline interior
    solid = cv2.erode(bits.astype(np.uint8), _KERNEL3, iterations=2) > 0
    hole = np.zeros(bits.shape, dtype=bool)
    for i in range(1, count):
        if reach[i]:
            continue
        region = labels == i
        ring = cv2.dilate(region.astype(np.uint8), _KERNEL3) > 0
        owners = set(np.unique(ink_labels[ring & bits]))
        if not owners:
            continue
        if any((solid & (ink_labels == o)).any() for o in owners):
            continue
        owner_bbox = max(
            int(ink_stats[o, cv2.CC_STAT_WIDTH]) * int(ink_stats[o, cv2.CC_STAT_HEIGHT])
            for o in owners
        )
        if stats[i, cv2.CC_STAT_AREA] < HOLE_FILL_RATIO * owner_bbox:
            continue
        # ink components whose bbox sits inside the hole's bbox are islands
        # drawn in this background, not part of an outline
        x, y, w, h = (int(stats[i, k]) for k in range(4))
        island = any(
            ink_stats[o, cv2.CC_STAT_LEFT] >= x
            and ink_stats[o, cv2.CC_STAT_TOP] >= y
            and ink_stats[o, cv2.CC_STAT_LEFT] + ink_stats[o, cv2.CC_STAT_WIDTH] <= x + w
            and ink_stats[o, cv2.CC_STAT_TOP] + ink_stats[o, cv2.CC_STAT_HEIGHT] <= y + h
            for o in owners
        )
        if island:
            continue
        hole |= region
    return hole


def ensure_filled(image: np.ndarray, binary: BinaryImage) -> np.ndarray:
    """Flood-fill closed outlines when the ink fraction is below the check.

    Charts drawn as unfilled outlines become solid objects; already-filled
    charts have no qualifying holes and pass through unchanged.
    """
    gray = _as_float_gray(image)
    if binary.ink_fraction() >= FILL_CHECK_FRACTION:
        return gray
    holes = _hole_mask(binary.bits)
    if not holes.any():
        return gray
    filled = gray.copy()
    filled[holes] = 0.0
    return filled


def _fill_corner_notches(mask: np.ndarray, iterations: int = 2) -> np.ndarray:
    """Fill 1px corner dents left by binarizing anti-aliased boundaries.

    A dent pixel touches ink horizontally, vertically, and on the diagonal
    between them, and nothing else (exactly 3 of 8 neighbors). Reflex
    corners of real geometry (histogram skyline steps, cross-mark elbows)
    have a fourth inky neighbor along the continuing wall and are left
    alone, as are straight edges and 1px slits.
    """
    m = mask.astype(bool).copy()
    for _ in range(iterations):
        p = np.pad(m, 1).astype(np.int8)
        count8 = (
            p[:-2, :-2] + p[:-2, 1:-1] + p[:-2, 2:]
            + p[1:-1, :-2] + p[1:-1, 2:]
            + p[2:, :-2] + p[2:, 1:-1] + p[2:, 2:]
        )
        horiz = (p[1:-1, :-2] + p[1:-1, 2:]) > 0
        vert = (p[:-2, 1:-1] + p[2:, 1:-1]) > 0
        notch = ~m & horiz & vert & (count8 == 3)
        if not notch.any():
            break
        m |= notch
    return m


def _component_filter(mask: np.ndarray) -> tuple[np.ndarray, int]:
    """Drop thin (axes, gridline remains) and tiny (glyph) components."""
    count, labels, stats, _ = cv2.connectedComponentsWithStats(mask, connectivity=8)
    keep = np.zeros(count, dtype=bool)
    for i in range(1, count):
        w = stats[i, cv2.CC_STAT_WIDTH]
        h = stats[i, cv2.CC_STAT_HEIGHT]
        area = stats[i, cv2.CC_STAT_AREA]
        if min(w, h) >= MIN_COMPONENT_THICKNESS and area >= MIN_COMPONENT_AREA:
            keep[i] = True
    return keep[labels], int(keep.sum())


def _save_debug(debug_dir, name: str, array: np.ndarray) -> None:
    if debug_dir is None:
        return
    from PIL import Image

    path = Path(debug_dir)
    path.mkdir(parents=True, exist_ok=True)
    if array.dtype == bool:
        array = array.astype(np.uint8) * 255
    elif array.dtype != np.uint8:
        array = np.round(np.clip(array, 0.0, 1.0) * 255.0).astype(np.uint8)
    Image.fromarray(array).save(path / f"{name}.png")


def extract_canvas(
    image: np.ndarray, source: str = "", debug_dir: str | os.PathLike | None = None
) -> CanvasImage:
    """Run the full canvas extraction pipeline on a chart image."""
    gray = _as_float_gray(image)
    steps = ["binarize"]
    binary = binarize(gray)
    _save_debug(debug_dir, "01_binarized", binary.bits)

    filled = ensure_filled(gray, binary)
    if filled is not gray:
        steps.append("object-fill")
        binary = binarize(filled)
        _save_debug(debug_dir, "02_filled", binary.bits)

    ink = binary.bits.astype(np.uint8)
    opened = cv2.morphologyEx(ink, cv2.MORPH_OPEN, _KERNEL3, iterations=1)
    steps.append("opening")
    _save_debug(debug_dir, "03_opened", opened > 0)

    object_mask, n_components = _component_filter(opened)
    steps.append("component-filter")
    _save_debug(debug_dir, "04_filtered", object_mask)
    if n_components == 0:
        raise EmptyCanvasError(
            "no chart objects found after preprocessing",
            diagnostics={
                "ink_fraction": binary.ink_fraction(),
                "opened_ink": int(opened.sum()),
                "components_kept": 0,
            },
        )
    # with thin structures and glyphs gone, repair the corner dents
    # binarizing anti-aliased boundaries left on the survivors
    object_mask = _fill_corner_notches(object_mask)
    steps.append("notch-fill")
    _save_debug(debug_dir, "05_repaired", object_mask)

    mask_u8 = object_mask.astype(np.uint8)
    sure_bg = cv2.dilate(mask_u8, _KERNEL3, iterations=2)
    sure_fg = cv2.erode(mask_u8, _KERNEL3, iterations=1)
    if not sure_fg.any():
        sure_fg = mask_u8
    _, markers = cv2.connectedComponents(sure_fg, connectivity=8)
    markers += 1  # background seed = 1
    unknown = (sure_bg > 0) & (sure_fg == 0)
    markers[unknown] = 0

    bgr = cv2.cvtColor(np.round(gray * 255.0).astype(np.uint8), cv2.COLOR_GRAY2BGR)
    markers = cv2.watershed(bgr, markers.astype(np.int32))
    steps.append("watershed")
    # watershed decides which ink components are chart objects; membership
    # stays with the crisp ink mask, since flood boundaries nibble corner
    # pixels on anti-aliased renders and junction detection needs the
    # right angles intact
    count, comp_labels, comp_stats, _ = cv2.connectedComponentsWithStats(
        object_mask.astype(np.uint8), connectivity=8
    )
    flooded = markers > 1
    keep = np.zeros(count, dtype=bool)
    for i in range(1, count):
        component = comp_labels == i
        overlap = np.count_nonzero(flooded & component)
        keep[i] = overlap >= 0.5 * comp_stats[i, cv2.CC_STAT_AREA]
    segmented = keep[comp_labels]
    segmented, n_components = _component_filter(segmented.astype(np.uint8))
    _save_debug(debug_dir, "06_segmented", segmented)
    if n_components == 0:
        raise EmptyCanvasError(
            "watershed segmentation removed every object",
            diagnostics={"components_kept": 0},
        )

    seg_u8 = segmented.astype(np.uint8) * 255
    edges = cv2.Canny(seg_u8, CANNY_LOW, CANNY_HIGH)
    contours, _ = cv2.findContours(edges, cv2.RETR_LIST, cv2.CHAIN_APPROX_NONE)
    border = np.zeros(gray.shape, dtype=np.uint8)
    for contour in contours:
        border[contour[:, 0, 1], contour[:, 0, 0]] = 1
    # the drawn border is a subset of the component boundary: widen the
    # traced contour with a square pen, then clip it to the silhouette so
    # right-angle corners stay crisp (Canny bevels corners in its edge map)
    border = cv2.dilate(border, _KERNEL3, iterations=BORDER_WIDTH - 1) > 0
    border &= segmented
    canvas = np.full(gray.shape, 255, dtype=np.uint8)
    canvas[segmented] = 0
    canvas[border] = 0
    steps.append("border")
    out = canvas.astype(np.float64) / 255.0
    _save_debug(debug_dir, "07_canvas", out)

    return CanvasImage(intensity=out, source=source, steps=steps)
