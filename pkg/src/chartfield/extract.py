"""Chart-type-dependent conversion of cluster centroids into a data table.

Bar charts pair corner-centroid columns into bars; histograms reconstruct
the skyline over a uniform bin grid with a left-to-right scanline that
synthesizes missing transitions; scatter plots take centroids directly.
All output stays in pixel space.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .clustering import CentroidPoint
from .errors import EmptyTableError, InvalidInputError
from .preprocess import CanvasImage

X_MERGE_TOLERANCE = 3.0
Y_TOLERANCE = 3.0
#: Bars shorter than this are reported as height 0 (near-baseline failure mode).
MIN_BAR_HEIGHT = 3.0


@dataclass
class DataTable:
    """Extracted chart data in pixel space.

    rows: (x_center, height) for bar/histogram, (x, y) for scatter.
    """

    kind: str
    rows: list[tuple[float, float]]
    diagnostics: list[str] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        out = io.StringIO()
        for key in sorted(self.provenance):
            out.write(f"# {key}: {self.provenance[key]}\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["x", "y"] if self.kind == "scatter" else ["x", "height"])
        for row in self.rows:
            writer.writerow([repr(float(row[0])), repr(float(row[1]))])
        return out.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": self.kind,
                "rows": [[float(a), float(b)] for a, b in self.rows],
                "diagnostics": self.diagnostics,
                "provenance": self.provenance,
            },
            indent=2,
            sort_keys=True,
        )

    @staticmethod
    def from_csv(text: str, kind: str = "bar") -> "DataTable":
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError:
                continue  # header
        return DataTable(kind=kind, rows=rows)


@dataclass
class XGroup:
    """Centroids sharing (within tolerance) one x coordinate."""

    x: float
    members: list[CentroidPoint]

    @property
    def ys(self) -> list[float]:
        return [c.y for c in self.members]


@dataclass
class BarPattern:
    """Corner-centroid occurrence layout used to synthesize missing corners."""

    x_groups: list[XGroup]
    baseline_y: float


def group_by_x(cents: list[CentroidPoint], tol: float = X_MERGE_TOLERANCE) -> list[XGroup]:
    """Greedy left-to-right grouping; each group spans at most `tol` in x."""
    groups: list[XGroup] = []
    for c in sorted(cents, key=lambda c: (c.x, c.y)):
        if groups and c.x - groups[-1].members[0].x <= tol:
            groups[-1].members.append(c)
            groups[-1].x = float(np.mean([m.x for m in groups[-1].members]))
        else:
            groups.append(XGroup(c.x, [c]))
    return groups


def detect_baseline(
    canvas: CanvasImage | None,
    cents: list[CentroidPoint],
    tol: float = Y_TOLERANCE,
) -> float:
    """Row of the shared bar base.

    Mode of the maximal-y centroid rows within `tol` (ties to the smaller
    row); falls back to the lowest ink row of the canvas when no centroids
    are available.
    """
    if cents:
        rows = [int(round(c.y)) for c in cents]
        ymax = max(rows)
        near = [y for y in rows if y >= ymax - tol]
        counts = Counter(near)
        best = max(counts.values())
        return float(min(y for y, n in counts.items() if n == best))
    if canvas is not None:
        ink_rows = np.nonzero((canvas.intensity < 0.5).any(axis=1))[0]
        if len(ink_rows):
            return float(ink_rows.max())
    raise InvalidInputError("cannot detect a baseline without centroids or ink")


def _oriented(cents: list[CentroidPoint], canvas, orientation: str):
    """Map horizontal-bar geometry onto the vertical-bar frame.

    Horizontal bars anchor on the left, so x maps to -x: the anchor column
    becomes the maximal row of the transformed frame, where the vertical
    logic expects the baseline.
    """
    if orientation == "vertical":
        return cents, canvas
    if orientation != "horizontal":
        raise InvalidInputError(f"unknown orientation {orientation!r}")
    flipped = [CentroidPoint(c.y, -c.x, c.member_count) for c in cents]
    # the canvas is only consulted as a baseline fallback when there are no
    # centroids, and the callers reject empty centroid lists first
    return flipped, None


def extract_bars(
    cents: list[CentroidPoint],
    canvas: CanvasImage | None = None,
    orientation: str = "vertical",
    x_tol: float = X_MERGE_TOLERANCE,
    y_tol: float = Y_TOLERANCE,
) -> DataTable:
    """One (x_center, height) row per bar from corner-cluster centroids.

    Bars contribute a left and a right edge group; every bar shares the
    detected baseline, so a missing baseline corner is synthesized there.
    """
    if not cents:
        raise EmptyTableError("no centroids to extract bars from")
    cents, canvas = _oriented(cents, canvas, orientation)
    baseline = detect_baseline(canvas, cents, y_tol)
    pattern = BarPattern(group_by_x(cents, x_tol), baseline)

    diags: list[str] = []
    groups = pattern.x_groups
    if len(groups) % 2 == 1:
        diags.append(
            f"odd number of edge groups ({len(groups)}); unpaired group at "
            f"x={groups[-1].x:.1f} dropped"
        )
    rows: list[tuple[float, float]] = []
    for left, right in zip(groups[0::2], groups[1::2]):
        top_left = min(left.ys)
        top_right = min(right.ys)
        if abs(top_left - top_right) > y_tol:
            diags.append(
                f"edge tops differ by {abs(top_left - top_right):.1f}px at "
                f"x={left.x:.1f}/{right.x:.1f}"
            )
        top = 0.5 * (top_left + top_right)
        height = baseline - top
        if height < MIN_BAR_HEIGHT:
            diags.append(f"bar at x={0.5 * (left.x + right.x):.1f} is near the baseline")
            height = 0.0
        rows.append((0.5 * (left.x + right.x), height))
    rows.sort(key=lambda r: r[0])
    return DataTable(kind="bar", rows=rows, diagnostics=diags)


def _fit_bin_grid(edges: list[float]) -> tuple[float, float, int]:
    """Uniform grid (origin, width, bin count) through detected edge positions."""
    gaps = np.diff(edges)
    w = float(gaps.min())
    # detected gaps are integer multiples of the true bin width
    counts = np.maximum(np.round(gaps / w), 1)
    w = float((edges[-1] - edges[0]) / counts.sum())
    return edges[0], w, int(counts.sum())


def extract_histogram(
    cents: list[CentroidPoint],
    canvas: CanvasImage | None = None,
    orientation: str = "vertical",
    x_tol: float = X_MERGE_TOLERANCE,
    y_tol: float = Y_TOLERANCE,
) -> DataTable:
    """(bin_center, height) rows from shared-edge corner centroids.

    The skyline is walked left to right: at each bin edge the next top is the
    detected corner row farthest from the current one; edges without corners
    mean equal adjacent heights and keep the current top.
    """
    if not cents:
        raise EmptyTableError("no centroids to extract a histogram from")
    cents, canvas = _oriented(cents, canvas, orientation)
    baseline = detect_baseline(canvas, cents, y_tol)
    groups = group_by_x(cents, x_tol)
    if len(groups) < 2:
        raise EmptyTableError("need at least two bin edges to form a histogram")

    origin, width, n_bins = _fit_bin_grid([g.x for g in groups])
    by_slot: dict[int, XGroup] = {}
    diags: list[str] = []
    for g in groups:
        slot = int(round((g.x - origin) / width))
        if slot in by_slot:
            by_slot[slot].members.extend(g.members)
        else:
            by_slot[slot] = g

    rows: list[tuple[float, float]] = []
    top = baseline
    for k in range(n_bins):
        g = by_slot.get(k)
        candidates = [y for y in g.ys if abs(y - top) > y_tol] if g is not None else []
        if candidates:
            top = max(candidates, key=lambda y: abs(y - top))
        else:
            # edges carry the taller neighbor's corner, so on a descending
            # step this bin's own top only shows up at its right edge;
            # baseline corners there are not heights
            nxt = by_slot.get(k + 1)
            shorter = (
                [y for y in nxt.ys if top + y_tol < y < baseline - y_tol]
                if nxt is not None
                else []
            )
            if shorter:
                top = min(shorter)
        height = baseline - top
        if 0.0 < height < MIN_BAR_HEIGHT:
            diags.append(f"bin {k} is near the baseline")
            height = 0.0
        rows.append((origin + (k + 0.5) * width, max(height, 0.0)))

    last = by_slot.get(n_bins)
    if last is None or all(abs(y - baseline) > y_tol for y in last.ys):
        diags.append("rightmost bin edge does not return to the baseline")
    return DataTable(kind="histogram", rows=rows, diagnostics=diags)


def extract_scatter(cents: list[CentroidPoint]) -> DataTable:
    """One (x, y) row per centroid; no missing-value synthesis."""
    rows = sorted((c.x, c.y) for c in cents)
    return DataTable(kind="scatter", rows=rows)
