"""End-to-end extraction from charts rendered by a real plotting library.

These exercise the preprocessing repairs (notch filling, component-vote
segmentation) against anti-aliased output with axes, titles, tick labels,
and gridlines present. Tolerances are loose because rendering details vary
across library versions.
"""

import numpy as np
import pytest

mpl = pytest.importorskip("matplotlib")
mpl.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from chartfield.params import Params
from chartfield.pipeline import load_image, run_extract


@pytest.fixture
def render(tmp_path):
    def _render(draw):
        fig, ax = plt.subplots(figsize=(4, 3), dpi=100)
        draw(ax)
        path = tmp_path / "chart.png"
        fig.savefig(path)
        plt.close(fig)
        return load_image(path)

    return _render


def test_bar_chart(render):
    values = [5.0, 3.0, 8.0, 6.0, 4.0]

    def draw(ax):
        ax.bar(list("abcde"), values, color="#4878d0", edgecolor="black")
        ax.grid(axis="y", alpha=0.6)
        ax.set_title("quarterly widgets")

    img = render(draw)
    result = run_extract(img, Params(chart_type="bar", min_pts=1))
    assert len(result.table.rows) == 5
    heights = np.array([h for _, h in result.table.rows])
    truth = np.array(values)
    np.testing.assert_allclose(heights / heights.max(), truth / truth.max(), atol=0.03)


def test_horizontal_bars(render):
    values = [5.0, 3.0, 8.0, 6.0]

    def draw(ax):
        ax.barh(list("abcd"), values, color="#6aa84f", edgecolor="black")
        ax.grid(axis="x", alpha=0.5)

    img = render(draw)
    result = run_extract(
        img, Params(chart_type="bar", orientation="horizontal", min_pts=1)
    )
    assert len(result.table.rows) == 4
    extents = np.array([h for _, h in result.table.rows])
    truth = np.array(values[::-1])  # barh stacks the first category at the bottom
    np.testing.assert_allclose(extents / extents.max(), truth / truth.max(), atol=0.03)


def test_histogram(render):
    rng = np.random.default_rng(5)
    data = rng.normal(50, 15, 400)
    counts = {}

    def draw(ax):
        counts["values"], _, _ = ax.hist(data, bins=7, color="#e8743b", edgecolor="black")
        ax.grid(axis="y", alpha=0.5)

    img = render(draw)
    result = run_extract(img, Params(chart_type="histogram", min_pts=1))
    truth = np.asarray(counts["values"])
    assert len(result.table.rows) == len(truth)
    heights = np.array([h for _, h in result.table.rows])
    np.testing.assert_allclose(heights / heights.max(), truth / truth.max(), atol=0.03)


def test_scatter(render):
    from chartfield.fixtures import correlated_points

    pts = np.array(correlated_points(12, seed=7, correlation=0.0, min_sep=0.2))

    def draw(ax):
        ax.scatter(pts[:, 0], pts[:, 1], s=60, c="#2e7d32", marker="s")
        ax.grid(alpha=0.4)

    img = render(draw)
    result = run_extract(img, Params(chart_type="scatter", eps=9.0, min_pts=3))
    assert len(result.table.rows) == 12


def test_scatter_round_markers(render):
    import cv2

    from chartfield.fixtures import correlated_points
    from chartfield.preprocess import extract_canvas

    pts = np.array(correlated_points(10, seed=9, correlation=0.6, min_sep=0.2))

    def draw(ax):
        ax.scatter(pts[:, 0], pts[:, 1], s=70, c="#1f77b4", marker="o")

    img = render(draw)
    result = run_extract(img, Params(chart_type="scatter", eps=9.0, min_pts=3))
    assert len(result.table.rows) == 10
    # rows must be the marks themselves, not surviving tick-label debris
    canvas = extract_canvas(img)
    ink = (canvas.intensity < 0.5).astype(np.uint8)
    n, _, stats, centers = cv2.connectedComponentsWithStats(ink, connectivity=8)
    marks = sorted(
        (centers[i][0], centers[i][1])
        for i in range(1, n)
        if stats[i, 2] >= 9 and stats[i, 3] >= 9
    )
    assert len(marks) == 10
    for (x, y), (mx, my) in zip(sorted(result.table.rows), marks):
        assert max(abs(x - mx), abs(y - my)) <= 2.0
