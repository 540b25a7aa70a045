import numpy as np
import pytest

import cv2

from chartfield.errors import EmptyCanvasError
from chartfield.fixtures import FixtureSpec, render_fixture
from chartfield import preprocess as pp


class TestBinarize:
    def test_all_white_is_background(self):
        b = pp.binarize(np.ones((10, 10)))
        assert not b.bits.any()

    def test_half_black_half_white_splits_exactly(self):
        img = np.ones((10, 10))
        img[:, :5] = 0.0
        b = pp.binarize(img)
        assert b.bits[:, :5].all()
        assert not b.bits[:, 5:].any()

    def test_antialiased_fixture_ink_within_five_percent(self):
        spec = FixtureSpec(kind="bar", values=(5.0, 3.0, 8.0), antialias=True)
        img, gt = render_fixture(spec)
        b = pp.binarize(img)
        assert abs(int(b.bits.sum()) - gt.ink_count) <= 0.05 * gt.ink_count


class TestEnsureFilled:
    def test_solid_chart_unchanged(self):
        img, _ = render_fixture(FixtureSpec(kind="bar", values=(5.0, 3.0)))
        out = pp.ensure_filled(img, pp.binarize(img))
        np.testing.assert_array_equal(out, img)

    def test_outline_rectangle_filled(self):
        spec = FixtureSpec(kind="bar", values=(5.0,), outline_only=True)
        img, gt = render_fixture(spec)
        binary = pp.binarize(img)
        out = pp.ensure_filled(img, binary)
        refilled = pp.binarize(out)
        x0, y0, x1, y1 = gt.bboxes[0]
        assert refilled.bits[y0:y1, x0:x1].all()
        assert refilled.ink_fraction() > binary.ink_fraction()

    def test_empty_canvas_unchanged(self):
        img = np.ones((20, 20))
        out = pp.ensure_filled(img, pp.binarize(img))
        np.testing.assert_array_equal(out, img)


class TestFillCornerNotches:
    def test_fills_corner_dent(self):
        m = np.zeros((8, 8), dtype=bool)
        m[3:7, 2:7] = True
        m[3, 2] = False  # binarization dropped the corner pixel
        out = pp._fill_corner_notches(m)
        assert out[3, 2]
        assert out.sum() == m.sum() + 1

    def test_preserves_reflex_corners(self):
        # skyline step: tall block next to short block
        m = np.zeros((10, 12), dtype=bool)
        m[2:9, 1:6] = True
        m[5:9, 6:11] = True
        out = pp._fill_corner_notches(m)
        np.testing.assert_array_equal(out, m)

    def test_preserves_one_pixel_slits(self):
        m = np.zeros((8, 9), dtype=bool)
        m[2:7, 1:4] = True
        m[2:7, 5:8] = True
        out = pp._fill_corner_notches(m)
        np.testing.assert_array_equal(out, m)


class TestLabelComponents:
    def test_labels_contiguous_and_n8_connected(self):
        bits = np.zeros((12, 12), dtype=bool)
        bits[1:4, 1:4] = True
        bits[4, 4] = True  # diagonal touch joins via N8
        bits[8:11, 8:11] = True
        lm = pp.label_components(pp.BinaryImage(bits))
        labels = set(np.unique(lm.labels))
        assert labels == set(range(lm.count + 1))
        assert lm.count == 2  # diagonal pixel merges with a block under N8


def residual_outside_bboxes(canvas: pp.CanvasImage, bboxes, pad=3) -> float:
    ink = canvas.intensity < 0.5
    inside = np.zeros_like(ink)
    for x0, y0, x1, y1 in bboxes:
        inside[max(y0 - pad, 0):y1 + pad, max(x0 - pad, 0):x1 + pad] = True
    return float((ink & ~inside).sum()) / ink.size


class TestExtractCanvas:
    def test_gridlines_removed(self):
        spec = FixtureSpec(kind="bar", values=(5.0, 3.0, 8.0), gridlines=True)
        img, gt = render_fixture(spec)
        canvas = pp.extract_canvas(img)
        assert residual_outside_bboxes(canvas, gt.bboxes) < 0.005

    def test_scatter_components_preserved(self):
        pts = tuple((0.08 + 0.084 * i, (0.17 * i) % 0.9 + 0.05) for i in range(10))
        spec = FixtureSpec(kind="scatter", points=pts, mark_radius=5, width=400, height=300)
        img, _ = render_fixture(spec)
        canvas = pp.extract_canvas(img)
        count, _ = cv2.connectedComponents(
            (canvas.intensity < 0.5).astype(np.uint8), connectivity=8
        )
        assert count - 1 == 10

    def test_blank_image_raises_empty_canvas(self):
        with pytest.raises(EmptyCanvasError) as exc:
            pp.extract_canvas(np.ones((50, 50)))
        assert "components_kept" in exc.value.diagnostics

    def test_idempotent_component_count_and_bboxes(self):
        spec = FixtureSpec(kind="bar", values=(4.0, 7.0, 2.0), gridlines=True)
        img, _ = render_fixture(spec)
        first = pp.extract_canvas(img)
        second = pp.extract_canvas(first.intensity)

        def stats(c):
            n, _, st, _ = cv2.connectedComponentsWithStats(
                (c.intensity < 0.5).astype(np.uint8), connectivity=8
            )
            boxes = sorted(
                (st[i, 0], st[i, 1], st[i, 2], st[i, 3]) for i in range(1, n)
            )
            return n - 1, boxes

        n1, b1 = stats(first)
        n2, b2 = stats(second)
        assert n1 == n2
        for (x1, y1, w1, h1), (x2, y2, w2, h2) in zip(b1, b2):
            assert max(abs(x1 - x2), abs(y1 - y2), abs(w1 - w2), abs(h1 - h2)) <= 1

    def test_border_ring_thickness(self):
        spec = FixtureSpec(kind="bar", values=(5.0, 3.0))
        img, _ = render_fixture(spec)
        canvas = pp.extract_canvas(img)
        ink = (canvas.intensity < 0.5).astype(np.uint8)
        disk = cv2.getStructuringElement(cv2.MORPH_ELLIPSE, (5, 5))
        eroded = cv2.erode(ink, disk)
        n, _, st, _ = cv2.connectedComponentsWithStats(ink, connectivity=8)
        for i in range(1, n):
            if st[i, 2] > 6 and st[i, 3] > 6:
                x, y, w, h = st[i, 0], st[i, 1], st[i, 2], st[i, 3]
                assert eroded[y:y + h, x:x + w].any()

    def test_provenance_steps_recorded(self):
        img, _ = render_fixture(FixtureSpec(kind="bar", values=(3.0,)))
        canvas = pp.extract_canvas(img, source="mem")
        assert canvas.source == "mem"
        assert canvas.steps[0] == "binarize"
        assert "watershed" in canvas.steps
        assert canvas.steps[-1] == "border"

    def test_outline_and_filled_twins_match(self):
        filled_img, _ = render_fixture(FixtureSpec(kind="bar", values=(5.0, 2.0)))
        outline_img, _ = render_fixture(
            FixtureSpec(kind="bar", values=(5.0, 2.0), outline_only=True)
        )
        a = pp.extract_canvas(filled_img)
        b = pp.extract_canvas(outline_img)
        assert "object-fill" in b.steps
        np.testing.assert_array_equal(a.intensity < 0.5, b.intensity < 0.5)

    def test_debug_images_written(self, tmp_path):
        img, _ = render_fixture(FixtureSpec(kind="bar", values=(3.0, 1.0)))
        pp.extract_canvas(img, debug_dir=tmp_path)
        names = {p.name for p in tmp_path.glob("*.png")}
        assert "01_binarized.png" in names
        assert "07_canvas.png" in names
