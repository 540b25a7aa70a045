import json

import numpy as np
import pytest
from PIL import Image

from chartfield.cli import main
from chartfield.extract import DataTable


@pytest.fixture
def bar_png(tmp_path):
    code = main(
        [
            "fixtures", "--kind", "bar", "--values", "5,3,8", "--name", "bars",
            "--out-dir", str(tmp_path), "--height", "260",
        ]
    )
    assert code == 0
    return tmp_path / "bars.png"


class TestFixturesCommand:
    def test_writes_png_and_truth(self, bar_png):
        assert bar_png.exists()
        truth = json.loads((bar_png.parent / "bars.truth.json").read_text())
        assert truth["kind"] == "bar"
        assert len(truth["rows"]) == 3

    def test_scatter_points_argument(self, tmp_path):
        code = main(
            [
                "fixtures", "--kind", "scatter", "--points", "0.2,0.3;0.8,0.7",
                "--name", "sp", "--out-dir", str(tmp_path),
            ]
        )
        assert code == 0
        truth = json.loads((tmp_path / "sp.truth.json").read_text())
        assert len(truth["mark_centers"]) == 2

    def test_bad_values_exit_code(self, tmp_path, capsys):
        code = main(["fixtures", "--kind", "bar", "--values", "x,y", "--out-dir", str(tmp_path)])
        assert code == 3
        assert "parameter error" in capsys.readouterr().err


class TestExtractCommand:
    def test_bar_round_trip(self, bar_png, tmp_path):
        out = tmp_path / "out"
        code = main(
            ["extract", str(bar_png), "--type", "bar", "--out-dir", str(out), "--min-pts", "1"]
        )
        assert code == 0
        table = DataTable.from_csv((out / "bars.csv").read_text(), kind="bar")
        assert len(table.rows) == 3
        manifest = json.loads((out / "bars.manifest.json").read_text())
        assert manifest["parameters"]["min_pts"] == 1
        assert manifest["counts"]["rows"] == 3
        assert manifest["input"]["sha256"]

    def test_unreadable_path_exit_two(self, tmp_path, capsys):
        code = main(["extract", str(tmp_path / "nope.png"), "--type", "bar"])
        assert code == 2

    def test_bad_parameter_exit_three(self, bar_png, capsys):
        code = main(["extract", str(bar_png), "--type", "bar", "--eps", "-1"])
        assert code == 3

    def test_blank_image_exit_one(self, tmp_path, capsys):
        blank = tmp_path / "blank.png"
        Image.fromarray(np.full((60, 60), 255, dtype=np.uint8), "L").save(blank)
        code = main(["extract", str(blank), "--type", "bar", "--out-dir", str(tmp_path)])
        assert code == 1

    def test_structure_tensor_descriptor_recorded(self, bar_png, tmp_path):
        out = tmp_path / "out_ts"
        code = main(
            [
                "extract", str(bar_png), "--type", "bar", "--out-dir", str(out),
                "--descriptor", "structure-tensor", "--min-pts", "1", "--tau-cp", "0.5",
            ]
        )
        manifest = json.loads((out / "bars.manifest.json").read_text())
        assert manifest["parameters"]["descriptor"] == "structure-tensor"
        assert code in (0, 1)

    def test_repeat_runs_byte_identical(self, bar_png, tmp_path):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert (
                main(
                    [
                        "extract", str(bar_png), "--type", "bar",
                        "--out-dir", str(out), "--min-pts", "1",
                    ]
                )
                == 0
            )
            outs.append(
                (
                    (out / "bars.csv").read_bytes(),
                    (out / "bars.manifest.json").read_bytes(),
                )
            )
        assert outs[0] == outs[1]

    def test_optional_pngs_written(self, bar_png, tmp_path):
        out = tmp_path / "viz"
        code = main(
            [
                "extract", str(bar_png), "--type", "bar", "--out-dir", str(out),
                "--min-pts", "1", "--saliency-png", "--overlay-png", "--glyphs-png",
            ]
        )
        assert code == 0
        assert (out / "bars.saliency.png").exists()
        assert (out / "bars.overlay.png").exists()
        assert (out / "bars.glyphs.png").exists()


class TestOtherCommands:
    def test_saliency_command(self, bar_png, tmp_path):
        out = tmp_path / "sal.png"
        assert main(["saliency", str(bar_png), "--out", str(out)]) == 0
        assert Image.open(out).size == (300, 260)

    def test_tune_export_loads(self, bar_png, tmp_path):
        out = tmp_path / "bundle.json"
        assert main(["tune-export", str(bar_png), "--type", "bar", "--out", str(out)]) == 0
        bundle = json.loads(out.read_text())
        assert bundle["schema"] == 1
        assert len(bundle["points"]) == 12
        assert bundle["thresholds"]["tau_wd"] == 0.005

    def test_eval_command(self, tmp_path, capsys):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        a.write_text(DataTable(kind="bar", rows=[(0, 10.0), (1, 20.0)]).to_csv())
        b.write_text(DataTable(kind="bar", rows=[(0, 10.0), (1, 20.0)]).to_csv())
        out = tmp_path / "report.json"
        code = main(
            ["eval", "--extracted", str(a), "--truth", str(b), "--kind", "bar", "--out", str(out)]
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert report["metric"] == "emd-1d"
        assert report["value"] == 0.0
        assert report["cardinalities"] == {"extracted": 2, "truth": 2}

    def test_eval_scatter_uses_2d(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        a.write_text(DataTable(kind="scatter", rows=[(0.0, 0.0), (1.0, 1.0)]).to_csv())
        b.write_text(DataTable(kind="scatter", rows=[(0.0, 0.0), (1.0, 1.0)]).to_csv())
        out = tmp_path / "r.json"
        assert main(
            ["eval", "--extracted", str(a), "--truth", str(b), "--kind", "scatter", "--out", str(out)]
        ) == 0
        assert json.loads(out.read_text())["metric"] == "emd-2d"

    def test_multichannel_flag(self, bar_png, tmp_path):
        out = tmp_path / "mc"
        code = main(
            [
                "extract", str(bar_png), "--type", "bar", "--out-dir", str(out),
                "--min-pts", "1", "--multichannel",
            ]
        )
        assert code == 0
        manifest = json.loads((out / "bars.manifest.json").read_text())
        assert manifest["parameters"]["multichannel"] is True
        assert manifest["counts"]["rows"] == 3

    def test_multichannel_on_colored_bars(self, tmp_path):
        # blue bars on white: per-channel gradients differ, votes are summed
        from chartfield.fixtures import FixtureSpec, render_fixture

        img, _ = render_fixture(
            FixtureSpec(kind="bar", values=(5.0, 3.0, 8.0), width=300, height=260)
        )
        rgb = np.full((*img.shape, 3), 255, dtype=np.uint8)
        rgb[img < 0.5] = (40, 80, 200)
        path = tmp_path / "blue.png"
        Image.fromarray(rgb, "RGB").save(path)
        out = tmp_path / "out"
        code = main(
            [
                "extract", str(path), "--type", "bar", "--out-dir", str(out),
                "--min-pts", "1", "--multichannel",
            ]
        )
        assert code == 0
        table = DataTable.from_csv((out / "blue.csv").read_text(), kind="bar")
        assert len(table.rows) == 3

    def test_debug_dir_env_var(self, bar_png, tmp_path, monkeypatch):
        debug = tmp_path / "debug"
        monkeypatch.setenv("CHARTFIELD_DEBUG_DIR", str(debug))
        code = main(
            ["extract", str(bar_png), "--type", "bar", "--out-dir", str(tmp_path / "o"),
             "--min-pts", "1"]
        )
        assert code == 0
        assert (debug / "01_binarized.png").exists()
        assert (debug / "07_canvas.png").exists()

    def test_config_file_plumbed(self, bar_png, tmp_path):
        cfg = tmp_path / "p.cfg"
        cfg.write_text("min_pts = 1\neps = 6\n")
        out = tmp_path / "cfg_out"
        code = main(
            ["extract", str(bar_png), "--type", "bar", "--out-dir", str(out), "--config", str(cfg)]
        )
        assert code == 0
        manifest = json.loads((out / "bars.manifest.json").read_text())
        assert manifest["parameters"]["eps"] == 6.0
