"""Command line interface.

Subcommands: extract, saliency, glyphs, tune-export, eval, fixtures.
Exit codes: 0 success, 1 empty extraction, 2 I/O error, 3 parameter error.
Set CHARTFIELD_DEBUG_DIR to dump per-stage preprocessing images.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .emd import emd_1d, emd_2d, normalize_table
from .errors import (
    ChartFieldError,
    EmptyCanvasError,
    EmptyTableError,
    InvalidParameterError,
    InvalidSpecError,
)
from .extract import DataTable
from .fixtures import FixtureSpec, correlated_points, render_fixture
from .params import Params, load_params
from .pipeline import load_image, manifest_for, run_extract, run_fields
from .render import export_tuner_bundle, overlay_degenerates, render_glyphs, render_saliency

EXIT_OK = 0
EXIT_EMPTY = 1
EXIT_IO = 2
EXIT_PARAMS = 3


def _add_param_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value parameter file")
    p.add_argument("--tuner", help="tuner parameter JSON exported by the browser UI")
    p.add_argument("--descriptor", choices=["tensor-voting", "structure-tensor"])
    p.add_argument("--orientation", choices=["vertical", "horizontal"])
    p.add_argument("--channel", choices=["luminance", "r", "g", "b"])
    p.add_argument("--multichannel", action="store_true", default=None)
    p.add_argument("--no-preprocess", dest="preprocess", action="store_false", default=None)
    p.add_argument("--tau-cp", type=float, dest="tau_cp")
    p.add_argument("--tau-wd", type=float, dest="tau_wd")
    p.add_argument("--sigma-d", type=float, dest="sigma_d")
    p.add_argument("--delta", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--min-pts", type=int, dest="min_pts")
    p.add_argument("--x-tol", type=float, dest="x_tol")
    p.add_argument("--y-tol", type=float, dest="y_tol")


_PARAM_KEYS = (
    "descriptor",
    "orientation",
    "channel",
    "multichannel",
    "preprocess",
    "tau_cp",
    "tau_wd",
    "sigma_d",
    "delta",
    "rho",
    "eps",
    "min_pts",
    "x_tol",
    "y_tol",
)


def _resolve_params(args, chart_type: str | None = None) -> Params:
    overrides = {k: getattr(args, k, None) for k in _PARAM_KEYS}
    return load_params(
        config_path=args.config,
        tuner_path=args.tuner,
        overrides=overrides,
        chart_type=chart_type,
    )


def _pipeline_inputs(args, params: Params):
    path = Path(args.image)
    image = load_image(path, params.channel)
    channels = None
    if params.multichannel:
        channels = [load_image(path, c) for c in "rgb"]
    debug_dir = os.environ.get("CHARTFIELD_DEBUG_DIR") or None
    return image, dict(source=str(path), debug_dir=debug_dir, channels=channels)


def _run_pipeline(args, params: Params):
    image, kwargs = _pipeline_inputs(args, params)
    return run_extract(image, params, **kwargs)


def _run_field_stage(args, params: Params):
    image, kwargs = _pipeline_inputs(args, params)
    return run_fields(image, params, **kwargs)


def _cmd_extract(args) -> int:
    params = _resolve_params(args, chart_type=args.type)
    result = _run_pipeline(args, params)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.image).stem

    outputs = {"csv": f"{stem}.csv", "json": f"{stem}.json", "manifest": f"{stem}.manifest.json"}
    (out_dir / outputs["csv"]).write_text(result.table.to_csv())
    (out_dir / outputs["json"]).write_text(result.table.to_json())
    if args.saliency_png:
        outputs["saliency"] = f"{stem}.saliency.png"
        render_saliency(
            result.descriptor_field, homogeneity_trace=result.trace_field.trace()
        ).save(out_dir / outputs["saliency"])
    if args.overlay_png:
        outputs["overlay"] = f"{stem}.overlay.png"
        overlay_degenerates(result.canvas, result.points).save(out_dir / outputs["overlay"])
    if args.glyphs_png:
        outputs["glyphs"] = f"{stem}.glyphs.png"
        render_glyphs(
            result.descriptor_field,
            stride=args.stride,
            homogeneity_trace=result.trace_field.trace(),
        ).save(out_dir / outputs["glyphs"])

    manifest = manifest_for(result, args.image, Path(args.image).read_bytes(), outputs)
    (out_dir / outputs["manifest"]).write_text(json.dumps(manifest, indent=2, sort_keys=True))

    for line in result.diagnostics:
        print(f"note: {line}", file=sys.stderr)
    print(f"wrote {out_dir / outputs['csv']} ({len(result.table.rows)} rows)")
    return EXIT_OK if result.table.rows else EXIT_EMPTY


def _cmd_saliency(args) -> int:
    params = _resolve_params(args)
    _, _, desc, strength = _run_field_stage(args, params)
    render_saliency(desc, homogeneity_trace=strength.trace()).save(args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_glyphs(args) -> int:
    params = _resolve_params(args)
    _, _, desc, strength = _run_field_stage(args, params)
    render_glyphs(
        desc, stride=args.stride, homogeneity_trace=strength.trace()
    ).save(args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_tune_export(args) -> int:
    params = _resolve_params(args, chart_type=args.type)
    canvas, points, _, _ = _run_field_stage(args, params)
    export_tuner_bundle(
        args.out,
        canvas,
        points,
        defaults={"eps": params.eps, "min_pts": params.min_pts},
        thresholds={"tau_cp": params.tau_cp, "tau_wd": params.resolved_tau_wd()},
    )
    print(f"wrote {args.out} ({len(points)} points)")
    return EXIT_OK


def _cmd_eval(args) -> int:
    extracted = DataTable.from_csv(Path(args.extracted).read_text(), kind=args.kind)
    truth = DataTable.from_csv(Path(args.truth).read_text(), kind=args.kind)
    if args.kind == "scatter":
        value = emd_2d(normalize_table(extracted), normalize_table(truth))
        metric = "emd-2d"
    else:
        value = emd_1d(normalize_table(extracted), normalize_table(truth))
        metric = "emd-1d"
    report = {
        "metric": metric,
        "value": value,
        "cardinalities": {"extracted": len(extracted.rows), "truth": len(truth.rows)},
        "normalization": "min-max per dimension",
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text)
    print(text)
    return EXIT_OK


def _parse_values(raw: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in raw.split(","))
    except ValueError as e:
        raise InvalidParameterError(f"--values expects comma-separated numbers, got {raw!r}") from e


def _cmd_fixtures(args) -> int:
    if args.kind == "scatter":
        if args.points:
            pts = []
            for pair in args.points.split(";"):
                x, _, y = pair.partition(",")
                pts.append((float(x), float(y)))
            points = tuple(pts)
        else:
            points = correlated_points(args.count, args.seed, args.correlation)
        spec = FixtureSpec(
            kind="scatter",
            points=points,
            width=args.width,
            height=args.height,
            mark_shape=args.mark_shape,
            mark_radius=args.mark_radius,
            antialias=args.aa,
            gridlines=args.gridlines,
            seed=args.seed,
        )
    else:
        if not args.values:
            raise InvalidParameterError("--values is required for bar/histogram fixtures")
        spec = FixtureSpec(
            kind=args.kind,
            values=_parse_values(args.values),
            width=args.width,
            height=args.height,
            bar_width=args.bar_width,
            gap=args.gap,
            gridlines=args.gridlines,
            outline_only=args.outline,
            antialias=args.aa,
            seed=args.seed,
        )
    image, gt = render_fixture(spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    from PIL import Image

    png_path = out_dir / f"{args.name}.png"
    Image.fromarray(np.round(image * 255.0).astype(np.uint8), "L").save(png_path)
    gt_path = out_dir / f"{args.name}.truth.json"
    gt_path.write_text(
        json.dumps(
            {
                "kind": gt.kind,
                "values": list(gt.values),
                "baseline_y": gt.baseline_y,
                "bar_corners": gt.bar_corners,
                "rows": gt.rows,
                "bin_edges": gt.bin_edges,
                "mark_centers": gt.mark_centers,
                "bboxes": gt.bboxes,
                "ink_count": gt.ink_count,
            },
            indent=2,
            sort_keys=True,
        )
    )
    print(f"wrote {png_path} and {gt_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chartfield",
        description="Extract chart data tables from raster images via tensor field degenerate points",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract a data table from a chart image")
    p.add_argument("image")
    p.add_argument("--type", required=True, choices=["bar", "histogram", "scatter"])
    p.add_argument("--out-dir", default=".")
    p.add_argument("--saliency-png", action="store_true")
    p.add_argument("--overlay-png", action="store_true")
    p.add_argument("--glyphs-png", action="store_true")
    p.add_argument("--stride", type=int, default=4)
    _add_param_args(p)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("saliency", help="render the saliency dot plot")
    p.add_argument("image")
    p.add_argument("--out", default="saliency.png")
    _add_param_args(p)
    p.set_defaults(func=_cmd_saliency)

    p = sub.add_parser("glyphs", help="render the ellipse glyph field")
    p.add_argument("image")
    p.add_argument("--out", default="glyphs.png")
    p.add_argument("--stride", type=int, default=4)
    _add_param_args(p)
    p.set_defaults(func=_cmd_glyphs)

    p = sub.add_parser("tune-export", help="export a tuner bundle for the browser UI")
    p.add_argument("image")
    p.add_argument("--type", required=True, choices=["bar", "histogram", "scatter"])
    p.add_argument("--out", default="tuner-bundle.json")
    _add_param_args(p)
    p.set_defaults(func=_cmd_tune_export)

    p = sub.add_parser("eval", help="EMD between extracted and ground-truth CSV tables")
    p.add_argument("--extracted", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--kind", required=True, choices=["bar", "histogram", "scatter"])
    p.add_argument("--out")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("fixtures", help="render a synthetic chart with ground truth")
    p.add_argument("--kind", required=True, choices=["bar", "histogram", "scatter"])
    p.add_argument("--name", default="fixture")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--values", help="comma-separated bar/histogram values")
    p.add_argument("--points", help="semicolon-separated x,y pairs in [0,1]")
    p.add_argument("--count", type=int, default=10, help="random scatter point count")
    p.add_argument("--correlation", type=float, default=0.0)
    p.add_argument("--width", type=int, default=300)
    p.add_argument("--height", type=int, default=200)
    p.add_argument("--bar-width", type=int, default=24, dest="bar_width")
    p.add_argument("--gap", type=int, default=12)
    p.add_argument("--mark-shape", default="circle", choices=["circle", "square", "cross"])
    p.add_argument("--mark-radius", type=int, default=5, dest="mark_radius")
    p.add_argument("--gridlines", action="store_true")
    p.add_argument("--outline", action="store_true")
    p.add_argument("--aa", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_fixtures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidParameterError, InvalidSpecError) as e:
        print(f"parameter error: {e}", file=sys.stderr)
        return EXIT_PARAMS
    except (EmptyCanvasError, EmptyTableError) as e:
        print(f"empty extraction: {e}", file=sys.stderr)
        return EXIT_EMPTY
    except (OSError, ChartFieldError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
