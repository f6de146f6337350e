"""Batch entry point: the whole pipeline as subcommands emitting files.

Exit codes: 0 success, 1 environment/input problem (missing paths, unknown
city, too few cities), 2 data-format error (malformed CSV or delta JSON).
Outputs are deterministic: identical inputs give byte-identical files, with
floats printed as shortest round-trip decimals.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from . import __version__, pipeline, render
from .errors import DeltaError, ParseError, UrbscaleError
from .ingest import DEFAULT_POPULATION_TOLERANCE, load_cities
from .kriging import VARIOGRAM_KINDS, build_plane
from .scaling import DEFAULT_CLASSES, city_spectrum
from .scenario import ScenarioDelta, evaluate_scenario
from .stats import TRANSFORMS, correlate_cities

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ENV = 1
EXIT_DATA = 2

CORRELATION_PAIRS = (("ds", "gas_per_area"), ("ds", "co2_per_capita"))


def _fmt(value) -> str:
    """Fixed cell formatting: shortest round-trip decimal for floats."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))  # float() strips numpy scalar reprs
    return str(value)


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _write_json(path: str, payload, echo: bool = False) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    _write_text(path, text)
    if echo:
        sys.stdout.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _load(args):
    if not os.path.isdir(args.blocks_dir):
        raise FileNotFoundError(f"blocks dir {args.blocks_dir!r} does not exist")
    if not os.path.isfile(args.observables):
        raise FileNotFoundError(f"observables file {args.observables!r} does not exist")
    return load_cities(args.blocks_dir, args.observables)


def _records(args):
    cities = _load(args)
    return pipeline.analyze_cities(
        cities, c=args.classes, tolerance=args.tolerance, jobs=args.jobs
    )


def _record_row(record) -> dict:
    ind = record.indicator
    row = {
        "city_id": record.city_id,
        "status": record.report.status,
        "computed_population": record.report.computed_population,
        "reported_population": record.report.reported_population,
        "relative_error": record.report.relative_error,
        "ds": None,
        "intercept": None,
        "r_squared": None,
        "n_classes_used": None,
        "mean_density": None,
        "populated_area_km2": None,
        "n_blocks": len(record.dataset.blocks),
        "n_blocks_zero_population": None,
        "notes": record.error or "",
    }
    if ind is not None:
        row.update(
            ds=ind.scaling.ds,
            intercept=ind.scaling.intercept,
            r_squared=ind.scaling.r_squared,
            n_classes_used=ind.scaling.n_classes_used,
            mean_density=ind.mean_density,
            populated_area_km2=ind.populated_area,
            n_blocks_zero_population=ind.n_blocks_zero_population,
            notes="; ".join(ind.warnings) or (record.error or ""),
        )
    return row


def cmd_indicator(args) -> int:
    records = _records(args)
    rows = [_record_row(records[cid]) for cid in sorted(records)]
    header = list(rows[0].keys()) if rows else []
    csv_text = _csv_text(header, [[r[h] for h in header] for r in rows])
    _write_text(os.path.join(args.out, "indicator.csv"), csv_text)
    payload = {"classes": args.classes, "tolerance": args.tolerance, "cities": rows}
    _write_json(os.path.join(args.out, "indicator.json"), payload, echo=args.stdout)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    cities = _load(args)
    if args.city_id not in cities:
        raise FileNotFoundError(f"unknown city {args.city_id!r}")
    bands, svg = city_spectrum(cities[args.city_id], c=args.classes)
    _write_text(os.path.join(args.out, f"spectrum_{args.city_id}.svg"), svg)
    payload = {
        "city_id": args.city_id,
        "bands": [
            {"density_rhoj": b.density_rhoj, "area_aj": b.area_aj, "color_bin": b.color_bin}
            for b in bands
        ],
    }
    _write_json(
        os.path.join(args.out, f"spectrum_{args.city_id}.json"), payload, echo=args.stdout
    )
    return EXIT_OK


def cmd_correlate(args) -> int:
    records = _records(args)
    rows = pipeline.metrics_rows(records)
    transforms = [args.transform] if args.transform else list(TRANSFORMS)
    results = []
    failures = []
    for pair in CORRELATION_PAIRS:
        for transform in transforms:
            try:
                res = correlate_cities(rows, pair, transform)
            except UrbscaleError as exc:
                failures.append(
                    {"x": pair[0], "y": pair[1], "transform": transform,
                     "error": exc.code, "message": exc.message}
                )
                continue
            results.append(res)
    if not results:
        raise UrbscaleError(
            "no correlation computable: " + "; ".join(f["message"] for f in failures)
        )
    header = ["x", "y", "transform", "pearson_r", "n", "n_skipped"]
    csv_rows = [
        [r.x_label, r.y_label, r.transform, r.pearson_r, r.n, r.n_skipped] for r in results
    ]
    _write_text(os.path.join(args.out, "correlations.csv"), _csv_text(header, csv_rows))
    payload = {
        "n_cities": len(rows),
        "results": [
            {
                "x": r.x_label,
                "y": r.y_label,
                "transform": r.transform,
                "pearson_r": r.pearson_r,
                "n": r.n,
                "n_skipped": r.n_skipped,
            }
            for r in results
        ],
        "failures": failures,
    }
    _write_json(os.path.join(args.out, "correlations.json"), payload, echo=args.stdout)
    return EXIT_OK


def _build_plane_from_args(args, records, dependent):
    rows = pipeline.metrics_rows(records)
    samples = pipeline.plane_samples(rows, dependent)
    nx, ny = args.grid
    return build_plane(samples, nx=nx, ny=ny, kind=args.variogram, dependent=dependent)


def cmd_plane(args) -> int:
    records = _records(args)
    plane = _build_plane_from_args(args, records, args.dependent)
    prefix = os.path.join(args.out, f"plane_{args.dependent}")

    header = ["x", "y", "z", "variance"]
    csv_rows = []
    xs = plane.to_original_x(plane.x_axis)
    ys = plane.to_original_y(plane.y_axis)
    for iy in range(plane.ny):
        for ix in range(plane.nx):
            csv_rows.append(
                [float(xs[ix]), float(ys[iy]),
                 float(plane.grid[iy, ix]), float(plane.variance_grid[iy, ix])]
            )
    _write_text(prefix + ".csv", _csv_text(header, csv_rows))
    _write_json(prefix + ".json", plane.to_dict(), echo=args.stdout)
    svg = render.heatmap_svg(
        plane.grid, plane.x_axis, plane.y_axis,
        title=f"{args.dependent} over (mean density, ds)",
    )
    _write_text(prefix + ".svg", svg)
    _write_json(prefix + "_cv.json", plane.cv_stats.to_dict())
    return EXIT_OK


def cmd_scenario(args) -> int:
    records = _records(args)
    if args.city_id not in records:
        raise FileNotFoundError(f"unknown city {args.city_id!r}")
    with open(args.delta_file, encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DeltaError(f"delta file is not valid JSON: {exc}") from None
    delta = ScenarioDelta.from_dict(payload)
    plane = _build_plane_from_args(args, records, args.dependent)
    outcome = evaluate_scenario(
        records[args.city_id].dataset, delta, plane, c=args.classes
    )
    out = {"city_id": args.city_id, **outcome.to_dict()}
    _write_json(
        os.path.join(args.out, f"scenario_{args.city_id}.json"), out, echo=args.stdout
    )
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import SessionState, create_app

    state = SessionState.load(
        args.blocks_dir,
        args.observables,
        c=args.classes,
        tolerance=args.tolerance,
        variogram=args.variogram,
        grid=tuple(args.grid),
    )
    app = create_app(state, ui_dir=args.ui_dir)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except SystemExit as exc:  # uvicorn exits non-zero on bind/startup failure
        return EXIT_ENV if exc.code else EXIT_OK
    return EXIT_OK


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        nx, ny = (int(p) for p in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 100x100, got {text!r}")
    return nx, ny


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="urbscale",
        description="Urban scaling indicator, fractal spectra, and planning planes",
    )
    parser.add_argument("--version", action="version", version=f"urbscale {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_out=True):
        p.add_argument("--blocks-dir", required=True, help="directory of <city_id>.csv block files")
        p.add_argument("--observables", required=True, help="shared observables CSV")
        if needs_out:
            p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--classes", type=int, default=DEFAULT_CLASSES)
        p.add_argument("--tolerance", type=float, default=DEFAULT_POPULATION_TOLERANCE)
        p.add_argument("--jobs", type=int, default=os.cpu_count())
        p.add_argument("--stdout", action="store_true", help="echo the JSON artifact to stdout")

    def add_plane_opts(p):
        p.add_argument("--variogram", choices=VARIOGRAM_KINDS, default="exponential")
        p.add_argument("--grid", type=_parse_grid, default=(100, 100))

    p = sub.add_parser("indicator", help="per-city scaling indicator table")
    add_common(p)
    p.set_defaults(func=cmd_indicator)

    p = sub.add_parser("spectrum", help="fractal spectrum SVG for one city")
    add_common(p)
    p.add_argument("city_id")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("correlate", help="indicator vs energy/emissions correlations")
    add_common(p)
    p.add_argument("--transform", choices=TRANSFORMS, default=None,
                   help="restrict to one transform (default: report all)")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("plane", help="kriged planning plane")
    add_common(p)
    add_plane_opts(p)
    p.add_argument("--dependent", choices=pipeline.DEPENDENT_VARIABLES,
                   default="gas_per_area")
    p.set_defaults(func=cmd_plane)

    p = sub.add_parser("scenario", help="evaluate a what-if delta for one city")
    add_common(p)
    add_plane_opts(p)
    p.add_argument("--dependent", choices=pipeline.DEPENDENT_VARIABLES,
                   default="gas_per_area")
    p.add_argument("--delta-file", required=True)
    p.add_argument("city_id")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("serve", help="run the JSON API for the explorer UI")
    add_common(p, needs_out=False)
    add_plane_opts(p)
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui-dir", default=None, help="static UI bundle to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("URBSCALE_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    if getattr(args, "out", None):
        os.makedirs(args.out, exist_ok=True)
    try:
        return args.func(args)
    except (ParseError, DeltaError) as exc:
        logger.error("%s", exc.message)
        print(f"urbscale: {exc.message}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"urbscale: {exc}", file=sys.stderr)
        return EXIT_ENV
    except UrbscaleError as exc:
        print(f"urbscale: {exc.message}", file=sys.stderr)
        return EXIT_ENV
    except OSError as exc:
        print(f"urbscale: {exc}", file=sys.stderr)
        return EXIT_ENV


if __name__ == "__main__":
    sys.exit(main())
