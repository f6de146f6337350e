"""Build a planning plane: krige gasoline sales per km^2 over the two
independent variables (mean density, scaling indicator) for the bundled
synthetic cohort, then read values off it.

Run from the repo root:  python3 demos/03_planning_plane.py
Writes demo_plane.svg next to this script.
"""

import os

from urbscale import build_plane, load_cities, locate
from urbscale.pipeline import analyze_cities, metrics_rows, plane_samples
from urbscale.render import heatmap_svg

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(HERE, "..", "tests", "fixtures")

cities = load_cities(
    os.path.join(FIXTURES, "blocks"), os.path.join(FIXTURES, "observables.csv")
)
records = analyze_cities(cities)
rows = metrics_rows(records)
samples = plane_samples(rows, "gas_per_area")
print(f"{len(samples)} included cities feed the plane")

plane = build_plane(samples, nx=80, ny=80, kind="exponential", dependent="gas_per_area")
print(f"variogram: {plane.variogram.kind}, nugget {plane.variogram.nugget:.3g}, "
      f"sill {plane.variogram.sill:.3g}, range {plane.variogram.range_param:.3g}")
print(f"leave-one-out rmse: {plane.cv_stats.rmse:.3g}, bias: {plane.cv_stats.bias:.3g}")

# Read values off the plane: near cohort cities and off the observed ridge
for density, ds in ((60.0, 0.7), (20.0, 1.4), (9.0, 2.4)):
    res = locate(plane, density, ds)
    flag = "" if res.inside_hull else "  (extrapolated!)"
    print(f"  density {density:5.1f}, ds {ds:.1f} -> {res.estimate:12.1f} USD/km^2{flag}")

svg = heatmap_svg(plane.grid, plane.x_axis, plane.y_axis,
                  title="gas sales per km^2 over (mean density, ds)")
out = os.path.join(HERE, "demo_plane.svg")
with open(out, "w") as fh:
    fh.write(svg)
print(f"\nwrote {out}")
