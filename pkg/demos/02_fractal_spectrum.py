"""Render a fractal spectrum: one colored square per density class.

Color encodes how much area a class covers; rapid color change across a thin
density band signals strong disparity between housing types.

Run from the repo root:  python3 demos/02_fractal_spectrum.py
Writes demo_spectrum.svg next to this script.
"""

import os

from urbscale import load_cities
from urbscale.scaling import city_spectrum

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(HERE, "..", "tests", "fixtures")

cities = load_cities(
    os.path.join(FIXTURES, "blocks"), os.path.join(FIXTURES, "observables.csv")
)

bands, svg = city_spectrum(cities["toyville"], c=10)
print("toyville spectrum bands (density rises left to right):")
for band in bands:
    print(
        f"  rho = {band.density_rhoj:8.1f} /km^2   area = {band.area_aj:5.1f} km^2"
        f"   color bin {band.color_bin}"
    )

out = os.path.join(HERE, "demo_spectrum.svg")
with open(out, "w") as fh:
    fh.write(svg)
print(f"\nwrote {out}")
