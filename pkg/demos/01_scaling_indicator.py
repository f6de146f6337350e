"""Walk through the scaling indicator on a hand-built city.

The indicator answers: as housing density rises, how fast does the area
covered by that housing fall? Blocks are clustered into density classes,
each class contributes a point (log10(1/rho_j), log10(a_j)), and the OLS
slope of those points is the indicator.

Run from the repo root:  python3 demos/01_scaling_indicator.py
"""

import numpy as np

from urbscale import Block, CityDataset, city_indicator

# A toy "city": lots of low-density area, a little high-density core.
# Densities are persons per km^2.
rng = np.random.default_rng(42)
blocks = []
for i in range(200):
    # log-uniform densities from ~10 to ~10000 people / km^2
    density = 10 ** rng.uniform(1.0, 4.0)
    area = float(rng.uniform(0.05, 2.0))
    blocks.append(Block(f"B{i:03d}", area, max(1, round(density * area))))

city = CityDataset("demo", tuple(blocks))

indicator = city_indicator(city, c=10)
print(f"blocks used:          {indicator.n_blocks_used}")
print(f"mean density:         {indicator.mean_density:.1f} /km^2")
print(f"scaling indicator ds: {indicator.scaling.ds:.4f}")
print(f"regression r^2:       {indicator.scaling.r_squared:.4f}")
print()
print("per-class regression points (x = log10(1/rho_j), y = log10(a_j)):")
for x, y in indicator.scaling.points:
    print(f"  x = {x:+.3f}   y = {y:+.3f}")

# Doubling every block's population shifts densities but not the slope:
doubled = CityDataset(
    "demo2x", tuple(Block(b.block_id, b.area, b.population * 2) for b in city.blocks)
)
print()
print("after doubling every population:")
print(f"  ds unchanged: {city_indicator(doubled, 10).scaling.ds:.12f}")
