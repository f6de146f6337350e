"""The ex-ante loop: apply a hypothetical development to a city and watch its
point move on the planning plane.

A large low-density subdivision is proposed for city c01. Does it push the
city toward higher expected gasoline use?

Run from the repo root:  python3 demos/04_scenario.py
"""

import os

from urbscale import Block, build_plane, evaluate_scenario, load_cities
from urbscale.pipeline import analyze_cities, metrics_rows, plane_samples
from urbscale.scenario import ScenarioDelta

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(HERE, "..", "tests", "fixtures")

cities = load_cities(
    os.path.join(FIXTURES, "blocks"), os.path.join(FIXTURES, "observables.csv")
)
records = analyze_cities(cities)
samples = plane_samples(metrics_rows(records), "gas_per_area")
plane = build_plane(samples, nx=60, ny=60, dependent="gas_per_area")

base_city = cities["c01"]

# 900 km^2 of 6 people-per-km^2 exurban sprawl
sprawl = ScenarioDelta(added_blocks=(Block("SPRAWL-1", 900.0, 5400),))
outcome = evaluate_scenario(base_city, sprawl, plane, c=10)

print("scenario: add a 900 km^2 low-density subdivision to c01\n")
print(f"                    {'base':>14} {'scenario':>14} {'delta':>12}")
print(f"ds                  {outcome.base.ds:14.4f} {outcome.scenario.ds:14.4f} "
      f"{outcome.delta_ds:+12.4f}")
print(f"mean density /km^2  {outcome.base.mean_density:14.2f} "
      f"{outcome.scenario.mean_density:14.2f} {outcome.delta_mean_density:+12.2f}")
print(f"gas USD/km^2 (est)  {outcome.base.plane_estimate:14.1f} "
      f"{outcome.scenario.plane_estimate:14.1f} {outcome.delta_plane_estimate:+12.1f}")
if not outcome.scenario.inside_hull:
    print("\nnote: the scenario point extrapolates beyond the observed cohort")
