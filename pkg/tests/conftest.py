import os

import numpy as np
import pytest

from urbscale import Block, CityDataset, CityObservables, SamplePoint, build_plane
from urbscale.cluster1d import kmeans_1d_exact

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
BLOCKS_DIR = os.path.join(FIXTURES, "blocks")
OBSERVABLES = os.path.join(FIXTURES, "observables.csv")
DELTAS = os.path.join(FIXTURES, "deltas")
GOLDEN = os.path.join(FIXTURES, "golden")


def make_power_law_city(d: float, n_classes: int = 10, city_id: str | None = None,
                        k_exp: float = 14.0) -> CityDataset:
    """One block per class with a_j = p_j / rho_j and p_j = round(10^k * rho_j^(1-d)),
    rho_j = 10^(0.4 j): the log-log points are collinear with slope d up to the
    integer rounding of p_j (relative error < 1e-9 at these magnitudes)."""
    blocks = []
    for j in range(n_classes):
        rho = 10.0 ** (0.4 * j)
        population = round(10.0**k_exp * rho ** (1.0 - d))
        area = population / rho
        blocks.append(Block(f"B{j:02d}", area, population))
    return CityDataset(city_id or "powerlaw", tuple(blocks))


def make_random_city(rng, n_blocks: int = 60, city_id: str = "rand",
                     zero_pop_fraction: float = 0.05) -> CityDataset:
    blocks = []
    for i in range(n_blocks):
        area = float(rng.uniform(0.1, 5.0))
        if rng.random() < zero_pop_fraction:
            population = 0
        else:
            density = float(rng.lognormal(4.0, 1.2))
            population = max(1, round(density * area))
        blocks.append(Block(f"B{i:03d}", area, population))
    return CityDataset(city_id, tuple(blocks))


@pytest.fixture(scope="session")
def jit_warm():
    """Compile the clustering kernels once so timed tests measure the solve."""
    kmeans_1d_exact(np.sort(np.random.default_rng(0).uniform(0, 1, 64)), 3)


@pytest.fixture(scope="session")
def planar_samples():
    rng = np.random.default_rng(11)
    pts = rng.uniform(0.0, 1.0, size=(50, 2))
    return [SamplePoint(float(x), float(y), float(2 * x + 3 * y)) for x, y in pts]


@pytest.fixture(scope="session")
def small_plane(planar_samples):
    return build_plane(planar_samples, nx=20, ny=20, kind="exponential", dependent="test")
