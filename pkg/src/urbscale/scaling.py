"""The per-city scaling indicator and its companions.

The indicator is the slope of the least-squares line through
``(log10(1/rho_j), log10(a_j))`` over density classes j: how fast the area
covered by housing of a given density falls as that density rises. Log base
10 throughout; the slope is base-invariant, intercept diagnostics are not.

Density classes come from exact 1D k-means with each density point weighted
by its block area (a class is a range of km², not of block counts). That
makes the indicator invariant to re-blocking: splitting a block into
equal-density pieces changes nothing, which unweighted per-block clustering
cannot guarantee.

Also here: the grid-based box-counting baseline the indicator replaces, and
the fractal-spectrum visualization data.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import render
from .cluster1d import Classing, kmeans_1d_exact
from .errors import DegenerateSpectrumError, InsufficientClassesError
from .ingest import CityDataset
from .stats import ols

logger = logging.getLogger(__name__)

DEFAULT_CLASSES = 10
MIN_REGRESSION_CLASSES = 3


@dataclass(frozen=True, slots=True)
class ClassAggregate:
    """Totals for one density class: a_j, p_j and rho_j = p_j / a_j."""

    class_index: int
    area_aj: float
    population_pj: int
    density_rhoj: float


@dataclass(frozen=True, slots=True)
class ScalingResult:
    ds: float
    intercept: float
    r_squared: float
    points: tuple[tuple[float, float], ...]
    n_classes_used: int

    def to_dict(self) -> dict:
        return {
            "ds": self.ds,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "points": [list(p) for p in self.points],
            "n_classes_used": self.n_classes_used,
        }


@dataclass(frozen=True, slots=True)
class SpectrumBand:
    density_rhoj: float
    area_aj: float
    color_bin: int


@dataclass(frozen=True, slots=True)
class CityIndicator:
    """Scaling result plus the city-level diagnostics that travel with it."""

    scaling: ScalingResult
    mean_density: float
    n_blocks_used: int
    n_blocks_zero_population: int
    populated_area: float
    total_area: float
    classes_requested: int
    classes_used: int
    warnings: tuple[str, ...] = ()


def _sorted_populated(dataset: CityDataset):
    """Areas/populations of positive-density blocks, sorted by density."""
    areas = np.array([b.area for b in dataset.blocks], dtype=np.float64)
    pops = np.array([b.population for b in dataset.blocks], dtype=np.int64)
    mask = pops > 0
    densities = pops[mask] / areas[mask]
    order = np.argsort(densities, kind="stable")
    n_zero = int((~mask).sum())
    return densities[order], areas[mask][order], pops[mask][order], n_zero


def _aggregate_sorted(
    areas: np.ndarray, pops: np.ndarray, classing: Classing
) -> list[ClassAggregate]:
    aggregates = []
    for j, sl in enumerate(classing.class_slices()):
        a_j = float(areas[sl].sum())
        p_j = int(pops[sl].sum())
        if p_j == 0:
            logger.warning("class %d has zero population; dropped", j)
            continue
        aggregates.append(ClassAggregate(j, a_j, p_j, p_j / a_j))
    return aggregates


def aggregate_classes(dataset: CityDataset, classing: Classing) -> list[ClassAggregate]:
    """Per-class area/population totals for a classing of this dataset's
    positive-density blocks (sorted by density, as the solvers expect).

    Classes that end up with zero population are dropped and logged.
    """
    _, areas, pops, _ = _sorted_populated(dataset)
    if len(areas) != len(classing.assignments):
        raise ValueError(
            f"classing covers {len(classing.assignments)} values but the dataset "
            f"has {len(areas)} positive-density blocks"
        )
    return _aggregate_sorted(areas, pops, classing)


def scaling_indicator(aggregates) -> ScalingResult:
    """OLS slope of log10(a_j) on log10(1/rho_j) over usable classes."""
    usable = [g for g in aggregates if g.area_aj > 0 and g.density_rhoj > 0]
    if len(usable) < MIN_REGRESSION_CLASSES:
        raise InsufficientClassesError(
            f"need at least {MIN_REGRESSION_CLASSES} usable classes, got {len(usable)}"
        )
    xs = [-math.log10(g.density_rhoj) for g in usable]
    ys = [math.log10(g.area_aj) for g in usable]
    if len({g.density_rhoj for g in usable}) < 2:
        raise DegenerateSpectrumError("all class densities equal; no spectrum to fit")
    fit = ols(xs, ys)
    return ScalingResult(
        ds=fit.slope,
        intercept=fit.intercept,
        r_squared=fit.r_squared,
        points=tuple(zip(xs, ys)),
        n_classes_used=len(usable),
    )


def city_indicator(
    dataset: CityDataset, c: int = DEFAULT_CLASSES, weight_by_area: bool = True
) -> CityIndicator:
    """Full per-city pipeline: density filter, sort, exact k-means into c
    classes, aggregate, regress.

    Clustering weights each density point by its block area, so a class
    collects km² rather than block counts; splitting a block into
    equal-density halves then provably leaves every class aggregate, and the
    indicator, unchanged. Pass ``weight_by_area=False`` for plain
    one-block-one-point clustering (not split-stable).

    Zero-population blocks are excluded (log(1/rho) is undefined at rho = 0)
    and counted. When the city has fewer distinct densities than c, c is
    lowered to the distinct count and a warning is attached.
    """
    densities, areas, pops, n_zero = _sorted_populated(dataset)
    if densities.size == 0:
        raise DegenerateSpectrumError(
            f"city {dataset.city_id!r} has no positive-density blocks"
        )
    n_distinct = int(np.count_nonzero(np.diff(densities) > 0)) + 1
    if n_distinct < MIN_REGRESSION_CLASSES:
        raise DegenerateSpectrumError(
            f"city {dataset.city_id!r} has {n_distinct} distinct densities; "
            f"need at least {MIN_REGRESSION_CLASSES}"
        )
    warnings: list[str] = []
    c_used = c
    if n_distinct < c:
        c_used = n_distinct
        warnings.append(f"classes lowered from {c} to {c_used} (distinct densities)")
    classing = kmeans_1d_exact(densities, c_used, weights=areas if weight_by_area else None)
    aggregates = _aggregate_sorted(areas, pops, classing)
    result = scaling_indicator(aggregates)
    populated_area = float(areas.sum())
    mean_density = float(pops.sum() / populated_area)
    return CityIndicator(
        scaling=result,
        mean_density=mean_density,
        n_blocks_used=int(densities.size),
        n_blocks_zero_population=n_zero,
        populated_area=populated_area,
        total_area=float(sum(b.area for b in dataset.blocks)),
        classes_requested=c,
        classes_used=c_used,
        warnings=tuple(warnings),
    )


def box_counting_dimension(class_counts) -> float:
    """Slope of log10(N_x) on log10(1/x): the grid-based baseline.

    ``class_counts`` is a sequence of (x, N_x) with x a coverage fraction in
    (0, 1] and N_x a positive count.
    """
    pairs = list(class_counts)
    if len(pairs) < 2:
        raise InsufficientClassesError(f"need at least 2 classes, got {len(pairs)}")
    for x, n_x in pairs:
        if not 0 < x <= 1:
            raise ValueError(f"coverage fraction {x!r} outside (0, 1]")
        if n_x <= 0:
            raise ValueError(f"non-positive box count {n_x!r}")
    if len({x for x, _ in pairs}) < 2:
        raise DegenerateSpectrumError("all coverage fractions equal")
    xs = [-math.log10(x) for x, _ in pairs]
    ys = [math.log10(n_x) for _, n_x in pairs]
    return ols(xs, ys).slope


def city_spectrum(
    dataset: CityDataset, c: int = DEFAULT_CLASSES, weight_by_area: bool = True
) -> tuple[list[SpectrumBand], str]:
    """Spectrum bands and SVG for a city: filter, sort, cluster, aggregate.

    Uses the same area-weighted classing as :func:`city_indicator`, but
    happily renders cities with fewer than 3 distinct densities (a
    single-class city gives a single band).
    """
    densities, areas, pops, _ = _sorted_populated(dataset)
    if densities.size == 0:
        raise DegenerateSpectrumError(
            f"city {dataset.city_id!r} has no positive-density blocks"
        )
    n_distinct = int(np.count_nonzero(np.diff(densities) > 0)) + 1
    classing = kmeans_1d_exact(
        densities, min(c, n_distinct), weights=areas if weight_by_area else None
    )
    return fractal_spectrum(_aggregate_sorted(areas, pops, classing))


def fractal_spectrum(
    aggregates, n_bins: int = len(render.SPECTRUM_PALETTE)
) -> tuple[list[SpectrumBand], str]:
    """Spectrum bands (one per class, ordered by density) plus their SVG.

    Color bins are assigned by the rank of each class's area among the
    distinct area values, spread across the fixed palette, so equal areas
    always share a bin.
    """
    aggs = sorted(aggregates, key=lambda g: g.density_rhoj)
    if not aggs:
        raise ValueError("no aggregates to plot")
    if not 1 <= n_bins <= len(render.SPECTRUM_PALETTE):
        raise ValueError(f"n_bins must be in [1, {len(render.SPECTRUM_PALETTE)}]")
    unique_areas = sorted({g.area_aj for g in aggs})
    n_unique = len(unique_areas)
    bands = []
    for g in aggs:
        rank = unique_areas.index(g.area_aj)
        color_bin = rank * n_bins // n_unique
        bands.append(SpectrumBand(g.density_rhoj, g.area_aj, color_bin))
    return bands, render.spectrum_svg(bands)
