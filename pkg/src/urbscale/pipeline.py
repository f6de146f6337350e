"""Cross-city orchestration shared by the CLI and the HTTP service.

Turns loaded datasets into validation reports, per-city indicators, the
Fig.-4-style metric rows, and the sample points for planning planes. Cities
are processed in parallel (each computation is pure); results are keyed and
emitted in sorted city order so outputs are deterministic.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import UrbscaleError
from .ingest import (
    DEFAULT_POPULATION_TOLERANCE,
    STATUS_INCLUDED,
    CityDataset,
    ValidationReport,
    extrapolate_sales,
    validate_city,
)
from .kriging import SamplePoint
from .scaling import DEFAULT_CLASSES, CityIndicator, city_indicator
from .stats import CityMetrics

logger = logging.getLogger(__name__)

DEPENDENT_VARIABLES = ("gas_per_area", "co2_per_capita")


@dataclass(frozen=True, slots=True)
class CityRecord:
    """Everything the downstream analysis needs to know about one city."""

    dataset: CityDataset
    report: ValidationReport
    indicator: CityIndicator | None
    error: str | None = None

    @property
    def city_id(self) -> str:
        return self.dataset.city_id

    @property
    def usable(self) -> bool:
        return self.report.status == STATUS_INCLUDED and self.indicator is not None


def analyze_city(
    dataset: CityDataset,
    c: int = DEFAULT_CLASSES,
    tolerance: float = DEFAULT_POPULATION_TOLERANCE,
) -> CityRecord:
    report = validate_city(dataset, tolerance)
    try:
        indicator = city_indicator(dataset, c)
        return CityRecord(dataset, report, indicator)
    except UrbscaleError as exc:
        logger.warning("city %s: %s", dataset.city_id, exc.message)
        return CityRecord(dataset, report, None, error=f"{exc.code}: {exc.message}")


def analyze_cities(
    cities: dict[str, CityDataset],
    c: int = DEFAULT_CLASSES,
    tolerance: float = DEFAULT_POPULATION_TOLERANCE,
    jobs: int | None = None,
) -> dict[str, CityRecord]:
    """Validate and compute indicators for every city, in parallel."""
    ids = sorted(cities)
    if jobs == 1 or len(ids) == 1:
        records = [analyze_city(cities[i], c, tolerance) for i in ids]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(lambda i: analyze_city(cities[i], c, tolerance), ids))
    return {r.city_id: r for r in records}


def gas_per_area(record: CityRecord, basis: str = "populated") -> float | None:
    """Extrapolated 2010 gasoline sales per km².

    ``basis`` selects the denominator: area of populated blocks (default,
    consistent with the density filter) or of all blocks.
    """
    if basis not in ("populated", "all"):
        raise ValueError(f"unknown area basis {basis!r}")
    obs = record.dataset.observables
    if record.indicator is None or not obs.energy_fields_present():
        return None
    sales_2010 = extrapolate_sales(obs)
    area = (
        record.indicator.populated_area
        if basis == "populated"
        else record.indicator.total_area
    )
    return sales_2010 / area


def metrics_rows(
    records: dict[str, CityRecord], gas_area_basis: str = "populated"
) -> list[CityMetrics]:
    """One row per included city with a computed indicator, sorted by id."""
    rows = []
    for city_id in sorted(records):
        record = records[city_id]
        if not record.usable:
            continue
        rows.append(
            CityMetrics(
                city_id=city_id,
                ds=record.indicator.scaling.ds,
                mean_density=record.indicator.mean_density,
                gas_per_area=gas_per_area(record, gas_area_basis),
                co2_per_capita=record.dataset.observables.co2_road_per_capita,
            )
        )
    return rows


def plane_samples(rows: list[CityMetrics], dependent: str) -> list[SamplePoint]:
    """(mean density, ds) -> dependent samples for cities where it exists."""
    if dependent not in DEPENDENT_VARIABLES:
        raise ValueError(
            f"unknown dependent {dependent!r}; expected one of {DEPENDENT_VARIABLES}"
        )
    samples = []
    for row in rows:
        z = row.get(dependent)
        if z is None or row.ds is None or row.mean_density is None:
            continue
        samples.append(SamplePoint(row.mean_density, row.ds, z))
    return samples
