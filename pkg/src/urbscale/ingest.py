"""Parse, validate, and normalize per-city block data and city observables.

File formats (UTF-8 CSV, header required, decimal point ``.``, no thousands
separators, empty field = absent):

* blocks:        ``block_id,area_km2,population`` — one file per city,
  named ``<city_id>.csv``
* observables:   ``city_id,reported_population,gas_sales_2007_usd,
  payroll_2007_usd,payroll_2010_usd,co2_road_tpc`` — one shared file

All types are immutable after construction; parsing different cities can
proceed concurrently with no shared state.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field

from .errors import ExtrapolationUndefinedError, ParseError

BLOCK_HEADER = ("block_id", "area_km2", "population")
OBSERVABLES_HEADER = (
    "city_id",
    "reported_population",
    "gas_sales_2007_usd",
    "payroll_2007_usd",
    "payroll_2010_usd",
    "co2_road_tpc",
)

STATUS_INCLUDED = "included"
STATUS_EXCLUDED_POPULATION = "excluded_population_mismatch"
STATUS_EXCLUDED_ENERGY = "excluded_missing_energy"

#: Default relative tolerance for the reported-vs-computed population check.
DEFAULT_POPULATION_TOLERANCE = 0.01


@dataclass(frozen=True, slots=True)
class Block:
    """One census block: opaque id, area in km², resident population."""

    block_id: str
    area: float
    population: int

    @property
    def density(self) -> float:
        """Population density in persons per km²."""
        return self.population / self.area


@dataclass(frozen=True, slots=True)
class CityObservables:
    """City-level observables; ``None`` marks an absent value, never zero."""

    gas_sales_2007: float | None = None
    payroll_2007: float | None = None
    payroll_2010: float | None = None
    co2_road_per_capita: float | None = None

    def energy_fields_present(self) -> bool:
        """True when the fields needed for the 2010 sales extrapolation exist."""
        return (
            self.gas_sales_2007 is not None
            and self.payroll_2007 is not None
            and self.payroll_2010 is not None
        )


@dataclass(frozen=True, eq=False)
class CityDataset:
    """A validated set of blocks for one city plus reported totals.

    ``reported_population`` and ``observables`` are attached when the
    observables roster is joined; until then they may be unset.

    Equality is by city identity and the *set* of blocks (block ids are
    unique), so datasets that differ only in block ordering compare equal.
    Block order is still preserved from the source file.
    """

    city_id: str
    blocks: tuple[Block, ...]
    reported_population: int | None = None
    observables: CityObservables = field(default_factory=CityObservables)

    def __post_init__(self):
        if not self.blocks:
            raise ValueError(f"city {self.city_id!r}: at least 1 block required")
        ids = [b.block_id for b in self.blocks]
        if len(set(ids)) != len(ids):
            raise ValueError(f"city {self.city_id!r}: duplicate block_id")

    def __eq__(self, other):
        if not isinstance(other, CityDataset):
            return NotImplemented
        return (
            self.city_id == other.city_id
            and self.reported_population == other.reported_population
            and self.observables == other.observables
            and self.block_map() == other.block_map()
        )

    def __hash__(self):
        return hash((self.city_id, frozenset(b.block_id for b in self.blocks)))

    def block_map(self) -> dict[str, Block]:
        return {b.block_id: b for b in self.blocks}

    def computed_population(self) -> int:
        """Geographically calculated population: sum over all blocks."""
        return sum(b.population for b in self.blocks)

    def with_observables(
        self, reported_population: int, observables: CityObservables
    ) -> "CityDataset":
        return CityDataset(self.city_id, self.blocks, reported_population, observables)


@dataclass(frozen=True, slots=True)
class ValidationReport:
    city_id: str
    computed_population: int
    reported_population: int
    relative_error: float
    status: str


@dataclass(frozen=True, slots=True)
class ObservablesRow:
    reported_population: int
    observables: CityObservables


def _parse_float(raw: str, name: str, line: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"{name} {raw!r} is not a number", row=line) from None
    if not math.isfinite(value):
        raise ParseError(f"{name} {raw!r} is not finite", row=line)
    return value


def _parse_int(raw: str, name: str, line: int) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{name} {raw!r} is not an integer", row=line) from None


def parse_city(file_contents: str, city_id: str) -> CityDataset:
    """Parse one city's block CSV into a :class:`CityDataset`.

    Order-preserving: one :class:`Block` per data row, in file order.
    Raises :class:`ParseError` (with the offending CSV line number) on a
    malformed row, duplicate block id, non-positive area, or negative
    population.
    """
    reader = csv.reader(io.StringIO(file_contents))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError(f"city {city_id!r}: empty file, header required") from None
    if tuple(h.strip() for h in header) != BLOCK_HEADER:
        raise ParseError(
            f"city {city_id!r}: expected header {','.join(BLOCK_HEADER)!r}, "
            f"got {','.join(header)!r}",
            row=1,
        )

    blocks = []
    seen: set[str] = set()
    for line, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", row=line)
        block_id = row[0].strip()
        if not block_id:
            raise ParseError("empty block_id", row=line)
        if block_id in seen:
            raise ParseError(f"duplicate block_id {block_id!r}", row=line)
        seen.add(block_id)
        area = _parse_float(row[1].strip(), "area_km2", line)
        if area <= 0:
            raise ParseError(f"non-positive area {area!r}", row=line)
        population = _parse_int(row[2].strip(), "population", line)
        if population < 0:
            raise ParseError(f"negative population {population!r}", row=line)
        blocks.append(Block(block_id, area, population))

    if not blocks:
        raise ParseError(f"city {city_id!r}: no data rows")
    return CityDataset(city_id, tuple(blocks))


def serialize_city(dataset: CityDataset) -> str:
    """Inverse of :func:`parse_city`; floats use shortest round-trip decimals."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BLOCK_HEADER)
    for b in dataset.blocks:
        writer.writerow([b.block_id, repr(b.area), b.population])
    return buf.getvalue()


def parse_observables(file_contents: str) -> dict[str, ObservablesRow]:
    """Parse the shared observables CSV into per-city rows.

    Empty fields become ``None`` (absent, never zero-filled).
    """
    reader = csv.reader(io.StringIO(file_contents))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("observables: empty file, header required") from None
    if tuple(h.strip() for h in header) != OBSERVABLES_HEADER:
        raise ParseError(
            f"observables: expected header {','.join(OBSERVABLES_HEADER)!r}, "
            f"got {','.join(header)!r}",
            row=1,
        )

    rows: dict[str, ObservablesRow] = {}
    for line, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 6:
            raise ParseError(f"expected 6 fields, got {len(row)}", row=line)
        city_id = row[0].strip()
        if not city_id:
            raise ParseError("empty city_id", row=line)
        if city_id in rows:
            raise ParseError(f"duplicate city_id {city_id!r}", row=line)
        reported = _parse_int(row[1].strip(), "reported_population", line)
        if reported <= 0:
            raise ParseError(f"non-positive reported_population {reported}", row=line)

        def optional(raw: str, name: str) -> float | None:
            raw = raw.strip()
            if raw == "":
                return None
            value = _parse_float(raw, name, line)
            if value < 0:
                raise ParseError(f"negative {name} {value!r}", row=line)
            return value

        obs = CityObservables(
            gas_sales_2007=optional(row[2], "gas_sales_2007_usd"),
            payroll_2007=optional(row[3], "payroll_2007_usd"),
            payroll_2010=optional(row[4], "payroll_2010_usd"),
            co2_road_per_capita=optional(row[5], "co2_road_tpc"),
        )
        rows[city_id] = ObservablesRow(reported, obs)
    return rows


def validate_city(
    dataset: CityDataset, tolerance: float = DEFAULT_POPULATION_TOLERANCE
) -> ValidationReport:
    """Check the dataset against its reported totals. Never raises for data
    problems; the outcome is carried in ``status``.

    Population mismatch takes precedence over missing energy observables when
    both apply.
    """
    if dataset.reported_population is None or dataset.reported_population <= 0:
        raise ValueError(f"city {dataset.city_id!r}: reported_population not set")
    computed = dataset.computed_population()
    reported = dataset.reported_population
    relative_error = abs(computed - reported) / reported
    if relative_error > tolerance:
        status = STATUS_EXCLUDED_POPULATION
    elif not dataset.observables.energy_fields_present():
        status = STATUS_EXCLUDED_ENERGY
    else:
        status = STATUS_INCLUDED
    return ValidationReport(dataset.city_id, computed, reported, relative_error, status)


def extrapolate_sales(obs: CityObservables) -> float:
    """2010 gasoline sales estimate: 2007 sales scaled by the payroll ratio."""
    if (
        obs.gas_sales_2007 is None
        or obs.payroll_2007 is None
        or obs.payroll_2010 is None
    ):
        raise ExtrapolationUndefinedError(
            "gas_sales_2007, payroll_2007 and payroll_2010 are all required"
        )
    if obs.payroll_2007 == 0:
        raise ExtrapolationUndefinedError("payroll_2007 is zero")
    return obs.gas_sales_2007 * (obs.payroll_2010 / obs.payroll_2007)


def load_cities(blocks_dir: str, observables_path: str) -> dict[str, CityDataset]:
    """Join per-city block files with the observables roster.

    Every ``<city_id>.csv`` in ``blocks_dir`` must have a roster row; extra
    roster rows (cities without a blocks file) are ignored. Returned dict is
    keyed by city_id in sorted order.
    """
    with open(observables_path, encoding="utf-8") as fh:
        roster = parse_observables(fh.read())

    names = sorted(n for n in os.listdir(blocks_dir) if n.endswith(".csv"))
    if not names:
        raise FileNotFoundError(f"no city files (*.csv) in {blocks_dir!r}")
    cities: dict[str, CityDataset] = {}
    for name in names:
        city_id = name[: -len(".csv")]
        with open(os.path.join(blocks_dir, name), encoding="utf-8") as fh:
            dataset = parse_city(fh.read(), city_id)
        if city_id not in roster:
            raise ParseError(f"city {city_id!r} has no row in the observables file")
        row = roster[city_id]
        cities[city_id] = dataset.with_observables(row.reported_population, row.observables)
    return cities
