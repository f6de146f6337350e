"""What-if development scenarios: apply a block-level delta to a city,
recompute (mean density, D_s), and read both points off a planning plane.

The plane is held fixed during evaluation (the scenario city's own sample is
not re-inserted); evaluation mutates neither the base dataset nor the plane.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DeltaError
from .ingest import Block, CityDataset
from .kriging import PlanningPlane, locate
from .scaling import DEFAULT_CLASSES, city_indicator


@dataclass(frozen=True, slots=True)
class ScenarioDelta:
    """A hypothetical development: blocks added, repopulated, or removed.

    JSON schema (``--delta-file`` and the HTTP API)::

        {
          "added_blocks": [{"block_id": "N1", "area_km2": 1.0, "population": 5000}],
          "modified":     [{"block_id": "B7", "new_population": 1200}],
          "removed":      ["B9"]
        }
    """

    added_blocks: tuple[Block, ...] = ()
    modified: tuple[tuple[str, int], ...] = ()
    removed: tuple[str, ...] = ()

    @classmethod
    def from_dict(cls, payload: dict) -> "ScenarioDelta":
        if not isinstance(payload, dict):
            raise DeltaError("delta must be a JSON object")
        unknown = set(payload) - {"added_blocks", "modified", "removed"}
        if unknown:
            raise DeltaError(f"unknown delta keys: {sorted(unknown)}")
        added = []
        for entry in payload.get("added_blocks", []):
            try:
                block = Block(
                    str(entry["block_id"]),
                    float(entry["area_km2"]),
                    int(entry["population"]),
                )
            except (TypeError, KeyError, ValueError) as exc:
                raise DeltaError(f"bad added block {entry!r}: {exc}") from None
            added.append(block)
        modified = []
        for entry in payload.get("modified", []):
            try:
                modified.append((str(entry["block_id"]), int(entry["new_population"])))
            except (TypeError, KeyError, ValueError) as exc:
                raise DeltaError(f"bad modification {entry!r}: {exc}") from None
        removed = tuple(str(b) for b in payload.get("removed", []))
        return cls(tuple(added), tuple(modified), removed)

    def to_dict(self) -> dict:
        return {
            "added_blocks": [
                {"block_id": b.block_id, "area_km2": b.area, "population": b.population}
                for b in self.added_blocks
            ],
            "modified": [
                {"block_id": bid, "new_population": pop} for bid, pop in self.modified
            ],
            "removed": list(self.removed),
        }


@dataclass(frozen=True, slots=True)
class ScenarioPoint:
    ds: float
    mean_density: float
    plane_estimate: float
    kriging_variance: float
    inside_hull: bool

    def to_dict(self) -> dict:
        return {
            "ds": self.ds,
            "mean_density": self.mean_density,
            "plane_estimate": self.plane_estimate,
            "kriging_variance": self.kriging_variance,
            "inside_hull": self.inside_hull,
        }


@dataclass(frozen=True, slots=True)
class ScenarioOutcome:
    base: ScenarioPoint
    scenario: ScenarioPoint
    delta_ds: float
    delta_mean_density: float
    delta_plane_estimate: float

    def to_dict(self) -> dict:
        return {
            "base": self.base.to_dict(),
            "scenario": self.scenario.to_dict(),
            "delta_ds": self.delta_ds,
            "delta_mean_density": self.delta_mean_density,
            "delta_plane_estimate": self.delta_plane_estimate,
        }


def _check_delta(dataset: CityDataset, delta: ScenarioDelta) -> None:
    base_ids = set(dataset.block_map())
    removed = set(delta.removed)
    modified_ids = [bid for bid, _ in delta.modified]

    for bid in delta.removed:
        if bid not in base_ids:
            raise DeltaError(f"cannot remove unknown block {bid!r}")
    for bid, pop in delta.modified:
        if bid not in base_ids:
            raise DeltaError(f"cannot modify unknown block {bid!r}")
        if pop < 0:
            raise DeltaError(f"negative population {pop} for block {bid!r}")
    if len(set(modified_ids)) != len(modified_ids):
        raise DeltaError("a block is modified more than once")
    if removed & set(modified_ids):
        raise DeltaError("a block cannot be both removed and modified")

    surviving = base_ids - removed
    added_ids = [b.block_id for b in delta.added_blocks]
    if len(set(added_ids)) != len(added_ids):
        raise DeltaError("duplicate block_id among added blocks")
    for b in delta.added_blocks:
        if b.block_id in surviving:
            raise DeltaError(f"added block id {b.block_id!r} collides with the city")
        if b.area <= 0:
            raise DeltaError(f"added block {b.block_id!r} has non-positive area")
        if b.population < 0:
            raise DeltaError(f"added block {b.block_id!r} has negative population")


def apply_delta(dataset: CityDataset, delta: ScenarioDelta) -> CityDataset:
    """Return a new dataset with the delta applied; the base is untouched.

    Removals drop blocks, modifications replace populations in place, added
    blocks are appended. A removed id may be re-added.
    """
    _check_delta(dataset, delta)
    removed = set(delta.removed)
    new_pop = dict(delta.modified)
    blocks: list[Block] = []
    for b in dataset.blocks:
        if b.block_id in removed:
            continue
        if b.block_id in new_pop:
            b = Block(b.block_id, b.area, new_pop[b.block_id])
        blocks.append(b)
    blocks.extend(delta.added_blocks)
    if not blocks:
        raise DeltaError("delta removes every block in the city")
    return CityDataset(
        dataset.city_id,
        tuple(blocks),
        dataset.reported_population,
        dataset.observables,
    )


def evaluate_scenario(
    base: CityDataset,
    delta: ScenarioDelta,
    plane: PlanningPlane,
    c: int = DEFAULT_CLASSES,
) -> ScenarioOutcome:
    """Compute the city's point before and after the delta and locate both
    on the plane. Deltas are scenario minus base."""

    def point(dataset: CityDataset) -> ScenarioPoint:
        ind = city_indicator(dataset, c)
        loc = locate(plane, ind.mean_density, ind.scaling.ds)
        return ScenarioPoint(
            ds=ind.scaling.ds,
            mean_density=ind.mean_density,
            plane_estimate=loc.estimate,
            kriging_variance=loc.kriging_variance,
            inside_hull=loc.inside_hull,
        )

    base_point = point(base)
    scenario_point = point(apply_delta(base, delta))
    return ScenarioOutcome(
        base=base_point,
        scenario=scenario_point,
        delta_ds=scenario_point.ds - base_point.ds,
        delta_mean_density=scenario_point.mean_density - base_point.mean_density,
        delta_plane_estimate=scenario_point.plane_estimate - base_point.plane_estimate,
    )
