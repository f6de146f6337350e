/**
 * Wire types mirroring the service's /api JSON responses.
 * The UI never derives these numbers itself; it displays what arrives.
 */

export interface CityEntry {
  city_id: string;
  ds: number | null;
  mean_density: number | null;
  status: string;
  error: string | null;
}

export interface CitiesResponse {
  cities: CityEntry[];
}

export interface VariogramInfo {
  kind: string;
  nugget: number;
  sill: number;
  range_param: number;
  fallback: boolean;
}

export interface CvStats {
  rmse: number;
  bias: number;
  n: number;
}

export interface PlaneCity {
  city_id: string;
  x_std: number;
  y_std: number;
  mean_density: number;
  ds: number;
  z: number;
}

export interface PlaneResponse {
  dependent: string;
  nx: number;
  ny: number;
  x_axis: number[];
  y_axis: number[];
  x_mean: number;
  x_std: number;
  y_mean: number;
  y_std: number;
  grid: number[][];
  variance_grid: number[][];
  variogram: VariogramInfo;
  cv_stats: CvStats;
  cities: PlaneCity[];
}

export interface ScenarioPoint {
  ds: number;
  mean_density: number;
  plane_estimate: number;
  kriging_variance: number;
  inside_hull: boolean;
}

export interface ScenarioOutcome {
  city_id: string;
  base: ScenarioPoint;
  scenario: ScenarioPoint;
  delta_ds: number;
  delta_mean_density: number;
  delta_plane_estimate: number;
}

/** Exactly the service's ScenarioDelta schema. */
export interface ScenarioDelta {
  added_blocks: AddedBlock[];
  modified: Modification[];
  removed: string[];
}

export interface AddedBlock {
  block_id: string;
  area_km2: number;
  population: number;
}

export interface Modification {
  block_id: string;
  new_population: number;
}

export interface ApiError {
  code: string;
  message: string;
}
