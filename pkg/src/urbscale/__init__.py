"""urbscale: census-based urban scaling indicator and planning-plane toolkit.

Compute a replicable scaling indicator per city from block-level population
data, relate it across cities to energy use and emissions, build kriged
planning planes, and evaluate what-if development scenarios against them.
"""

__version__ = "0.1.0"

from .cluster1d import Classing, kmeans_1d_exact, kmeans_1d_lloyd
from .ingest import (
    Block,
    CityDataset,
    CityObservables,
    ValidationReport,
    extrapolate_sales,
    load_cities,
    parse_city,
    parse_observables,
    serialize_city,
    validate_city,
)
from .kriging import (
    PlanningPlane,
    SamplePoint,
    VariogramModel,
    build_plane,
    empirical_variogram,
    fit_variogram,
    krige,
    kriging_weights,
    locate,
)
from .scaling import (
    ClassAggregate,
    CityIndicator,
    ScalingResult,
    SpectrumBand,
    aggregate_classes,
    box_counting_dimension,
    city_indicator,
    fractal_spectrum,
    scaling_indicator,
)
from .scenario import ScenarioDelta, ScenarioOutcome, apply_delta, evaluate_scenario
from .stats import (
    CityMetrics,
    CorrelationResult,
    RegressionFit,
    correlate_cities,
    ols,
    pearson,
)

__all__ = [
    "__version__",
    "Block",
    "CityDataset",
    "CityObservables",
    "ValidationReport",
    "parse_city",
    "serialize_city",
    "parse_observables",
    "validate_city",
    "extrapolate_sales",
    "load_cities",
    "Classing",
    "kmeans_1d_exact",
    "kmeans_1d_lloyd",
    "ClassAggregate",
    "ScalingResult",
    "SpectrumBand",
    "CityIndicator",
    "aggregate_classes",
    "scaling_indicator",
    "city_indicator",
    "box_counting_dimension",
    "fractal_spectrum",
    "RegressionFit",
    "CorrelationResult",
    "CityMetrics",
    "ols",
    "pearson",
    "correlate_cities",
    "SamplePoint",
    "VariogramModel",
    "PlanningPlane",
    "empirical_variogram",
    "fit_variogram",
    "krige",
    "kriging_weights",
    "build_plane",
    "locate",
    "ScenarioDelta",
    "ScenarioOutcome",
    "apply_delta",
    "evaluate_scenario",
]
