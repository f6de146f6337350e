"""Least-squares and correlation utilities for the cross-city analysis.

Pure functions, thread-safe. ``r_squared`` follows the convention that a
zero-variance response reports 0 with ``degenerate=True`` instead of NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, ZeroVarianceError

TRANSFORMS = ("linear", "log_x", "log_y", "log_log")

ROW_FIELDS = ("ds", "mean_density", "gas_per_area", "co2_per_capita")


@dataclass(frozen=True, slots=True)
class RegressionFit:
    slope: float
    intercept: float
    r_squared: float
    n: int
    residuals: tuple[float, ...]
    degenerate: bool = False


@dataclass(frozen=True, slots=True)
class CorrelationResult:
    pearson_r: float
    n: int
    x_label: str
    y_label: str
    transform: str
    n_skipped: int = 0


@dataclass(frozen=True, slots=True)
class CityMetrics:
    """Per-city row for the Fig.-4-style analysis; ``None`` = absent."""

    city_id: str
    ds: float | None = None
    mean_density: float | None = None
    gas_per_area: float | None = None
    co2_per_capita: float | None = None

    def get(self, field: str) -> float | None:
        if field not in ROW_FIELDS:
            raise ValueError(f"unknown field {field!r}; expected one of {ROW_FIELDS}")
        return getattr(self, field)


def ols(xs, ys) -> RegressionFit:
    """Closed-form ordinary least squares of ys on xs.

    Requires n >= 2 and non-constant xs (raises
    :class:`ZeroVarianceError` otherwise).
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1D and the same length")
    n = x.size
    if n < 2:
        raise InsufficientDataError(f"need at least 2 points, got {n}")
    xm = x.mean()
    ym = y.mean()
    sxx = float(((x - xm) ** 2).sum())
    if sxx == 0.0:
        raise ZeroVarianceError("xs are all equal; slope undefined")
    sxy = float(((x - xm) * (y - ym)).sum())
    slope = sxy / sxx
    intercept = float(ym - slope * xm)
    residuals = y - (slope * x + intercept)
    ss_res = float((residuals**2).sum())
    ss_tot = float(((y - ym) ** 2).sum())
    if ss_tot > 0.0:
        r_squared = 1.0 - ss_res / ss_tot
        r_squared = min(max(r_squared, 0.0), 1.0)
        degenerate = False
    else:
        r_squared = 0.0
        degenerate = True
    return RegressionFit(
        slope=slope,
        intercept=intercept,
        r_squared=r_squared,
        n=n,
        residuals=tuple(float(r) for r in residuals),
        degenerate=degenerate,
    )


def pearson(xs, ys) -> float:
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    sx = x - x.mean()
    sy = y - y.mean()
    sxx = float((sx**2).sum())
    syy = float((sy**2).sum())
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVarianceError("pearson r undefined for a zero-variance variable")
    r = float((sx * sy).sum()) / math.sqrt(sxx * syy)
    return min(max(r, -1.0), 1.0)


def correlate_cities(
    rows, pair: tuple[str, str], transform: str = "linear"
) -> CorrelationResult:
    """Pearson correlation of two per-city fields under an optional log10
    transform.

    Rows with an absent field are skipped; so are rows with a non-positive
    value on a log-transformed axis. Fewer than 3 usable rows raises
    :class:`InsufficientDataError`.
    """
    if transform not in TRANSFORMS:
        raise ValueError(f"unknown transform {transform!r}; expected one of {TRANSFORMS}")
    x_field, y_field = pair
    log_x = transform in ("log_x", "log_log")
    log_y = transform in ("log_y", "log_log")

    xs: list[float] = []
    ys: list[float] = []
    n_skipped = 0
    for row in rows:
        x = row.get(x_field)
        y = row.get(y_field)
        if x is None or y is None:
            n_skipped += 1
            continue
        if (log_x and x <= 0) or (log_y and y <= 0):
            n_skipped += 1
            continue
        xs.append(math.log10(x) if log_x else x)
        ys.append(math.log10(y) if log_y else y)

    if len(xs) < 3:
        raise InsufficientDataError(
            f"need at least 3 usable rows for {x_field} vs {y_field}, got {len(xs)}"
        )
    r = pearson(xs, ys)
    return CorrelationResult(
        pearson_r=r,
        n=len(xs),
        x_label=x_field,
        y_label=y_field,
        transform=transform,
        n_skipped=n_skipped,
    )
