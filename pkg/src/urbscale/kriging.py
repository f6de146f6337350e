"""Ordinary kriging of a dependent variable over (mean density, D_s).

Axes are z-scored before any distance is computed: density spans orders of
magnitude more than the indicator, and raw Euclidean distance would collapse
the indicator axis. Sample coordinates with exactly equal standardized
positions are averaged up front so the kriging matrix stays non-singular.

The kriging system is the classic semivariance form with the unbiasedness
row (weights sum to exactly 1); the matrix diagonal is 0 (the true variogram
at zero separation), while the fitted model reports gamma(0) = nugget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import least_squares
from scipy.spatial import Delaunay, QhullError
from scipy.spatial.distance import cdist

from .errors import InsufficientDataError, NonFiniteQueryError, SingularSystemError

VARIOGRAM_KINDS = ("exponential", "spherical", "gaussian")

DEFAULT_GRID = 100
GRID_MARGIN = 0.05
DEFAULT_LAG_BINS = 12
MIN_PLANE_SAMPLES = 10


@dataclass(frozen=True, slots=True)
class SamplePoint:
    """(mean density, scaling indicator) -> dependent value."""

    x: float
    y: float
    z: float


@dataclass(frozen=True, slots=True)
class VariogramModel:
    kind: str
    nugget: float
    sill: float
    range_param: float
    fallback: bool = False

    def __post_init__(self):
        if self.kind not in VARIOGRAM_KINDS:
            raise ValueError(f"unknown variogram kind {self.kind!r}")
        if self.nugget < 0 or self.sill <= 0 or self.range_param <= 0:
            raise ValueError("need nugget >= 0, sill > 0, range_param > 0")
        if self.nugget > self.sill:
            raise ValueError("nugget cannot exceed the sill")

    def semivariance(self, h):
        """gamma(h); gamma(0) = nugget, monotone non-decreasing."""
        h = np.asarray(h, dtype=np.float64)
        psill = self.sill - self.nugget
        r = h / self.range_param
        if self.kind == "exponential":
            shape = 1.0 - np.exp(-3.0 * r)
        elif self.kind == "gaussian":
            shape = 1.0 - np.exp(-3.0 * r * r)
        else:  # spherical
            shape = np.where(r < 1.0, 1.5 * r - 0.5 * r**3, 1.0)
        return self.nugget + psill * shape

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "nugget": self.nugget,
            "sill": self.sill,
            "range_param": self.range_param,
            "fallback": self.fallback,
        }


class VariogramBin(NamedTuple):
    lag: float
    semivariance: float
    pair_count: int


@dataclass(frozen=True, slots=True)
class CvStats:
    """Leave-one-out cross-validation diagnostics."""

    rmse: float
    bias: float
    n: int

    def to_dict(self) -> dict:
        return {"rmse": self.rmse, "bias": self.bias, "n": self.n}


@dataclass(frozen=True, slots=True)
class LocateResult:
    estimate: float
    kriging_variance: float
    inside_hull: bool


@dataclass(frozen=True, eq=False)
class PlanningPlane:
    """Kriged surface over standardized (mean density, D_s) axes.

    ``grid[iy, ix]`` is the estimate at ``(x_axis[ix], y_axis[iy])`` in
    standardized coordinates; ``*_mean``/``*_std`` map back to data units.
    """

    grid: np.ndarray
    variance_grid: np.ndarray
    x_axis: np.ndarray
    y_axis: np.ndarray
    x_mean: float
    x_std: float
    y_mean: float
    y_std: float
    variogram: VariogramModel
    cv_stats: CvStats
    sample_coords: np.ndarray  # standardized, deduplicated, (n, 2)
    sample_z: np.ndarray
    dependent: str = ""

    @property
    def nx(self) -> int:
        return self.x_axis.size

    @property
    def ny(self) -> int:
        return self.y_axis.size

    def to_original_x(self, xs):
        return np.asarray(xs) * self.x_std + self.x_mean

    def to_original_y(self, ys):
        return np.asarray(ys) * self.y_std + self.y_mean

    def to_dict(self) -> dict:
        return {
            "dependent": self.dependent,
            "nx": self.nx,
            "ny": self.ny,
            "x_axis": self.x_axis.tolist(),
            "y_axis": self.y_axis.tolist(),
            "x_mean": self.x_mean,
            "x_std": self.x_std,
            "y_mean": self.y_mean,
            "y_std": self.y_std,
            "grid": [row.tolist() for row in self.grid],
            "variance_grid": [row.tolist() for row in self.variance_grid],
            "variogram": self.variogram.to_dict(),
            "cv_stats": self.cv_stats.to_dict(),
            "samples": [
                {"x": float(c[0]), "y": float(c[1]), "z": float(z)}
                for c, z in zip(self.sample_coords, self.sample_z)
            ],
        }


def _as_arrays(samples) -> tuple[np.ndarray, np.ndarray]:
    coords = np.array([(s.x, s.y) for s in samples], dtype=np.float64)
    z = np.array([s.z for s in samples], dtype=np.float64)
    if coords.size and not (np.all(np.isfinite(coords)) and np.all(np.isfinite(z))):
        raise ValueError("sample coordinates and values must be finite")
    return coords, z


def dedupe_samples(coords: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Average z over exactly coincident coordinates, keeping first-seen order."""
    groups: dict[tuple[float, float], list[float]] = {}
    for (x, y), value in zip(coords, z):
        groups.setdefault((float(x), float(y)), []).append(float(value))
    out_coords = np.array(list(groups.keys()), dtype=np.float64).reshape(-1, 2)
    out_z = np.array([float(np.mean(vs)) for vs in groups.values()], dtype=np.float64)
    return out_coords, out_z


def empirical_variogram(samples, n_bins: int = DEFAULT_LAG_BINS, min_samples: int = MIN_PLANE_SAMPLES):
    """Matheron estimator per equal-width lag bin; empty bins omitted.

    Distances are taken on the coordinates as given (the caller standardizes).
    Returns a list of :class:`VariogramBin`. ``min_samples`` guards against
    meaningless estimates; relax it explicitly for small didactic inputs.
    """
    coords, z = _as_arrays(samples)
    n = len(z)
    if n < min_samples:
        raise InsufficientDataError(f"need at least {min_samples} samples, got {n}")
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    iu = np.triu_indices(n, k=1)
    d = cdist(coords, coords)[iu]
    g = 0.5 * (z[:, None] - z[None, :]) ** 2
    g = g[iu]
    dmax = float(d.max())
    if dmax == 0.0:
        return [VariogramBin(0.0, float(g.mean()), int(g.size))]
    width = dmax / n_bins
    idx = np.maximum(np.ceil(d / width).astype(np.int64) - 1, 0)
    bins = []
    for b in range(n_bins):
        mask = idx == b
        count = int(mask.sum())
        if count == 0:
            continue
        bins.append(VariogramBin(float(d[mask].mean()), float(g[mask].mean()), count))
    return bins


def _fallback_model(kind: str, bins, sample_variance: float | None) -> VariogramModel:
    max_lag = max((b.lag for b in bins), default=1.0)
    sill = sample_variance if sample_variance is not None and sample_variance > 0 else 1.0
    range_param = max_lag / 2.0 if max_lag > 0 else 1.0
    return VariogramModel(kind, 0.0, sill, range_param, fallback=True)


def fit_variogram(empirical, kind: str = "exponential", sample_variance: float | None = None) -> VariogramModel:
    """Weighted least squares over (nugget, partial sill, range); weights are
    pair counts. Deterministic: coarse grid search, then a bounded
    trust-region refinement from the best grid point.

    Degenerate inputs (fewer than 3 bins, or a flat field) fall back to
    nugget 0, sill = sample variance, range = half the max lag, with the
    model's ``fallback`` flag set.
    """
    if kind not in VARIOGRAM_KINDS:
        raise ValueError(f"unknown variogram kind {kind!r}")
    bins = list(empirical)
    if len(bins) < 3:
        return _fallback_model(kind, bins, sample_variance)
    lags = np.array([b.lag for b in bins])
    gammas = np.array([b.semivariance for b in bins])
    weights = np.sqrt(np.array([b.pair_count for b in bins], dtype=np.float64))
    gmax = float(gammas.max())
    lmax = float(lags.max())
    if gmax <= 0.0 or lmax <= 0.0:
        return _fallback_model(kind, bins, sample_variance)

    def residuals(theta):
        nugget, psill, range_param = theta
        model = VariogramModel(kind, nugget, nugget + psill + 1e-30, max(range_param, 1e-30))
        return weights * (model.semivariance(lags) - gammas)

    best = None
    for nugget_f in (0.0, 0.1, 0.25, 0.5):
        for psill_f in (0.25, 0.5, 0.75, 1.0, 1.25):
            for range_f in (0.1, 0.25, 0.5, 0.75, 1.0, 1.5):
                theta = (nugget_f * gmax, psill_f * gmax, range_f * lmax)
                score = float((residuals(theta) ** 2).sum())
                if best is None or score < best[0]:
                    best = (score, theta)

    fit = least_squares(
        residuals,
        x0=np.array(best[1]),
        bounds=([0.0, 0.0, 1e-12], [np.inf, np.inf, np.inf]),
        method="trf",
        xtol=1e-14,
        ftol=1e-14,
        gtol=1e-14,
        max_nfev=2000,
    )
    nugget, psill, range_param = fit.x
    sill = nugget + psill
    if sill <= 0.0:
        return _fallback_model(kind, bins, sample_variance)
    return VariogramModel(kind, float(nugget), float(sill), float(max(range_param, 1e-12)))


def _kriging_matrix(coords: np.ndarray, model: VariogramModel) -> np.ndarray:
    n = len(coords)
    a = np.zeros((n + 1, n + 1))
    a[:n, :n] = model.semivariance(cdist(coords, coords))
    a[np.arange(n), np.arange(n)] = 0.0
    a[n, :n] = 1.0
    a[:n, n] = 1.0
    return a


def _solve_queries(coords, z, model, query_coords):
    """Solve the OK system for many queries at once.

    Returns (estimates, variances, weights); weights has shape (n, m).

    A query exactly coincident with a sample is answered analytically when
    nugget = 0 (weights = that sample's unit vector, variance 0): that is the
    exact solution of the system, and it sidesteps the ill-conditioning of
    smooth models (gaussian especially) instead of leaking solver error into
    a value known in closed form.
    """
    n = len(coords)
    m = len(query_coords)
    a = _kriging_matrix(coords, model)
    d = cdist(coords, query_coords)
    b = np.ones((n + 1, m))
    b[:n, :] = model.semivariance(d).reshape(n, m)
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(
            "kriging matrix is singular even after averaging duplicate locations"
        ) from exc
    weights = x[:n, :]
    # deviation form: with weights summing to 1, this equals w.z in exact
    # arithmetic, but reproduces a constant field bitwise even when the
    # solved weight sum carries rounding error
    z_mean = z.mean()
    estimates = z_mean + (z - z_mean) @ weights
    variances = np.einsum("ij,ij->j", x, b)
    if model.nugget == 0.0:
        hit_i, hit_j = np.nonzero(d == 0.0)
        if hit_i.size:
            weights[:, hit_j] = 0.0
            weights[hit_i, hit_j] = 1.0
            estimates[hit_j] = z[hit_i]
            variances[hit_j] = 0.0
    floor = -1e-12 * max(1.0, model.sill)
    bad = variances < floor
    if np.any(bad):
        raise SingularSystemError(
            f"kriging variance {variances[bad].min():.3e} below the numerical floor"
        )
    variances = np.where(variances < 0.0, 0.0, variances)
    return estimates, variances, weights


def krige(samples, model: VariogramModel, query: tuple[float, float]) -> tuple[float, float]:
    """Ordinary-kriging estimate and variance at one query point.

    Duplicate sample locations are averaged before the solve. Weights sum to
    exactly 1 by the unbiasedness constraint.
    """
    coords, z = _as_arrays(samples)
    if len(z) < 3:
        raise InsufficientDataError(f"need at least 3 samples, got {len(z)}")
    coords, z = dedupe_samples(coords, z)
    qx, qy = query
    if not (math.isfinite(qx) and math.isfinite(qy)):
        raise NonFiniteQueryError(f"query {query!r} is not finite")
    est, var, _ = _solve_queries(coords, z, model, np.array([[qx, qy]]))
    return float(est[0]), float(var[0])


def kriging_weights(samples, model: VariogramModel, query: tuple[float, float]) -> np.ndarray:
    """The solved kriging weights for one query (diagnostic surface)."""
    coords, z = _as_arrays(samples)
    coords, z = dedupe_samples(coords, z)
    _, _, w = _solve_queries(coords, z, model, np.array([list(query)], dtype=np.float64))
    return w[:, 0]


def _standardize(values: np.ndarray) -> tuple[np.ndarray, float, float]:
    mean = float(values.mean())
    std = float(values.std())
    if std == 0.0:
        std = 1.0
    return (values - mean) / std, mean, std


def _margin_axis(lo: float, hi: float, n: int) -> np.ndarray:
    span = hi - lo
    if span == 0.0:
        lo, hi = lo - 0.5, hi + 0.5
    else:
        lo -= GRID_MARGIN * span
        hi += GRID_MARGIN * span
    return np.linspace(lo, hi, n)


def build_plane(
    samples,
    nx: int = DEFAULT_GRID,
    ny: int = DEFAULT_GRID,
    kind: str = "exponential",
    n_bins: int = DEFAULT_LAG_BINS,
    dependent: str = "",
) -> PlanningPlane:
    """Standardize axes, fit the variogram, krige an (ny, nx) grid over the
    5%-expanded sample bounding box, and run leave-one-out cross-validation.
    """
    raw_coords, z = _as_arrays(samples)
    if len(z) < MIN_PLANE_SAMPLES:
        raise InsufficientDataError(
            f"need at least {MIN_PLANE_SAMPLES} samples, got {len(z)}"
        )
    if nx < 2 or ny < 2:
        raise ValueError("grid must be at least 2x2")
    xs, x_mean, x_std = _standardize(raw_coords[:, 0])
    ys, y_mean, y_std = _standardize(raw_coords[:, 1])
    coords = np.column_stack([xs, ys])
    coords, z = dedupe_samples(coords, z)

    std_samples = [SamplePoint(c[0], c[1], v) for c, v in zip(coords, z)]
    bins = empirical_variogram(std_samples, n_bins=n_bins, min_samples=3)
    model = fit_variogram(bins, kind, sample_variance=float(np.var(z, ddof=1)))

    x_axis = _margin_axis(float(coords[:, 0].min()), float(coords[:, 0].max()), nx)
    y_axis = _margin_axis(float(coords[:, 1].min()), float(coords[:, 1].max()), ny)
    gx, gy = np.meshgrid(x_axis, y_axis)
    nodes = np.column_stack([gx.ravel(), gy.ravel()])
    estimates, variances, _ = _solve_queries(coords, z, model, nodes)
    grid = estimates.reshape(ny, nx)
    variance_grid = variances.reshape(ny, nx)
    if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(variance_grid))):
        raise SingularSystemError("kriged grid contains non-finite values")

    residuals = np.empty(len(z))
    index = np.arange(len(z))
    for i in range(len(z)):
        keep = index != i
        est_i, _, _ = _solve_queries(coords[keep], z[keep], model, coords[i : i + 1])
        residuals[i] = est_i[0] - z[i]
    cv = CvStats(
        rmse=float(np.sqrt(np.mean(residuals**2))),
        bias=float(np.mean(residuals)),
        n=len(z),
    )
    return PlanningPlane(
        grid=grid,
        variance_grid=variance_grid,
        x_axis=x_axis,
        y_axis=y_axis,
        x_mean=x_mean,
        x_std=x_std,
        y_mean=y_mean,
        y_std=y_std,
        variogram=model,
        cv_stats=cv,
        sample_coords=coords,
        sample_z=z,
        dependent=dependent,
    )


def _inside_hull(coords: np.ndarray, point: np.ndarray) -> bool:
    try:
        tri = Delaunay(coords)
    except QhullError:
        # Degenerate scatter (e.g. collinear): fall back to the bounding box.
        lo = coords.min(axis=0)
        hi = coords.max(axis=0)
        return bool(np.all(point >= lo) and np.all(point <= hi))
    return bool(tri.find_simplex(point) >= 0)


def locate(plane: PlanningPlane, x: float, y: float) -> LocateResult:
    """Krige the plane's field at one (mean density, D_s) query in data units;
    flags extrapolation outside the sample convex hull."""
    if not (math.isfinite(x) and math.isfinite(y)):
        raise NonFiniteQueryError(f"query ({x!r}, {y!r}) is not finite")
    q = np.array([(x - plane.x_mean) / plane.x_std, (y - plane.y_mean) / plane.y_std])
    est, var, _ = _solve_queries(
        plane.sample_coords, plane.sample_z, plane.variogram, q.reshape(1, 2)
    )
    return LocateResult(
        estimate=float(est[0]),
        kriging_variance=float(var[0]),
        inside_hull=_inside_hull(plane.sample_coords, q),
    )
