"""Deterministic 1D k-means over a sorted value spectrum.

Two solvers over the same within-cluster sum-of-squares objective:

* :func:`kmeans_1d_exact` — the default. Dynamic programming over contiguous
  partitions of the sorted values with divide-and-conquer argmin search,
  O(k n log n). Returns the global optimum; ties are broken toward the
  lexicographically smallest boundary-index vector, so results are fully
  replicable.
* :func:`kmeans_1d_lloyd` — Lloyd fixed-point iteration from deterministic
  quantile seeds, kept as a compatibility mode. Seed rank formula:
  centroid i sits at the value of 1-based rank ``ceil((i + 0.5) * n / k)``.

Optimal contiguous partitions are exactly the optimal k-means partitions in
1D, so "contiguous" is not a restriction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import InfeasibleClusteringError, NonConvergenceError

LLOYD_MAX_ITER = 1000


@dataclass(frozen=True, eq=False)
class Classing:
    """A partition of sorted values into c contiguous density classes.

    boundaries has c+1 entries: the minimum value, the c-1 midpoints between
    adjacent class edges, and the maximum value. Strictly increasing except
    in the degenerate single-distinct-value case. ``assignments[i]`` is the
    class of the i-th *sorted* value and is non-decreasing.
    """

    boundaries: tuple[float, ...]
    assignments: np.ndarray
    centroids: tuple[float, ...]
    within_ss: float
    method: str = "exact"
    iterations: int = 0

    @property
    def n_classes(self) -> int:
        return len(self.centroids)

    def class_slices(self) -> list[slice]:
        """Contiguous index range of each class in the sorted value array."""
        edges = np.flatnonzero(np.diff(self.assignments)) + 1
        starts = np.concatenate(([0], edges))
        stops = np.concatenate((edges, [len(self.assignments)]))
        return [slice(int(s), int(t)) for s, t in zip(starts, stops)]

    def to_dict(self) -> dict:
        return {
            "boundaries": list(self.boundaries),
            "assignments": self.assignments.tolist(),
            "centroids": list(self.centroids),
            "within_ss": self.within_ss,
            "method": self.method,
            "iterations": self.iterations,
        }


def _check_inputs(values: np.ndarray, k: int) -> int:
    if values.ndim != 1 or values.size == 0:
        raise ValueError("values must be a non-empty 1D array")
    if np.any(np.diff(values) < 0):
        raise ValueError("values must be sorted ascending")
    n_distinct = int(np.count_nonzero(np.diff(values) > 0)) + 1
    if not 1 <= k <= n_distinct:
        raise InfeasibleClusteringError(
            f"k={k} infeasible: need 1 <= k <= {n_distinct} distinct values"
        )
    return n_distinct


@njit(cache=True)
def _fill_layer(P, Q, W, s_prev, s_cur, e_row, n, m):
    """One DP layer: best first-cluster end for every suffix start.

    The interval cost matrix satisfies the concave quadrangle inequality, so
    the leftmost argmin is non-decreasing in the row index; divide-and-conquer
    exploits that. Strict ``<`` keeps the leftmost (lexicographic) argmin.
    """
    imax = n - m
    stack = np.empty((80, 4), np.int64)
    stack[0, 0] = 0
    stack[0, 1] = imax
    stack[0, 2] = 0
    stack[0, 3] = imax
    top = 1
    while top > 0:
        top -= 1
        ilo = stack[top, 0]
        ihi = stack[top, 1]
        elo = stack[top, 2]
        ehi = stack[top, 3]
        if ilo > ihi:
            continue
        mid = (ilo + ihi) // 2
        e0 = elo if elo > mid else mid
        best = np.inf
        best_e = e0
        for e in range(e0, ehi + 1):
            w = W[e + 1] - W[mid]
            s = P[e + 1] - P[mid]
            q = Q[e + 1] - Q[mid]
            cost = q - (s * s) / w
            if cost < 0.0:
                cost = 0.0
            total = cost + s_prev[e + 1]
            if total < best:
                best = total
                best_e = e
        s_cur[mid] = best
        e_row[mid] = best_e
        if mid + 1 <= ihi:
            stack[top, 0] = mid + 1
            stack[top, 1] = ihi
            stack[top, 2] = best_e
            stack[top, 3] = ehi
            top += 1
        if ilo <= mid - 1:
            stack[top, 0] = ilo
            stack[top, 1] = mid - 1
            stack[top, 2] = elo
            stack[top, 3] = best_e
            top += 1


@njit(cache=True)
def _dp_cluster_ends(P, Q, W, n, k):
    """Suffix DP over contiguous partitions; returns the end index of each
    cluster for the lexicographically smallest optimal boundary vector."""
    s_prev = np.empty(n + 1)
    s_cur = np.empty(n + 1)
    ends_table = np.zeros((k + 1, n), np.int32)
    for i in range(n):
        w = W[n] - W[i]
        s = P[n] - P[i]
        q = Q[n] - Q[i]
        cost = q - (s * s) / w
        s_prev[i] = cost if cost > 0.0 else 0.0
    for m in range(2, k + 1):
        _fill_layer(P, Q, W, s_prev, s_cur, ends_table[m], n, m)
        for i in range(n - m + 1):
            s_prev[i] = s_cur[i]
    ends = np.empty(k, np.int64)
    i = 0
    for m in range(k, 1, -1):
        e = ends_table[m, i]
        ends[k - m] = e
        i = e + 1
    ends[k - 1] = n - 1
    return ends


def _classing_from_ends(
    values: np.ndarray, ends: np.ndarray, method: str, iterations: int = 0
) -> Classing:
    k = len(ends)
    starts = np.concatenate(([0], ends[:-1] + 1))
    centroids = []
    within_ss = 0.0
    for s, e in zip(starts, ends):
        seg = values[s : e + 1]
        mu = float(seg.mean())
        centroids.append(mu)
        within_ss += float(((seg - mu) ** 2).sum())
    boundaries = [float(values[0])]
    for j in range(1, k):
        boundaries.append(float((values[ends[j - 1]] + values[starts[j]]) / 2.0))
    boundaries.append(float(values[-1]))
    counts = ends - starts + 1
    assignments = np.repeat(np.arange(k, dtype=np.int64), counts)
    return Classing(
        boundaries=tuple(boundaries),
        assignments=assignments,
        centroids=tuple(centroids),
        within_ss=within_ss,
        method=method,
        iterations=iterations,
    )


def kmeans_1d_exact(values, k: int, weights=None) -> Classing:
    """Globally optimal 1D k-means of sorted ``values`` into ``k`` classes.

    Parameters
    ----------
    values : array_like
        Sorted ascending, 1D.
    k : int
        Number of classes, ``1 <= k <=`` number of distinct values.
    weights : array_like, optional
        Per-value non-negative weights (e.g. block areas). Default unweighted.

    Raises :class:`InfeasibleClusteringError` when k exceeds the distinct
    value count.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    _check_inputs(values, k)
    n = values.size
    if weights is None:
        W = np.arange(n + 1, dtype=np.float64)
        P = np.concatenate(([0.0], np.cumsum(values)))
        Q = np.concatenate(([0.0], np.cumsum(values * values)))
    else:
        weights = np.ascontiguousarray(weights, dtype=np.float64)
        if weights.shape != values.shape or np.any(weights <= 0):
            raise ValueError("weights must be positive and match values in shape")
        W = np.concatenate(([0.0], np.cumsum(weights)))
        P = np.concatenate(([0.0], np.cumsum(weights * values)))
        Q = np.concatenate(([0.0], np.cumsum(weights * values * values)))
    ends = _dp_cluster_ends(P, Q, W, n, k)
    return _classing_from_ends(values, ends, method="exact")


def _quantile_seeds(sorted_vals: np.ndarray, k: int) -> np.ndarray:
    n = sorted_vals.size
    ranks = np.ceil((np.arange(k) + 0.5) * n / k).astype(np.int64)
    return sorted_vals[ranks - 1]


def kmeans_1d_lloyd(values, k: int, seeding: str = "quantile") -> Classing:
    """Lloyd fixed point from quantile seeds; compatibility mode.

    Converges when assignments stop changing; raises
    :class:`NonConvergenceError` after 1000 iterations. If the seed ranks
    land on duplicated values the seeds are re-drawn over distinct values,
    keeping the run deterministic.
    """
    if seeding != "quantile":
        raise ValueError(f"unsupported seeding {seeding!r}")
    values = np.ascontiguousarray(values, dtype=np.float64)
    _check_inputs(values, k)
    n = values.size
    centroids = _quantile_seeds(values, k)
    if np.unique(centroids).size < k:
        centroids = _quantile_seeds(np.unique(values), k)

    csum = np.concatenate(([0.0], np.cumsum(values)))
    prev_cuts_idx = None
    iterations = 0
    for _ in range(LLOYD_MAX_ITER):
        cuts = (centroids[:-1] + centroids[1:]) / 2.0
        cut_idx = np.searchsorted(values, cuts, side="left")
        if prev_cuts_idx is not None and np.array_equal(cut_idx, prev_cuts_idx):
            break
        edges = np.concatenate(([0], cut_idx, [n]))
        counts = np.diff(edges)
        sums = csum[edges[1:]] - csum[edges[:-1]]
        nonempty = counts > 0
        # Empty classes keep their centroid; it stays bracketed by its
        # neighbours' updated means, so the centroid order is preserved.
        centroids = centroids.copy()
        centroids[nonempty] = sums[nonempty] / counts[nonempty]
        prev_cuts_idx = cut_idx
        iterations += 1
    else:
        raise NonConvergenceError(
            f"lloyd did not converge within {LLOYD_MAX_ITER} iterations"
        )

    edges = np.concatenate(([0], prev_cuts_idx, [n]))
    if np.any(np.diff(edges) == 0):
        raise InfeasibleClusteringError(
            "lloyd fixed point has empty classes; use kmeans_1d_exact"
        )
    ends = edges[1:] - 1
    return _classing_from_ends(values, ends, method="lloyd", iterations=iterations)
