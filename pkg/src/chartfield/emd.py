"""Earth Mover's Distance between extracted and ground-truth distributions.

1D distances integrate the CDF difference exactly; 2D distances solve the
discrete transportation problem exactly (Hungarian assignment for equal
cardinalities, a HiGHS LP for the fractional unequal case).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment, linprog

from .errors import InvalidInputError
from .extract import DataTable


@dataclass
class NormalizedDistribution:
    """Discrete distribution with values min-max scaled per dimension.

    values: (n,) for univariate data or (n, 2) for point clouds.
    masses: nonnegative, summing to 1.
    """

    values: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        self.masses = np.asarray(self.masses, dtype=np.float64)
        if len(self.masses) != len(self.values):
            raise InvalidInputError("values and masses must have equal length")
        if len(self.masses) == 0:
            raise InvalidInputError("distribution must not be empty")
        total = self.masses.sum()
        if not np.isclose(total, 1.0, atol=1e-9):
            raise InvalidInputError(f"masses must sum to 1, got {total}")


def _minmax(column: np.ndarray) -> tuple[np.ndarray, bool]:
    lo, hi = column.min(), column.max()
    if hi - lo <= 0:
        return np.zeros_like(column), True
    return (column - lo) / (hi - lo), False


def normalize_table(dt: DataTable) -> NormalizedDistribution:
    """Min-max normalize a data table into [0, 1] with uniform row masses.

    Bar and histogram tables contribute their height column as univariate
    samples; scatter tables are normalized per axis.
    """
    if not dt.rows:
        raise InvalidInputError("cannot normalize an empty table")
    rows = np.asarray(dt.rows, dtype=np.float64)
    n = len(rows)
    masses = np.full(n, 1.0 / n)
    if dt.kind == "scatter":
        xs, degx = _minmax(rows[:, 0])
        ys, degy = _minmax(rows[:, 1])
        if degx or degy:
            dt.diagnostics.append("degenerate value range; axis collapsed to 0")
        return NormalizedDistribution(np.column_stack([xs, ys]), masses)
    vals, degenerate = _minmax(rows[:, 1])
    if degenerate:
        dt.diagnostics.append("degenerate value range; all values mapped to 0")
    order = np.argsort(vals, kind="stable")
    return NormalizedDistribution(vals[order], masses[order])


def _as_1d(dist) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(dist, NormalizedDistribution):
        values, masses = dist.values, dist.masses
    else:
        values, masses = dist
        values = np.asarray(values, dtype=np.float64)
        masses = np.asarray(masses, dtype=np.float64)
    if values.size == 0:
        raise InvalidInputError("empty distribution")
    if values.ndim != 1:
        raise InvalidInputError("1D distance needs univariate values")
    return values, masses


def emd_1d(a, b) -> float:
    """1-Wasserstein distance via the CDF difference integral (exact)."""
    av, am = _as_1d(a)
    bv, bm = _as_1d(b)
    support = np.unique(np.concatenate([av, bv]))
    cdf_a = np.cumsum(am[np.argsort(av, kind="stable")])
    cdf_b = np.cumsum(bm[np.argsort(bv, kind="stable")])
    # step CDFs sampled on the merged support
    fa = np.searchsorted(np.sort(av), support, side="right")
    fb = np.searchsorted(np.sort(bv), support, side="right")
    ca = np.where(fa > 0, cdf_a[fa - 1], 0.0)
    cb = np.where(fb > 0, cdf_b[fb - 1], 0.0)
    gaps = np.diff(support)
    return float(np.sum(np.abs(ca[:-1] - cb[:-1]) * gaps))


def _as_points(points) -> np.ndarray:
    if isinstance(points, NormalizedDistribution):
        points = points.values
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        raise InvalidInputError("empty point set")
    return pts.reshape(-1, 2)


def emd_2d(a, b) -> float:
    """Exact transportation distance between uniform-mass point sets.

    Sets may differ in size; each point of A carries mass 1/|A| and each
    point of B mass 1/|B|.
    """
    pa = _as_points(a)
    pb = _as_points(b)
    cost = np.sqrt(((pa[:, None, :] - pb[None, :, :]) ** 2).sum(axis=2))
    n, m = len(pa), len(pb)
    if n == m:
        ri, ci = linear_sum_assignment(cost)
        return float(cost[ri, ci].sum() / n)
    # fractional transport: supply 1/n per A point, demand 1/m per B point
    supply = np.full(n, 1.0 / n)
    demand = np.full(m, 1.0 / m)
    a_eq = []
    for i in range(n):
        row = np.zeros(n * m)
        row[i * m:(i + 1) * m] = 1.0
        a_eq.append(row)
    for j in range(m):
        row = np.zeros(n * m)
        row[j::m] = 1.0
        a_eq.append(row)
    res = linprog(
        cost.reshape(-1),
        A_eq=np.array(a_eq),
        b_eq=np.concatenate([supply, demand]),
        bounds=(0, None),
        method="highs",
    )
    if not res.success:
        raise InvalidInputError(f"transportation LP failed: {res.message}")
    return float(res.fun)
