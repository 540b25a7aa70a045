"""DBSCAN over degenerate points and cluster centroid computation.

The implementation is the classic seed-expansion DBSCAN with Euclidean
distance. Expansion follows input order, so the partition (including border
point assignment) is deterministic for a fixed input order; the pipeline
feeds points sorted by (y, x) and the browser tuner mirrors the same rule.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

UNVISITED = -2
NOISE = -1


@dataclass
class ClusterSet:
    """Partition of the input indices into clusters and noise."""

    clusters: list[list[int]]
    noise: list[int]
    eps: float
    min_pts: int

    def labels(self, n: int | None = None) -> np.ndarray:
        """Per-point cluster index, -1 for noise."""
        if n is None:
            n = len(self.noise) + sum(len(c) for c in self.clusters)
        out = np.full(n, NOISE, dtype=np.int64)
        for cid, members in enumerate(self.clusters):
            out[members] = cid
        return out


@dataclass(frozen=True)
class CentroidPoint:
    """Arithmetic mean of one cluster's member coordinates."""

    x: float
    y: float
    member_count: int


def dbscan(points, eps: float, min_pts: int) -> ClusterSet:
    """Cluster 2D points; returns the cluster/noise partition.

    Deterministic for a fixed input order: points are visited and seed sets
    expanded in input (index) order.
    """
    if eps <= 0:
        raise InvalidParameterError(f"eps must be > 0, got {eps}")
    if min_pts < 1:
        raise InvalidParameterError(f"min_pts must be >= 1, got {min_pts}")
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    n = len(pts)
    if n == 0:
        return ClusterSet([], [], eps, min_pts)

    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
    eps2 = eps * eps
    neighbors = [np.nonzero(d2[i] <= eps2)[0] for i in range(n)]

    labels = np.full(n, UNVISITED, dtype=np.int64)
    cluster_id = 0
    for i in range(n):
        if labels[i] != UNVISITED:
            continue
        if len(neighbors[i]) < min_pts:
            labels[i] = NOISE
            continue
        labels[i] = cluster_id
        seeds = deque(int(j) for j in neighbors[i] if j != i)
        while seeds:
            j = seeds.popleft()
            if labels[j] == NOISE:
                labels[j] = cluster_id  # border point
            if labels[j] != UNVISITED:
                continue
            labels[j] = cluster_id
            if len(neighbors[j]) >= min_pts:
                seeds.extend(int(k) for k in neighbors[j] if labels[k] in (UNVISITED, NOISE))
        cluster_id += 1

    clusters = [[] for _ in range(cluster_id)]
    noise = []
    for i, lab in enumerate(labels):
        if lab == NOISE:
            noise.append(i)
        else:
            clusters[lab].append(i)
    return ClusterSet(clusters, noise, eps, min_pts)


def centroids(cs: ClusterSet, points) -> list[CentroidPoint]:
    """Per-cluster coordinate means; noise points are excluded."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    out = []
    for members in cs.clusters:
        sel = pts[members]
        out.append(
            CentroidPoint(float(sel[:, 0].mean()), float(sel[:, 1].mean()), len(members))
        )
    return out
