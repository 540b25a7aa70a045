/** Re-clustering and parameter export logic (pure; the DOM lives in app.ts). */

import { Centroid, ClusterSet, Point, centroids, dbscan } from "./dbscan.js";
import { BundlePoint, TunerResult } from "./types.js";

export interface Reclustering {
  clusterSet: ClusterSet;
  centroids: Centroid[];
  /** cluster index per original point, -1 for noise */
  labels: number[];
  clusterCount: number;
}

/**
 * Cluster bundle points with the core pipeline's deterministic ordering:
 * indices are sorted by (y, x) before expansion, matching the order the
 * extraction pipeline feeds its own DBSCAN, then mapped back.
 */
export function recluster(points: readonly BundlePoint[], eps: number, minPts: number): Reclustering {
  const order = points
    .map((_, i) => i)
    .sort((a, b) => points[a].y - points[b].y || points[a].x - points[b].x || a - b);
  const sorted: Point[] = order.map((i) => [points[i].x, points[i].y]);
  const cs = dbscan(sorted, eps, minPts);
  const clusters = cs.clusters.map((members) => members.map((si) => order[si]));
  const noise = cs.noise.map((si) => order[si]);
  const labels = new Array<number>(points.length).fill(-1);
  clusters.forEach((members, cid) => {
    for (const i of members) labels[i] = cid;
  });
  return {
    clusterSet: { clusters, noise, eps, minPts },
    centroids: centroids(cs, sorted),
    labels,
    clusterCount: clusters.length,
  };
}

/** Serialize a tuner result in the parameter-file format the CLI consumes. */
export function exportParams(
  eps: number,
  minPts: number,
  clusterCount: number,
  timestamp: string = new Date().toISOString(),
): string {
  const result: TunerResult = {
    schema: 1,
    eps,
    min_pts: minPts,
    cluster_count: clusterCount,
    timestamp,
  };
  return JSON.stringify(result, null, 2);
}
