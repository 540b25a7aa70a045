/**
 * DBSCAN with Euclidean distance, mirroring the core pipeline's algorithm
 * exactly: points are visited and seed queues expanded in input (index)
 * order, so border-point assignment is deterministic and partitions match
 * the core implementation for identical input order.
 */

export type Point = readonly [number, number];

export interface ClusterSet {
  /** Member indices per cluster, in discovery order. */
  clusters: number[][];
  /** Indices classified as noise. */
  noise: number[];
  eps: number;
  minPts: number;
}

export interface Centroid {
  x: number;
  y: number;
  memberCount: number;
}

const UNVISITED = -2;
const NOISE = -1;

function neighborLists(points: readonly Point[], eps: number): number[][] {
  const n = points.length;
  const epsSq = eps * eps;
  const out: number[][] = [];
  for (let i = 0; i < n; i++) {
    const row: number[] = [];
    for (let j = 0; j < n; j++) {
      const dx = points[i][0] - points[j][0];
      const dy = points[i][1] - points[j][1];
      if (dx * dx + dy * dy <= epsSq) row.push(j);
    }
    out.push(row);
  }
  return out;
}

export function dbscan(points: readonly Point[], eps: number, minPts: number): ClusterSet {
  if (!(eps > 0)) throw new RangeError(`eps must be > 0, got ${eps}`);
  if (!(Number.isInteger(minPts) && minPts >= 1)) {
    throw new RangeError(`minPts must be an integer >= 1, got ${minPts}`);
  }
  const n = points.length;
  if (n === 0) return { clusters: [], noise: [], eps, minPts };

  const neighbors = neighborLists(points, eps);
  const labels = new Array<number>(n).fill(UNVISITED);
  let clusterId = 0;
  for (let i = 0; i < n; i++) {
    if (labels[i] !== UNVISITED) continue;
    if (neighbors[i].length < minPts) {
      labels[i] = NOISE;
      continue;
    }
    labels[i] = clusterId;
    const seeds: number[] = neighbors[i].filter((j) => j !== i);
    let head = 0;
    while (head < seeds.length) {
      const j = seeds[head];
      head += 1;
      if (labels[j] === NOISE) labels[j] = clusterId; // border point
      if (labels[j] !== UNVISITED) continue;
      labels[j] = clusterId;
      if (neighbors[j].length >= minPts) {
        for (const k of neighbors[j]) {
          if (labels[k] === UNVISITED || labels[k] === NOISE) seeds.push(k);
        }
      }
    }
    clusterId += 1;
  }

  const clusters: number[][] = Array.from({ length: clusterId }, () => []);
  const noise: number[] = [];
  for (let i = 0; i < n; i++) {
    if (labels[i] === NOISE) noise.push(i);
    else clusters[labels[i]].push(i);
  }
  return { clusters, noise, eps, minPts };
}

/** Per-cluster coordinate means; noise points are excluded. */
export function centroids(cs: ClusterSet, points: readonly Point[]): Centroid[] {
  return cs.clusters.map((members) => {
    let sx = 0;
    let sy = 0;
    for (const i of members) {
      sx += points[i][0];
      sy += points[i][1];
    }
    return { x: sx / members.length, y: sy / members.length, memberCount: members.length };
  });
}
