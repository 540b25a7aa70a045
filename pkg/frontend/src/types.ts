/** Wire formats shared with the extraction CLI. */

export const BUNDLE_SCHEMA = 1;

export interface BundlePoint {
  x: number;
  y: number;
  cp: number;
  norm_trace: number;
}

export interface TunerBundle {
  schema: number;
  width: number;
  height: number;
  /** base64 PNG of the chart canvas */
  image: string;
  points: BundlePoint[];
  defaults: { eps: number; min_pts: number };
  thresholds: Record<string, number>;
}

export interface TunerResult {
  schema: number;
  eps: number;
  min_pts: number;
  cluster_count: number;
  timestamp: string;
}

/** Parse and validate a tuner bundle; throws with a user-readable message. */
export function parseBundle(text: string): TunerBundle {
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch (e) {
    throw new Error(`bundle is not valid JSON: ${(e as Error).message}`);
  }
  const bundle = obj as TunerBundle;
  if (bundle.schema !== BUNDLE_SCHEMA) {
    throw new Error(`unsupported bundle schema ${bundle.schema}; expected ${BUNDLE_SCHEMA}`);
  }
  if (!Number.isInteger(bundle.width) || !Number.isInteger(bundle.height) || typeof bundle.image !== "string") {
    throw new Error("bundle is missing its canvas image");
  }
  if (!Array.isArray(bundle.points)) throw new Error("bundle has no point list");
  for (const p of bundle.points) {
    if (p.x < 0 || p.x >= bundle.width || p.y < 0 || p.y >= bundle.height) {
      throw new Error(`point (${p.x}, ${p.y}) lies outside the ${bundle.width}x${bundle.height} canvas`);
    }
  }
  return bundle;
}
