/** DOM glue: bundle loading, canvas drawing, slider handling, export. */

import { Reclustering, exportParams, recluster } from "./tuner.js";
import { TunerBundle, parseBundle } from "./types.js";

const CLUSTER_HUES = 137.508; // golden-angle hue steps keep neighbors distinct

interface State {
  bundle: TunerBundle | null;
  image: HTMLImageElement | null;
  result: Reclustering | null;
  eps: number;
  minPts: number;
}

const state: State = { bundle: null, image: null, result: null, eps: 5, minPts: 3 };

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(text: string, isError = false): void {
  const status = el<HTMLParagraphElement>("status");
  status.textContent = text;
  status.className = isError ? "error" : "";
}

function draw(): void {
  const canvas = el<HTMLCanvasElement>("view");
  const ctx = canvas.getContext("2d");
  if (!ctx || !state.bundle || !state.image) return;
  canvas.width = state.bundle.width;
  canvas.height = state.bundle.height;
  ctx.drawImage(state.image, 0, 0);

  const result = state.result;
  if (!result) return;
  state.bundle.points.forEach((p, i) => {
    const cid = result.labels[i];
    ctx.fillStyle = cid < 0 ? "rgba(120,120,120,0.9)" : `hsl(${(cid * CLUSTER_HUES) % 360} 85% 45%)`;
    ctx.fillRect(p.x - 1, p.y - 1, 3, 3);
  });
  ctx.strokeStyle = "#000";
  ctx.lineWidth = 1.5;
  for (const c of result.centroids) {
    ctx.beginPath();
    ctx.moveTo(c.x - 5, c.y);
    ctx.lineTo(c.x + 5, c.y);
    ctx.moveTo(c.x, c.y - 5);
    ctx.lineTo(c.x, c.y + 5);
    ctx.stroke();
  }
}

function refresh(): void {
  if (!state.bundle) return;
  state.result = recluster(state.bundle.points, state.eps, state.minPts);
  el<HTMLSpanElement>("cluster-count").textContent = String(state.result.clusterCount);
  el<HTMLSpanElement>("noise-count").textContent = String(state.result.clusterSet.noise.length);
  draw();
}

let pending: number | undefined;
function debouncedRefresh(): void {
  window.clearTimeout(pending);
  pending = window.setTimeout(refresh, 120);
}

function bindSlider(id: string, labelId: string, apply: (value: number) => void): void {
  const slider = el<HTMLInputElement>(id);
  const label = el<HTMLSpanElement>(labelId);
  const update = () => {
    const value = Number(slider.value);
    label.textContent = slider.value;
    apply(value);
    debouncedRefresh();
  };
  slider.addEventListener("input", update);
  label.textContent = slider.value;
}

function loadBundle(text: string): void {
  try {
    state.bundle = parseBundle(text);
  } catch (e) {
    setStatus((e as Error).message, true);
    return;
  }
  const img = new Image();
  img.onload = () => {
    state.image = img;
    const eps = el<HTMLInputElement>("eps");
    const minPts = el<HTMLInputElement>("min-pts");
    eps.value = String(state.bundle!.defaults.eps ?? 5);
    minPts.value = String(state.bundle!.defaults.min_pts ?? 3);
    state.eps = Number(eps.value);
    state.minPts = Number(minPts.value);
    el<HTMLSpanElement>("eps-label").textContent = eps.value;
    el<HTMLSpanElement>("min-pts-label").textContent = minPts.value;
    setStatus(`${state.bundle!.points.length} degenerate points loaded`);
    refresh();
  };
  img.src = `data:image/png;base64,${state.bundle.image}`;
}

function download(): void {
  if (!state.result) {
    setStatus("load a bundle and cluster it before exporting", true);
    return;
  }
  const text = exportParams(state.eps, state.minPts, state.result.clusterCount);
  const blob = new Blob([text], { type: "application/json" });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = "tuner-params.json";
  link.click();
  URL.revokeObjectURL(link.href);
}

export function init(): void {
  el<HTMLInputElement>("bundle-file").addEventListener("change", (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    file.text().then(loadBundle, (e) => setStatus(String(e), true));
  });
  bindSlider("eps", "eps-label", (v) => (state.eps = v));
  bindSlider("min-pts", "min-pts-label", (v) => (state.minPts = Math.round(v)));
  el<HTMLButtonElement>("export").addEventListener("click", download);
}

init();
