/** Skeletal hand rendering: the five FK point chains from the snapshot
 * drawn as polylines on a canvas, palm-plane orthographic projection
 * (x right, y up). No meshes, no local extrapolation; what the service
 * said is what gets drawn.
 */

import { FINGERS } from "./protocol.js";

export interface View {
  scale: number; // pixels per meter
  offsetX: number;
  offsetY: number;
}

const FINGER_COLOR: Record<string, string> = {
  thumb: "#e4572e",
  index: "#4f86c6",
  middle: "#3aa17e",
  ring: "#8d6cab",
  pinkie: "#c0a030",
};

/** Fit every chain point into a width x height box with a margin,
 * preserving aspect. Degenerate clouds get an arbitrary finite scale so
 * drawing never divides by zero. */
export function fitView(
  fk: Record<string, number[][]>,
  width: number,
  height: number,
  margin = 30,
): View {
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (const finger of FINGERS) {
    for (const point of fk[finger] ?? []) {
      const x = point[0] ?? 0;
      const y = point[1] ?? 0;
      if (x < minX) minX = x;
      if (x > maxX) maxX = x;
      if (y < minY) minY = y;
      if (y > maxY) maxY = y;
    }
  }
  if (!Number.isFinite(minX)) {
    return { scale: 1, offsetX: width / 2, offsetY: height / 2 };
  }
  const spanX = Math.max(maxX - minX, 1e-9);
  const spanY = Math.max(maxY - minY, 1e-9);
  const scale = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
  const midX = (minX + maxX) / 2;
  const midY = (minY + maxY) / 2;
  return {
    scale,
    offsetX: width / 2 - scale * midX,
    offsetY: height / 2 + scale * midY, // + because screen y grows downward
  };
}

/** Palm coordinates (meters) to canvas pixels; y is flipped so the
 * fingers point up the screen. */
export function project(point: number[], view: View): [number, number] {
  const x = point[0] ?? 0;
  const y = point[1] ?? 0;
  return [view.offsetX + view.scale * x, view.offsetY - view.scale * y];
}

export function drawHand(
  ctx: CanvasRenderingContext2D,
  fk: Record<string, number[][]>,
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  const view = fitView(fk, width, height);
  for (const finger of FINGERS) {
    const chain = fk[finger];
    if (!chain || chain.length === 0) continue;
    const color = FINGER_COLOR[finger] ?? "#888";
    ctx.strokeStyle = color;
    ctx.fillStyle = color;
    ctx.lineWidth = finger === "thumb" ? 4 : 3;
    ctx.beginPath();
    const start = project(chain[0] ?? [0, 0, 0], view);
    ctx.moveTo(start[0], start[1]);
    for (const point of chain.slice(1)) {
      const [sx, sy] = project(point, view);
      ctx.lineTo(sx, sy);
    }
    ctx.stroke();
    for (const point of chain) {
      const [sx, sy] = project(point, view);
      ctx.beginPath();
      ctx.arc(sx, sy, 4, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
}
