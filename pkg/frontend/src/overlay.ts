// Canvas overlay drawing. Everything takes a minimal 2D-context interface
// so tests can record draw calls without a DOM.

import { Point, imageToDisplay } from "./coords.js";
import { GrayRaster, OrientationField } from "./formats.js";
import { PathPoint, Planner } from "./api.js";

// legend: orange = image-based (field) planner, red = mesh baseline,
// blue reserved for freehand annotation
export const PLANNER_COLORS: Record<Planner, string> = {
  field: "#ffa500",
  mesh: "#ff0000",
};

export const MASK_TINT = "rgba(80, 160, 255, 0.25)";
export const QUIVER_COLOR = "#00cc66";
export const ERROR_COLOR = "#ff2222";

export interface Ctx2d {
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
}

export function drawPath(ctx: Ctx2d, points: PathPoint[], planner: Planner, zoom: number): void {
  if (points.length === 0) return;
  ctx.strokeStyle = PLANNER_COLORS[planner];
  ctx.lineWidth = 2;
  ctx.beginPath();
  const first = imageToDisplay(points[0], zoom);
  ctx.moveTo(first.x, first.y);
  for (let i = 1; i < points.length; i++) {
    const p = imageToDisplay(points[i], zoom);
    ctx.lineTo(p.x, p.y);
  }
  ctx.stroke();
  // start marker
  ctx.fillStyle = PLANNER_COLORS[planner];
  ctx.beginPath();
  ctx.arc(first.x, first.y, 3, 0, 2 * Math.PI);
  ctx.fill();
}

export function drawMaskTint(ctx: Ctx2d, mask: GrayRaster, zoom: number): void {
  ctx.fillStyle = MASK_TINT;
  for (let y = 0; y < mask.height; y++) {
    let runStart = -1;
    for (let x = 0; x <= mask.width; x++) {
      const on = x < mask.width && mask.data[y * mask.width + x] >= 128;
      if (on && runStart < 0) runStart = x;
      if (!on && runStart >= 0) {
        ctx.fillRect(runStart * zoom, y * zoom, (x - runStart) * zoom, zoom);
        runStart = -1;
      }
    }
  }
}

// short segment at angle theta every `stride` pixels, length scaled by
// coherence (coherence 0 draws nothing)
export function drawQuiver(ctx: Ctx2d, field: OrientationField, stride: number, zoom: number): void {
  ctx.strokeStyle = QUIVER_COLOR;
  ctx.lineWidth = 1;
  const half = 0.45 * stride * zoom;
  ctx.beginPath();
  for (let y = Math.floor(stride / 2); y < field.height; y += stride) {
    for (let x = Math.floor(stride / 2); x < field.width; x += stride) {
      const i = y * field.width + x;
      const len = half * field.coherence[i];
      if (len <= 0) continue;
      const dx = Math.cos(field.theta[i]) * len;
      const dy = Math.sin(field.theta[i]) * len;
      const c = imageToDisplay({ x, y }, zoom);
      ctx.moveTo(c.x - dx, c.y - dy);
      ctx.lineTo(c.x + dx, c.y + dy);
    }
  }
  ctx.stroke();
}

export function drawErrorMarker(ctx: Ctx2d, display: Point, message: string): void {
  ctx.strokeStyle = ERROR_COLOR;
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(display.x - 6, display.y - 6);
  ctx.lineTo(display.x + 6, display.y + 6);
  ctx.moveTo(display.x - 6, display.y + 6);
  ctx.lineTo(display.x + 6, display.y - 6);
  ctx.stroke();
  ctx.fillStyle = ERROR_COLOR;
  ctx.font = "12px sans-serif";
  ctx.fillText(message, display.x + 9, display.y - 9);
}
