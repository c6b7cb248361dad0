// DOM wiring: uploads, parameter panel, canvas, planner toggles, accept.

import { ApiClient } from "./api.js";
import { HairflowApp } from "./app.js";
import { eventToCanvas } from "./coords.js";
import { grayToRgba, parseOrf, parsePgm, parsePpm, rgbToRgba } from "./formats.js";
import { orientRequestBody } from "./params.js";
import { PLANNER_COLORS } from "./overlay.js";

const api = new ApiClient("");
const app = new HairflowApp(api);

const canvas = document.getElementById("scene") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const status = document.getElementById("status")!;
const metricsBox = document.getElementById("metrics")!;
const acceptedBadge = document.getElementById("accepted-badge")!;

function setStatus(text: string): void {
  status.textContent = text;
}

function render(): void {
  const s = app.state;
  if (!s.image && !s.mask) return;
  const w = (s.image ?? s.mask)!.width;
  const h = (s.image ?? s.mask)!.height;
  canvas.width = w * s.zoom;
  canvas.height = h * s.zoom;

  if (s.image) {
    const base = new ImageData(rgbToRgba(s.image), s.image.width, s.image.height);
    blitScaled(base, s.zoom);
  } else if (s.mask) {
    const base = new ImageData(grayToRgba(s.mask), s.mask.width, s.mask.height);
    blitScaled(base, s.zoom);
  }
  app.renderOverlays(ctx);
  renderMetrics();
}

function blitScaled(img: ImageData, zoom: number): void {
  const off = document.createElement("canvas");
  off.width = img.width;
  off.height = img.height;
  off.getContext("2d")!.putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 0, 0, img.width * zoom, img.height * zoom);
}

function renderMetrics(): void {
  const rows: string[] = [];
  for (const [pid, plan] of app.state.paths) {
    const m = plan.metrics;
    const align = m.mean_alignment === null ? "-" : m.mean_alignment.toFixed(3);
    const turn = m.mean_turn_rad === null ? "-" : m.mean_turn_rad.toFixed(3);
    const color = PLANNER_COLORS[plan.planner];
    const mark = app.state.accepted === pid ? " [accepted]" : "";
    rows.push(
      `<div class="metric-row" data-pid="${pid}">` +
        `<span class="swatch" style="background:${color}"></span>` +
        `${plan.planner} ${pid}: ${plan.path.points.length} pts, ` +
        `len ${m.length_px.toFixed(1)}px, align ${align}, turn ${turn}${mark} ` +
        `<button data-accept="${pid}">accept</button></div>`,
    );
  }
  metricsBox.innerHTML = rows.join("");
  metricsBox.querySelectorAll("button[data-accept]").forEach((btn) => {
    btn.addEventListener("click", () => {
      void app.accept((btn as HTMLButtonElement).dataset.accept!).catch((e) => setStatus(String(e)));
    });
  });
  acceptedBadge.textContent = app.state.accepted ? `accepted: ${app.state.accepted}` : "no stroke accepted";
}

app.onChange = render;

async function ensureSession(): Promise<string> {
  if (!app.state.sessionId) {
    app.state.sessionId = await api.createSession();
    setStatus(`session ${app.state.sessionId}`);
  }
  return app.state.sessionId;
}

function wireUpload(inputId: string, handler: (buf: ArrayBuffer) => Promise<void>): void {
  const input = document.getElementById(inputId) as HTMLInputElement;
  input.addEventListener("change", () => {
    const file = input.files?.[0];
    if (!file) return;
    void file.arrayBuffer().then(handler).then(render).catch((e) => setStatus(String(e)));
  });
}

wireUpload("upload-rgb", async (buf) => {
  const sid = await ensureSession();
  await api.uploadRgb(sid, buf);
  app.state.image = parsePpm(buf);
  app.state.field = null; // mirrors the service: new image drops the field
  setStatus("rgb uploaded");
});

wireUpload("upload-mask", async (buf) => {
  const sid = await ensureSession();
  await api.uploadMask(sid, buf);
  app.state.mask = parsePgm(buf);
  setStatus("mask uploaded");
});

wireUpload("upload-cloud", async (buf) => {
  const sid = await ensureSession();
  await api.uploadCloud(sid, buf);
  setStatus("cloud uploaded");
});

document.getElementById("btn-orient")!.addEventListener("click", () => {
  void (async () => {
    const errors = app.paramErrors();
    if (errors.length > 0) {
      setStatus(errors.join("; "));
      return;
    }
    const sid = await ensureSession();
    setStatus("estimating orientation field...");
    await api.orient(sid, orientRequestBody(app.state.params));
    app.state.field = parseOrf(await api.getField(sid));
    setStatus("field ready - click the image to plan");
    render();
  })().catch((e) => setStatus(String(e)));
});

canvas.addEventListener("click", (ev) => {
  if (!app.readyToPlan) {
    setStatus("upload a mask and estimate the field first");
    return;
  }
  const rect = canvas.getBoundingClientRect();
  const pt = eventToCanvas(ev.clientX, ev.clientY, rect, canvas.width, canvas.height);
  void app.clickToPlan(pt).catch((e) => setStatus(String(e)));
});

document.getElementById("btn-clear")!.addEventListener("click", () => app.clearPaths());

(document.getElementById("zoom") as HTMLSelectElement).addEventListener("change", (ev) => {
  app.state.zoom = Number((ev.target as HTMLSelectElement).value);
  render();
});

for (const planner of ["field", "mesh"] as const) {
  const box = document.getElementById(`toggle-${planner}`) as HTMLInputElement;
  box.addEventListener("change", () => {
    app.state.planners[planner] = box.checked;
  });
}

const quiverBox = document.getElementById("toggle-quiver") as HTMLInputElement;
quiverBox.addEventListener("change", () => {
  app.state.showQuiver = quiverBox.checked;
  render(); // stride/toggle redraw needs no re-fetch
});
const maskBox = document.getElementById("toggle-mask") as HTMLInputElement;
maskBox.addEventListener("change", () => {
  app.state.showMask = maskBox.checked;
  render();
});
(document.getElementById("quiver-stride") as HTMLInputElement).addEventListener("change", (ev) => {
  app.state.quiverStride = Math.max(2, Number((ev.target as HTMLInputElement).value));
  render();
});

// parameter panel inputs named param-<key>
const paramIds: Array<[string, keyof typeof app.state.params]> = [
  ["param-alpha", "alpha"],
  ["param-shock-kd", "shockKDelta"],
  ["param-shock-ke", "shockKE"],
  ["param-shock-km", "shockKM"],
  ["param-shock-blend", "shockBlend"],
  ["param-shock-iters", "shockIterations"],
  ["param-orient-kd", "orientKDelta"],
  ["param-orient-ke", "orientKAvg"],
  ["param-step", "stepPx"],
  ["param-speed", "speedMps"],
];
for (const [id, key] of paramIds) {
  const input = document.getElementById(id) as HTMLInputElement;
  input.value = String(app.state.params[key]);
  input.addEventListener("change", () => {
    app.state.params[key] = Number(input.value);
    const errors = app.paramErrors();
    setStatus(errors.length > 0 ? errors.join("; ") : "parameters ok");
  });
}

setStatus("upload a scene to begin");
