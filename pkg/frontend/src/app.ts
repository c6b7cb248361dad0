// UI session state and the click-to-plan loop, kept DOM-free so the whole
// flow is testable against a stub service.

import { ApiClient, ApiError, PlanResponse, Planner } from "./api.js";
import { Point, displayToImage, imageToDisplay } from "./coords.js";
import { GrayRaster, OrientationField, RgbRaster } from "./formats.js";
import { DEFAULT_PARAMS, PanelParams, validateParams } from "./params.js";
import { Ctx2d, drawErrorMarker, drawMaskTint, drawPath, drawQuiver } from "./overlay.js";

export interface ErrorMarker {
  image: Point;
  message: string;
}

export interface UiSessionState {
  sessionId: string | null;
  image: RgbRaster | null;
  mask: GrayRaster | null;
  field: OrientationField | null;
  zoom: number;
  showMask: boolean;
  showQuiver: boolean;
  quiverStride: number;
  planners: { field: boolean; mesh: boolean };
  paths: Map<string, PlanResponse>;
  accepted: string | null;
  errorMarker: ErrorMarker | null;
  params: PanelParams;
}

export function initialState(): UiSessionState {
  return {
    sessionId: null,
    image: null,
    mask: null,
    field: null,
    zoom: 1,
    showMask: true,
    showQuiver: false,
    quiverStride: 8,
    planners: { field: true, mesh: false },
    paths: new Map(),
    accepted: null,
    errorMarker: null,
    params: { ...DEFAULT_PARAMS },
  };
}

export class HairflowApp {
  state: UiSessionState = initialState();
  onChange: () => void = () => {};
  private inFlight = false;
  private queuedClick: Point | null = null;

  constructor(private api: ApiClient) {}

  get readyToPlan(): boolean {
    const s = this.state;
    const fieldReady = s.field !== null || !s.planners.field;
    return s.sessionId !== null && s.mask !== null && fieldReady &&
      (s.planners.field || s.planners.mesh);
  }

  paramErrors(): string[] {
    return validateParams(this.state.params);
  }

  // Click in canvas backing-store coordinates. Clicks while a plan request
  // is in flight queue (the newest replaces any waiting one).
  async clickToPlan(display: Point): Promise<void> {
    if (!this.readyToPlan) return;
    if (this.inFlight) {
      this.queuedClick = display;
      return;
    }
    this.inFlight = true;
    try {
      await this.planAt(displayToImage(display, this.state.zoom));
    } finally {
      this.inFlight = false;
    }
    if (this.queuedClick !== null) {
      const next = this.queuedClick;
      this.queuedClick = null;
      await this.clickToPlan(next);
    }
  }

  private async planAt(image: Point): Promise<void> {
    const s = this.state;
    if (this.paramErrors().length > 0) return;
    s.errorMarker = null;
    const wanted: Planner[] = [];
    if (s.planners.field) wanted.push("field");
    if (s.planners.mesh) wanted.push("mesh");
    for (const planner of wanted) {
      try {
        const resp = await this.api.plan(s.sessionId!, image.x, image.y, planner, {
          step_px: s.params.stepPx,
        });
        s.paths.set(resp.path_id, resp);
      } catch (err) {
        if (err instanceof ApiError && err.code === "start-outside-hair") {
          s.errorMarker = { image, message: "outside hair" };
          break; // same start fails for every planner
        }
        throw err;
      }
    }
    this.onChange();
  }

  async accept(pathId: string): Promise<void> {
    if (!this.state.sessionId || !this.state.paths.has(pathId)) return;
    this.state.accepted = await this.api.accept(this.state.sessionId, pathId);
    this.onChange();
  }

  clearPaths(): void {
    this.state.paths.clear();
    this.state.errorMarker = null;
    this.onChange();
  }

  // Overlay pass; the base raster is blitted by the DOM layer first.
  renderOverlays(ctx: Ctx2d): void {
    const s = this.state;
    if (s.showMask && s.mask) drawMaskTint(ctx, s.mask, s.zoom);
    if (s.showQuiver && s.field) drawQuiver(ctx, s.field, s.quiverStride, s.zoom);
    for (const plan of s.paths.values()) {
      drawPath(ctx, plan.path.points, plan.planner, s.zoom);
    }
    if (s.errorMarker) {
      drawErrorMarker(ctx, imageToDisplay(s.errorMarker.image, s.zoom), s.errorMarker.message);
    }
  }
}
