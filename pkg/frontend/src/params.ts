// Parameter panel model. Defaults and validation ranges mirror the
// service exactly so the UI never sends a value the server rejects.

export interface PanelParams {
  alpha: number; // temporal smoothing weight
  shockKDelta: number;
  shockKE: number;
  shockKM: number;
  shockBlend: number;
  shockIterations: number;
  orientKDelta: number;
  orientKAvg: number;
  stepPx: number;
  speedMps: number;
}

export const DEFAULT_PARAMS: PanelParams = {
  alpha: 0.9,
  shockKDelta: 7,
  shockKE: 11,
  shockKM: 3,
  shockBlend: 0.9,
  shockIterations: 3,
  orientKDelta: 3,
  orientKAvg: 5,
  stepPx: 6,
  speedMps: 0.03,
};

function oddKernel(value: number, name: string, errors: string[]): void {
  if (!Number.isInteger(value) || value < 3 || value % 2 === 0) {
    errors.push(`${name} must be an odd integer >= 3`);
  }
}

export function validateParams(p: PanelParams): string[] {
  const errors: string[] = [];
  if (!(p.alpha > 0 && p.alpha <= 1)) errors.push("alpha must lie in (0, 1]");
  oddKernel(p.shockKDelta, "shock K_delta", errors);
  oddKernel(p.shockKE, "shock K_e", errors);
  oddKernel(p.shockKM, "shock K_m", errors);
  if (!(p.shockBlend >= 0 && p.shockBlend <= 1)) errors.push("blend must lie in [0, 1]");
  if (!Number.isInteger(p.shockIterations) || p.shockIterations < 0) {
    errors.push("iterations must be an integer >= 0");
  }
  oddKernel(p.orientKDelta, "orientation K_delta", errors);
  oddKernel(p.orientKAvg, "orientation K_E", errors);
  if (!(p.stepPx > 0)) errors.push("step size must be > 0");
  if (!(p.speedMps > 0)) errors.push("speed must be > 0");
  return errors;
}

export function orientRequestBody(p: PanelParams) {
  return {
    k_delta: p.orientKDelta,
    k_avg: p.orientKAvg,
    shock_k_delta: p.shockKDelta,
    shock_k_e: p.shockKE,
    shock_k_m: p.shockKM,
    shock_c_blend: p.shockBlend,
    shock_iterations: p.shockIterations,
  };
}
