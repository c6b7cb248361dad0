// Typed client for the hairflow session service.

export type Planner = "field" | "mesh";

export interface PathPoint {
  x: number;
  y: number;
}

export interface PathJson {
  step_px: number;
  points: PathPoint[];
}

export interface PathMetrics {
  length_px: number;
  mean_alignment: number | null;
  mean_turn_rad: number | null;
  terminated_by: string | null;
}

export interface PlanResponse {
  path_id: string;
  path: PathJson;
  metrics: PathMetrics;
  planner: Planner;
}

export interface PoseJson {
  position: [number, number, number];
  orientation_quat: [number, number, number, number];
  time_s: number;
}

export interface SessionSummary {
  id: string;
  has_rgb: boolean;
  has_cloud: boolean;
  has_mask: boolean;
  has_field: boolean;
  paths: Record<string, { planner: Planner; n_points: number; has_trajectory: boolean }>;
  accepted: string | null;
}

export interface OrientParams {
  k_delta?: number;
  k_avg?: number;
  shock_k_delta?: number;
  shock_k_e?: number;
  shock_k_m?: number;
  shock_c_blend?: number;
  shock_iterations?: number;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const resp = await this.fetchFn(this.base + path, init);
    if (!resp.ok) {
      let code = "unknown";
      let message = `${resp.status}`;
      try {
        const body = await resp.json();
        code = body.code ?? code;
        message = body.message ?? message;
      } catch {
        // non-JSON error body; keep defaults
      }
      throw new ApiError(resp.status, code, message);
    }
    return resp;
  }

  async createSession(): Promise<string> {
    const resp = await this.request("/sessions", { method: "POST" });
    return (await resp.json()).id;
  }

  async getSession(id: string): Promise<SessionSummary> {
    return (await this.request(`/sessions/${id}`)).json();
  }

  private putBinary(id: string, kind: "rgb" | "mask" | "cloud", data: ArrayBuffer): Promise<Response> {
    return this.request(`/sessions/${id}/${kind}`, {
      method: "PUT",
      headers: { "content-type": "application/octet-stream" },
      body: data,
    });
  }

  uploadRgb(id: string, data: ArrayBuffer) {
    return this.putBinary(id, "rgb", data);
  }

  uploadMask(id: string, data: ArrayBuffer) {
    return this.putBinary(id, "mask", data);
  }

  uploadCloud(id: string, data: ArrayBuffer) {
    return this.putBinary(id, "cloud", data);
  }

  async orient(id: string, params: OrientParams = {}): Promise<void> {
    await this.request(`/sessions/${id}/orient`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(params),
    });
  }

  async getField(id: string): Promise<ArrayBuffer> {
    return (await this.request(`/sessions/${id}/field`)).arrayBuffer();
  }

  async plan(
    id: string,
    x: number,
    y: number,
    planner: Planner,
    params: { step_px?: number } = {},
  ): Promise<PlanResponse> {
    const resp = await this.request(`/sessions/${id}/paths`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ x, y, planner, ...params }),
    });
    return resp.json();
  }

  async trajectory(id: string, pathId: string, speedMps: number): Promise<{ poses: PoseJson[] }> {
    const resp = await this.request(`/sessions/${id}/paths/${pathId}/trajectory`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ speed_mps: speedMps }),
    });
    return resp.json();
  }

  async accept(id: string, pathId: string): Promise<string> {
    const resp = await this.request(`/sessions/${id}/paths/${pathId}/accept`, { method: "POST" });
    return (await resp.json()).accepted;
  }
}
