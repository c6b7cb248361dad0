// Shared test doubles: a recording 2D context and a stub session service.

import { Ctx2d } from "../src/overlay.js";

export interface DrawOp {
  op: string;
  args: number[];
  strokeStyle?: string;
  fillStyle?: string;
  text?: string;
}

export class RecordingCtx implements Ctx2d {
  strokeStyle: string = "#000";
  fillStyle: string = "#000";
  lineWidth = 1;
  font = "";
  ops: DrawOp[] = [];

  beginPath(): void {
    this.ops.push({ op: "beginPath", args: [] });
  }
  moveTo(x: number, y: number): void {
    this.ops.push({ op: "moveTo", args: [x, y] });
  }
  lineTo(x: number, y: number): void {
    this.ops.push({ op: "lineTo", args: [x, y] });
  }
  arc(x: number, y: number, r: number, a0: number, a1: number): void {
    this.ops.push({ op: "arc", args: [x, y, r, a0, a1] });
  }
  stroke(): void {
    this.ops.push({ op: "stroke", args: [], strokeStyle: String(this.strokeStyle) });
  }
  fill(): void {
    this.ops.push({ op: "fill", args: [], fillStyle: String(this.fillStyle) });
  }
  fillRect(x: number, y: number, w: number, h: number): void {
    this.ops.push({ op: "fillRect", args: [x, y, w, h], fillStyle: String(this.fillStyle) });
  }
  fillText(text: string, x: number, y: number): void {
    this.ops.push({ op: "fillText", args: [x, y], text, fillStyle: String(this.fillStyle) });
  }
}

export interface StubOptions {
  // pixels with x in [hairX0, hairX1) and y in [hairY0, hairY1) are hair
  hairX0: number;
  hairX1: number;
  hairY0: number;
  hairY1: number;
}

// Minimal stand-in for the session service: plans echo the requested start
// and walk 5 steps to the right (field) or down (mesh).
export function stubService(opts: StubOptions) {
  let nextPath = 1;
  const calls: Array<{ url: string; body?: unknown }> = [];

  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    calls.push({ url, body });
    if (url === "/sessions" && init?.method === "POST") {
      return json(201, { id: "s1" });
    }
    if (url === "/sessions/s1/paths" && init?.method === "POST") {
      const { x, y, planner } = body as { x: number; y: number; planner: string };
      const inside = x >= opts.hairX0 && x < opts.hairX1 && y >= opts.hairY0 && y < opts.hairY1;
      if (!inside) {
        return json(422, { code: "start-outside-hair", message: "start not on hair" });
      }
      const points = [];
      for (let i = 0; i < 6; i++) {
        points.push(planner === "field" ? { x: x + 6 * i, y } : { x, y: y + 6 * i });
      }
      const pid = `p${nextPath++}`;
      return json(200, {
        path_id: pid,
        planner,
        path: { step_px: planner === "field" ? 6 : 0, points },
        metrics: {
          length_px: 30,
          mean_alignment: planner === "field" ? 0.99 : 0.4,
          mean_turn_rad: 0,
          terminated_by: "mask-exit",
        },
      });
    }
    const accept = url.match(/^\/sessions\/s1\/paths\/(p\d+)\/accept$/);
    if (accept && init?.method === "POST") {
      return json(200, { accepted: accept[1] });
    }
    return json(404, { code: "unknown-session", message: "nope" });
  };

  return { fetchFn, calls };
}

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}
