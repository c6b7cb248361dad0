// Canvas <-> image coordinate mapping. The canvas backing store is sized
// width*zoom x height*zoom, so one image pixel covers a zoom x zoom square.

export interface Point {
  x: number;
  y: number;
}

export function displayToImage(p: Point, zoom: number): Point {
  if (zoom <= 0) throw new Error("zoom must be positive");
  return { x: p.x / zoom, y: p.y / zoom };
}

export function imageToDisplay(p: Point, zoom: number): Point {
  if (zoom <= 0) throw new Error("zoom must be positive");
  return { x: p.x * zoom, y: p.y * zoom };
}

export function distance(a: Point, b: Point): number {
  return Math.hypot(a.x - b.x, a.y - b.y);
}

// Click position relative to an element's bounding box, in backing-store
// pixels (bounding box is in CSS pixels; the canvas may be CSS-scaled).
export function eventToCanvas(
  clientX: number,
  clientY: number,
  rect: { left: number; top: number; width: number; height: number },
  canvasWidth: number,
  canvasHeight: number,
): Point {
  return {
    x: ((clientX - rect.left) / rect.width) * canvasWidth,
    y: ((clientY - rect.top) / rect.height) * canvasHeight,
  };
}
