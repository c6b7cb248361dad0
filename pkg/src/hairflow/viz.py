"""Raster previews: theta quantization and path overlays."""

import numpy as np

PLANNER_COLORS = {"field": (255, 165, 0), "mesh": (255, 0, 0)}  # orange / red


def theta_preview(field):
    """Quantize theta to a u8 raster (theta * 255 / pi)."""
    return np.clip(np.rint(field.theta * 255.0 / np.pi), 0, 255).astype(np.uint8)


def _draw_segment(rgb, x0, y0, x1, y1, color):
    n = int(max(abs(x1 - x0), abs(y1 - y0))) + 1
    xs = np.rint(np.linspace(x0, x1, n)).astype(int)
    ys = np.rint(np.linspace(y0, y1, n)).astype(int)
    h, w = rgb.shape[:2]
    ok = (xs >= 0) & (xs < w) & (ys >= 0) & (ys < h)
    rgb[ys[ok], xs[ok]] = color


def draw_path(base, path, color=(255, 165, 0)):
    """Overlay a polyline on an intensity or RGB raster; returns RGB."""
    arr = np.asarray(base, dtype=np.float64)
    rgb = np.repeat(arr[..., None], 3, axis=2) if arr.ndim == 2 else arr.copy()
    pts = path.points
    for i in range(len(pts) - 1):
        _draw_segment(rgb, pts[i, 0], pts[i, 1], pts[i + 1, 0], pts[i + 1, 1], color)
    if len(pts) == 1:
        _draw_segment(rgb, pts[0, 0], pts[0, 1], pts[0, 0], pts[0, 1], color)
    return rgb
