"""Brush-stroke planning by streamline integration of the orientation field.

The orientation field is a line field (angles mod pi), so each step picks
the representative direction that keeps the stroke moving the same way:
the first step biases downward (or follows a caller-supplied heading),
every later step flips the candidate direction whenever it opposes the
previous one. Integration stops when the stroke leaves the hair mask,
leaves the image, or hits the step cap.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .errors import StartOutsideHairError
from .model import OrientationField, PathMetrics, PixelPath
from .validation import check_binary_mask, check_same_shape, in_bounds, nearest_pixel


@dataclass(frozen=True)
class PathParams:
    """Step size (pixels), step cap, and optional initial heading."""

    step_px: float = 6.0
    max_steps: int = 1000
    initial_heading: tuple | None = None

    def __post_init__(self):
        if self.step_px <= 0:
            raise ValueError(f"step_px must be > 0, got {self.step_px}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.initial_heading is not None:
            hx, hy = self.initial_heading
            if hx * hx + hy * hy == 0.0:
                raise ValueError("initial_heading must be a nonzero vector")


def _first_direction(dx, dy, heading):
    """Resolve the mod-pi ambiguity for the first step."""
    if heading is not None:
        dot = dx * heading[0] + dy * heading[1]
        if dot < 0.0:
            return -dx, -dy
        if dot > 0.0:
            return dx, dy
    if dy < 0.0 or (dy == 0.0 and dx < 0.0):
        return -dx, -dy
    return dx, dy


def plan(field, mask, start, params=PathParams()):
    """Integrate a stroke from start through the orientation field.

    start is (x, y) in subpixel coordinates; its nearest pixel must lie
    inside the mask. Every emitted point keeps the exact step length
    |p_{t+1} - p_t| = step_px; the first point is start itself.
    """
    mask = check_binary_mask(mask)
    check_same_shape(("field", field.theta), ("mask", mask))
    x, y = float(start[0]), float(start[1])
    px, py = nearest_pixel(x, y)
    if not in_bounds(px, py, mask.shape) or not mask[py, px]:
        raise StartOutsideHairError(f"start {start} does not land on a hair pixel")

    k = float(params.step_px)
    points = [(x, y)]
    prev = None
    terminated = "step-cap"
    while len(points) - 1 < params.max_steps:
        theta = field.theta[py, px]
        dx, dy = np.cos(theta), np.sin(theta)
        if prev is None:
            dx, dy = _first_direction(dx, dy, params.initial_heading)
        elif dx * prev[0] + dy * prev[1] < 0.0:
            dx, dy = -dx, -dy
        nx, ny = x + k * dx, y + k * dy
        qx, qy = nearest_pixel(nx, ny)
        if not in_bounds(qx, qy, mask.shape):
            terminated = "image-exit"
            break
        if not mask[qy, qx]:
            terminated = "mask-exit"
            break
        points.append((nx, ny))
        x, y, px, py, prev = nx, ny, qx, qy, (dx, dy)

    return PixelPath(points=np.array(points, dtype=np.float64), step_px=k,
                     terminated_by=terminated)


def metrics(path, field=None):
    """Objective quality proxies for a stroke.

    mean_alignment is the mean |cos| between each step and the field angle
    sampled at the step midpoint's nearest pixel (requires field);
    mean_turn_rad is the mean absolute turning angle between consecutive
    steps. Either is None when the path is too short to define it.
    """
    pts = path.points
    if len(pts) < 2:
        return PathMetrics(length_px=0.0, mean_alignment=None, mean_turn_rad=None,
                           terminated_by=path.terminated_by)
    steps = np.diff(pts, axis=0)
    lengths = np.hypot(steps[:, 0], steps[:, 1])
    length_px = float(lengths.sum())

    mean_alignment = None
    if field is not None:
        mids = 0.5 * (pts[:-1] + pts[1:])
        mx = np.floor(mids[:, 0] + 0.5).astype(int)
        my = np.floor(mids[:, 1] + 0.5).astype(int)
        h, w = field.theta.shape
        if mx.min() < 0 or my.min() < 0 or mx.max() >= w or my.max() >= h:
            raise ValueError("path midpoints leave the field bounds")
        theta = field.theta[my, mx]
        step_angle = np.arctan2(steps[:, 1], steps[:, 0])
        mean_alignment = float(np.mean(np.abs(np.cos(step_angle - theta))))

    mean_turn = None
    if len(pts) >= 3:
        unit = steps / lengths[:, None]
        dots = np.clip(np.sum(unit[:-1] * unit[1:], axis=1), -1.0, 1.0)
        mean_turn = float(np.mean(np.arccos(dots)))

    return PathMetrics(length_px=length_px, mean_alignment=mean_alignment,
                       mean_turn_rad=mean_turn, terminated_by=path.terminated_by)


class FieldPlanner(BaseEstimator):
    """fit on a scene (orientation field + hair mask), predict strokes.

    predict(start) returns the PixelPath for one (x, y) start point.
    """

    def __init__(self, step_px=6.0, max_steps=1000, initial_heading=None):
        self.step_px = step_px
        self.max_steps = max_steps
        self.initial_heading = initial_heading

    def fit(self, field, mask):
        if not isinstance(field, OrientationField):
            raise TypeError("fit expects an OrientationField")
        mask = check_binary_mask(mask)
        check_same_shape(("field", field.theta), ("mask", mask))
        self.field_ = field
        self.mask_ = mask
        return self

    def _check_fitted(self):
        if not hasattr(self, "field_"):
            raise NotFittedError("call fit(field, mask) before predict")

    def predict(self, start):
        self._check_fitted()
        params = PathParams(step_px=self.step_px, max_steps=self.max_steps,
                            initial_heading=self.initial_heading)
        return plan(self.field_, self.mask_, start, params)

    def score(self, start):
        """mean_alignment of the stroke planned from start."""
        result = metrics(self.predict(start), self.field_)
        return result.mean_alignment if result.mean_alignment is not None else 0.0
