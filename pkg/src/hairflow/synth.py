"""Synthetic scenes with analytic ground-truth orientation.

Each generator emits an intensity image whose texture flows along a known
angle field, an all-hair mask, and a flat organized cloud (z = 1 m,
1 mm/pixel, centered principal point). These stand in for rendered
hairstyles: every quantity a test asserts against is computable in
closed form.

Kinds:
    stripes   straight flow at a fixed angle
    waves     flow along y = A sin(2 pi x / wavelength) streamlines
    circular  flow tangent to circles about a center
    parting   3 pi/4 flow left of center, pi/4 right of center
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .mesh import MeshPlanner
from .model import OrganizedCloud, OrientationField
from .orientation import OrientationParams, orientation_from_image
from .planning import FieldPlanner, metrics
from .validation import wrap_mod_pi

KINDS = ("stripes", "waves", "circular", "parting")

PIXEL_PITCH_M = 0.001
PLANE_Z_M = 1.0


@dataclass(frozen=True)
class SyntheticSpec:
    """Deterministic description of one synthetic scene."""

    kind: str = "stripes"
    size: int = 128
    angle_rad: float = 0.0
    period_px: float = 12.0
    amplitude_px: float = 8.0
    center: tuple | None = None
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.size < 32:
            raise ValueError(f"size must be >= 32, got {self.size}")
        if self.period_px <= 0:
            raise ValueError(f"period_px must be > 0, got {self.period_px}")
        if self.noise_sigma < 0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")


def _stripe_profile(label, period):
    return 127.5 + 127.5 * np.sin(2.0 * np.pi * label / period)


def _flat_cloud(size):
    xs = (np.arange(size) - size / 2.0) * PIXEL_PITCH_M
    ys = (np.arange(size) - size / 2.0) * PIXEL_PITCH_M
    gx, gy = np.meshgrid(xs, ys)
    pts = np.stack([gx, gy, np.full_like(gx, PLANE_Z_M)], axis=2)
    # quantize to f32 so the scene round-trips OCD1 bit-exactly
    pts = pts.astype(np.float32).astype(np.float64)
    return OrganizedCloud(points=pts, valid=np.ones((size, size), dtype=bool))


def generate(spec):
    """Build (image, ground-truth field, mask, cloud) for a spec.

    Byte-identical for identical specs; noise uses a seeded generator.
    """
    n = spec.size
    x, y = np.meshgrid(np.arange(n, dtype=np.float64), np.arange(n, dtype=np.float64))
    cx, cy = spec.center if spec.center is not None else (n / 2.0, n / 2.0)

    if spec.kind == "stripes":
        label = -np.sin(spec.angle_rad) * x + np.cos(spec.angle_rad) * y
        img = _stripe_profile(label, spec.period_px)
        theta = np.full((n, n), wrap_mod_pi(spec.angle_rad))
    elif spec.kind == "waves":
        wavelength = n / 2.0
        omega = 2.0 * np.pi / wavelength
        label = y - spec.amplitude_px * np.sin(omega * x)
        img = _stripe_profile(label, spec.period_px)
        slope = spec.amplitude_px * omega * np.cos(omega * x)
        theta = wrap_mod_pi(np.arctan2(slope, np.ones_like(slope)))
    elif spec.kind == "circular":
        dx, dy = x - cx, y - cy
        r = np.hypot(dx, dy)
        img = _stripe_profile(r, spec.period_px)
        theta = wrap_mod_pi(np.arctan2(dx, -dy))
    else:  # parting
        left = x < cx
        a_left, a_right = 3.0 * np.pi / 4.0, np.pi / 4.0
        label_left = -np.sin(a_left) * x + np.cos(a_left) * y
        label_right = -np.sin(a_right) * x + np.cos(a_right) * y
        img = np.where(left, _stripe_profile(label_left, spec.period_px),
                       _stripe_profile(label_right, spec.period_px))
        theta = np.where(left, a_left, a_right)

    if spec.noise_sigma > 0:
        rng = np.random.default_rng(spec.seed)
        img = img + rng.normal(0.0, spec.noise_sigma, img.shape)
    img = np.clip(img, 0.0, 255.0)

    mask = np.ones((n, n), dtype=bool)
    field = OrientationField(theta=theta, coherence=np.ones_like(theta))
    return img, field, mask, _flat_cloud(n)


def angular_error(estimated, truth):
    """Absolute angle difference mod pi, elementwise, in radians."""
    diff = np.abs(np.asarray(estimated) - np.asarray(truth))
    return np.minimum(diff, np.pi - diff)


def sample_starts(mask, n_starts, seed, margin=12):
    """Deterministic masked start points away from the borders."""
    h, w = mask.shape
    inner = np.zeros_like(mask)
    inner[margin : h - margin, margin : w - margin] = True
    ys, xs = np.nonzero(mask & inner)
    if xs.size == 0:
        raise ValueError("mask has no interior pixels to start from")
    rng = np.random.default_rng(seed)
    pick = rng.choice(xs.size, size=min(n_starts, xs.size), replace=False)
    return [(float(xs[i]), float(ys[i])) for i in pick]


def compare_planners(spec, starts, orientation_params=OrientationParams(),
                     step_px=6.0, goal_fraction=0.1):
    """One metrics row per (planner, start) on a synthetic scene.

    The orientation field fed to the streamline planner is estimated from
    the image (not the ground truth), so the comparison exercises the
    whole pipeline. Alignment for both planners is measured against the
    estimated field.
    """
    img, _, mask, cloud = generate(spec)
    field = orientation_from_image(img, orientation_params)
    field_planner = FieldPlanner(step_px=step_px).fit(field, mask)
    mesh_planner = MeshPlanner(goal_fraction=goal_fraction).fit(mask, cloud)

    rows = []
    for sx, sy in starts:
        for name, planner in (("field", field_planner), ("mesh", mesh_planner)):
            path = planner.predict((sx, sy))
            m = metrics(path, field)
            end = path.points[-1]
            rows.append({
                "planner": name,
                "start_x": sx,
                "start_y": sy,
                "n_points": len(path),
                "length_px": m.length_px,
                "mean_alignment": m.mean_alignment,
                "mean_turn_rad": m.mean_turn_rad,
                "dx": float(end[0] - sx),
                "dy": float(end[1] - sy),
                "terminated_by": m.terminated_by,
            })
    return rows


def rows_to_csv(rows):
    """Serialize comparison rows to CSV bytes."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")
