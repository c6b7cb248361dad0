"""Shared value types for the pipeline.

All types are immutable after construction (arrays are set non-writeable)
so instances can be shared freely across threads.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError


def _freeze(arr):
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class OrganizedCloud:
    """Per-pixel XYZ in meters, camera frame (+z away from the camera).

    points has shape (h, w, 3); valid marks pixels with a depth reading.
    Valid points must be finite with z > 0.
    """

    points: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 3 or pts.shape[2] != 3 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError(f"cloud points must have shape (h, w, 3), got {pts.shape}")
        val = np.asarray(self.valid, dtype=bool)
        if val.shape != pts.shape[:2]:
            raise DimensionMismatchError(
                f"validity shape {val.shape} does not match points {pts.shape[:2]}"
            )
        good = pts[val]
        if good.size and not np.all(np.isfinite(good)):
            raise ValueError("valid cloud points must be finite")
        if good.size and not np.all(good[:, 2] > 0.0):
            raise ValueError("valid cloud points must have z > 0")
        object.__setattr__(self, "points", _freeze(pts))
        object.__setattr__(self, "valid", _freeze(val))

    @classmethod
    def from_points(cls, points):
        """Build a cloud from raw (h, w, 3) data; any-NaN pixels become invalid."""
        pts = np.asarray(points, dtype=np.float64)
        valid = ~np.any(np.isnan(pts), axis=2)
        return cls(points=pts, valid=valid)

    @property
    def shape(self):
        return self.points.shape[:2]


@dataclass(frozen=True)
class OrientationField:
    """Per-pixel hair-flow angle theta in [0, pi) with a coherence map in [0, 1].

    theta is an undirected line orientation (mod pi); coherence is the
    normalized eigenvalue gap of the structure tensor, 0 at degenerate pixels.
    """

    theta: np.ndarray
    coherence: np.ndarray

    def __post_init__(self):
        th = np.asarray(self.theta, dtype=np.float64)
        co = np.asarray(self.coherence, dtype=np.float64)
        if th.ndim != 2 or th.size == 0:
            raise ValueError(f"theta must be 2-D non-empty, got shape {th.shape}")
        if co.shape != th.shape:
            raise DimensionMismatchError(
                f"coherence shape {co.shape} does not match theta {th.shape}"
            )
        if not np.all(np.isfinite(th)) or th.min() < 0.0 or th.max() >= np.pi:
            raise ValueError("theta must be finite and in [0, pi)")
        if not np.all(np.isfinite(co)) or co.min() < 0.0 or co.max() > 1.0:
            raise ValueError("coherence must be finite and in [0, 1]")
        object.__setattr__(self, "theta", _freeze(th))
        object.__setattr__(self, "coherence", _freeze(co))

    @property
    def shape(self):
        return self.theta.shape


@dataclass(frozen=True)
class PixelPath:
    """Ordered subpixel stroke points (x, y) with the step length used.

    step_px is 0 for variable-step paths (mesh planner output).
    terminated_by records why streamline integration stopped
    ("mask-exit" | "image-exit" | "step-cap") and is None for paths that
    were not produced by the streamline planner (for example loaded files).
    """

    points: np.ndarray
    step_px: float
    terminated_by: str | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
            raise ValueError(f"path points must have shape (n, 2) with n >= 1, got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("path points must be finite")
        if self.step_px < 0:
            raise ValueError("step_px must be >= 0")
        if self.terminated_by not in (None, "mask-exit", "image-exit", "step-cap"):
            raise ValueError(f"unknown termination reason {self.terminated_by!r}")
        object.__setattr__(self, "points", _freeze(pts))
        object.__setattr__(self, "step_px", float(self.step_px))

    def __len__(self):
        return self.points.shape[0]


@dataclass(frozen=True)
class PathMetrics:
    """Objective path-quality proxies.

    mean_alignment and mean_turn_rad are None when the path is too short
    to define them (fewer than 2 / 3 points).
    """

    length_px: float
    mean_alignment: float | None
    mean_turn_rad: float | None
    terminated_by: str | None = None

    def to_dict(self):
        return {
            "length_px": self.length_px,
            "mean_alignment": self.mean_alignment,
            "mean_turn_rad": self.mean_turn_rad,
            "terminated_by": self.terminated_by,
        }


@dataclass(frozen=True)
class DepthStats:
    """Median and population standard deviation of masked depths."""

    median_z: float
    std_z: float
    n: int


@dataclass(frozen=True)
class HairPlane:
    """Total-least-squares hair plane with camera-facing unit normal (normal_z < 0)."""

    centroid: np.ndarray
    normal: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.centroid, dtype=np.float64).reshape(3)
        n = np.asarray(self.normal, dtype=np.float64).reshape(3)
        if abs(np.linalg.norm(n) - 1.0) > 1e-9:
            raise ValueError("plane normal must be unit length")
        if not n[2] < 0.0:
            raise ValueError("plane normal must face the camera (normal_z < 0)")
        object.__setattr__(self, "centroid", _freeze(c))
        object.__setattr__(self, "normal", _freeze(n))


@dataclass(frozen=True)
class PosePath:
    """Timed 6-DoF end-effector poses.

    positions (n, 3) meters; quaternions (n, 4) unit, (w, x, y, z) with
    w >= 0; times (n,) seconds, strictly increasing from 0.
    """

    positions: np.ndarray
    quaternions: np.ndarray
    times: np.ndarray
    rotations: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.float64)
        qua = np.asarray(self.quaternions, dtype=np.float64)
        tms = np.asarray(self.times, dtype=np.float64)
        n = pos.shape[0]
        if pos.ndim != 2 or pos.shape[1] != 3 or n < 2:
            raise ValueError(f"positions must have shape (n >= 2, 3), got {pos.shape}")
        if qua.shape != (n, 4):
            raise DimensionMismatchError(f"quaternions shape {qua.shape} != ({n}, 4)")
        norms = np.linalg.norm(qua, axis=1)
        if not np.all(np.abs(norms - 1.0) <= 1e-6):
            raise ValueError("quaternions must be unit length")
        if tms.shape != (n,):
            raise DimensionMismatchError(f"times shape {tms.shape} != ({n},)")
        if not np.all(np.diff(tms) > 0.0):
            raise ValueError("times must be strictly increasing")
        rot = self.rotations
        if rot is not None:
            rot = np.asarray(rot, dtype=np.float64)
            if rot.shape != (n, 3, 3):
                raise DimensionMismatchError(f"rotations shape {rot.shape} != ({n}, 3, 3)")
            rot = _freeze(rot)
        object.__setattr__(self, "positions", _freeze(pos))
        object.__setattr__(self, "quaternions", _freeze(qua))
        object.__setattr__(self, "times", _freeze(tms))
        object.__setattr__(self, "rotations", rot)

    def __len__(self):
        return self.positions.shape[0]
