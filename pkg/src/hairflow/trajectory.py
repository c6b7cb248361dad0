"""Lift a pixel path into timed 6-DoF end-effector poses.

The comb frame at each path point: z-axis points into the hair (opposite
the camera-facing hair-plane normal), y-axis follows the path tangent
projected onto the hair plane (centered differences, one-sided at the
ends), x-axis completes the right-handed triad. Times assume constant
Cartesian speed.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .errors import (
    DegeneratePlaneError,
    DegenerateTangentError,
    PathOutOfBoundsError,
    TooFewPointsError,
    ZeroLengthSegmentError,
)
from .model import HairPlane, PosePath
from .validation import check_binary_mask, check_same_shape

_TANGENT_EPS = 1e-9


@dataclass(frozen=True)
class TrajectoryParams:
    """Cartesian speed and the search radius for missing-depth pixels."""

    speed_mps: float = 0.03
    lookup_radius_px: int = 5

    def __post_init__(self):
        if self.speed_mps <= 0:
            raise ValueError(f"speed_mps must be > 0, got {self.speed_mps}")
        if self.lookup_radius_px < 0:
            raise ValueError(f"lookup_radius_px must be >= 0, got {self.lookup_radius_px}")


def fit_plane(mask, cloud):
    """Total-least-squares plane over masked valid points.

    Normal is the covariance eigenvector of the smallest eigenvalue,
    sign-fixed to face the camera (normal_z < 0).
    """
    mask = check_binary_mask(mask)
    check_same_shape(("mask", mask), ("cloud", cloud.points))
    pts = cloud.points[mask & cloud.valid]
    if pts.shape[0] < 3:
        raise DegeneratePlaneError(f"need >= 3 masked valid points, got {pts.shape[0]}")
    centroid = pts.mean(axis=0)
    centered = pts - centroid
    cov = centered.T @ centered / pts.shape[0]
    eigvals, eigvecs = np.linalg.eigh(cov)
    # rank check: collinear points leave two vanishing eigenvalues
    if eigvals[2] <= 0.0 or eigvals[1] <= 1e-10 * eigvals[2]:
        raise DegeneratePlaneError("masked points do not span a plane")
    normal = eigvecs[:, 0]
    if normal[2] > 0.0:
        normal = -normal
    elif normal[2] == 0.0:
        raise DegeneratePlaneError("plane normal is perpendicular to the view axis")
    normal = normal / np.linalg.norm(normal)
    return HairPlane(centroid=centroid, normal=normal)


def _nearest_valid(cloud, px, py, radius):
    """Nearest valid pixel within a Euclidean radius; ties take the smaller
    row-major index. Returns None when the whole neighborhood is invalid."""
    h, w = cloud.shape
    best = None
    for ny in range(max(0, py - radius), min(h, py + radius + 1)):
        for nx in range(max(0, px - radius), min(w, px + radius + 1)):
            if not cloud.valid[ny, nx]:
                continue
            d2 = (nx - px) ** 2 + (ny - py) ** 2
            if d2 > radius * radius:
                continue
            key = (d2, ny * w + nx)
            if best is None or key < best[0]:
                best = (key, (ny, nx))
    return None if best is None else best[1]


def path_xyz(path, cloud, params=TrajectoryParams()):
    """XYZ for each path point from the cloud at its nearest pixel.

    Invalid pixels fall back to the nearest valid pixel within
    lookup_radius_px; unresolvable points are dropped. Raises
    TooFewPointsError when fewer than 2 points survive.
    """
    h, w = cloud.shape
    out = []
    for x, y in path.points:
        px, py = int(np.floor(x + 0.5)), int(np.floor(y + 0.5))
        if not (0 <= px < w and 0 <= py < h):
            raise PathOutOfBoundsError(f"path point ({x}, {y}) rounds outside the cloud")
        if cloud.valid[py, px]:
            out.append(cloud.points[py, px])
            continue
        hit = _nearest_valid(cloud, px, py, params.lookup_radius_px)
        if hit is not None:
            out.append(cloud.points[hit])
    if len(out) < 2:
        raise TooFewPointsError(f"only {len(out)} path points resolved to 3-D")
    return np.array(out, dtype=np.float64)


def frames(xyz, plane):
    """Orthonormal end-effector rotations along a 3-D path.

    Columns are [x, y, z]: z = -normal, y = in-plane tangent
    (p_{t-1} - p_{t+1}, one-sided at endpoints), x = y cross z.
    """
    xyz = np.asarray(xyz, dtype=np.float64)
    if xyz.ndim != 2 or xyz.shape[1] != 3 or xyz.shape[0] < 2:
        raise ValueError(f"need (n >= 2, 3) points, got {xyz.shape}")
    n = xyz.shape[0]
    normal = plane.normal

    tangents = np.empty_like(xyz)
    tangents[0] = xyz[0] - xyz[1]
    tangents[-1] = xyz[-2] - xyz[-1]
    if n > 2:
        tangents[1:-1] = xyz[:-2] - xyz[2:]

    rots = np.empty((n, 3, 3), dtype=np.float64)
    z_axis = -normal
    for i in range(n):
        v = tangents[i]
        proj = v - (v @ normal) * normal
        norm = np.linalg.norm(proj)
        if norm < _TANGENT_EPS:
            raise DegenerateTangentError(i)
        y_axis = proj / norm
        x_axis = np.cross(y_axis, z_axis)
        rots[i, :, 0] = x_axis
        rots[i, :, 1] = y_axis
        rots[i, :, 2] = z_axis
    return rots


def time_parameterize(xyz, params=TrajectoryParams()):
    """Cumulative arc length over constant Cartesian speed; t_0 = 0."""
    xyz = np.asarray(xyz, dtype=np.float64)
    seg = np.linalg.norm(np.diff(xyz, axis=0), axis=1)
    zero = np.nonzero(seg == 0.0)[0]
    if zero.size:
        raise ZeroLengthSegmentError(int(zero[0]) + 1)
    return np.concatenate([[0.0], np.cumsum(seg)]) / params.speed_mps


def rotation_to_quaternion(rot):
    """Unit quaternion (w, x, y, z) with w >= 0 from a rotation matrix."""
    m = np.asarray(rot, dtype=np.float64)
    t = np.trace(m)
    if t > 0.0:
        s = np.sqrt(t + 1.0) * 2.0
        q = np.array([0.25 * s, (m[2, 1] - m[1, 2]) / s, (m[0, 2] - m[2, 0]) / s,
                      (m[1, 0] - m[0, 1]) / s])
    elif m[0, 0] >= m[1, 1] and m[0, 0] >= m[2, 2]:
        s = np.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2]) * 2.0
        q = np.array([(m[2, 1] - m[1, 2]) / s, 0.25 * s, (m[0, 1] + m[1, 0]) / s,
                      (m[0, 2] + m[2, 0]) / s])
    elif m[1, 1] >= m[2, 2]:
        s = np.sqrt(1.0 + m[1, 1] - m[0, 0] - m[2, 2]) * 2.0
        q = np.array([(m[0, 2] - m[2, 0]) / s, (m[0, 1] + m[1, 0]) / s, 0.25 * s,
                      (m[2, 1] + m[1, 2]) / s])
    else:
        s = np.sqrt(1.0 + m[2, 2] - m[0, 0] - m[1, 1]) * 2.0
        q = np.array([(m[1, 0] - m[0, 1]) / s, (m[0, 2] + m[2, 0]) / s,
                      (m[2, 1] + m[1, 2]) / s, 0.25 * s])
    q /= np.linalg.norm(q)
    if q[0] < 0.0 or (q[0] == 0.0 and (q[1] < 0.0 or (q[1] == 0.0 and (q[2] < 0.0 or (q[2] == 0.0 and q[3] < 0.0))))):
        q = -q
    return q


def quaternion_to_rotation(q):
    """Rotation matrix from a unit quaternion (w, x, y, z)."""
    w, x, y, z = np.asarray(q, dtype=np.float64)
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def generate(path, mask, cloud, params=TrajectoryParams()):
    """Full trajectory: plane fit, 3-D lift, frames, constant-speed timing."""
    plane = fit_plane(mask, cloud)
    xyz = path_xyz(path, cloud, params)
    rots = frames(xyz, plane)
    times = time_parameterize(xyz, params)
    quats = np.array([rotation_to_quaternion(r) for r in rots])
    return PosePath(positions=xyz, quaternions=quats, times=times, rotations=rots)


def apply_extrinsic(poses, rotation, translation):
    """Re-express a camera-frame PosePath through a rigid camera-to-robot transform."""
    r = np.asarray(rotation, dtype=np.float64).reshape(3, 3)
    t = np.asarray(translation, dtype=np.float64).reshape(3)
    if abs(np.linalg.det(r) - 1.0) > 1e-9:
        raise ValueError("extrinsic rotation must be proper (det = +1)")
    positions = poses.positions @ r.T + t
    rots_in = poses.rotations
    if rots_in is None:
        rots_in = np.stack([quaternion_to_rotation(q) for q in poses.quaternions])
    rots = np.einsum("ij,njk->nik", r, rots_in)
    quats = np.array([rotation_to_quaternion(m) for m in rots])
    return PosePath(positions=positions, quaternions=quats, times=poses.times.copy(),
                    rotations=rots)


class TrajectoryGenerator(BaseEstimator):
    """fit on the scene (mask + cloud), transform pixel paths to pose paths."""

    def __init__(self, speed_mps=0.03, lookup_radius_px=5):
        self.speed_mps = speed_mps
        self.lookup_radius_px = lookup_radius_px

    def _params(self):
        return TrajectoryParams(speed_mps=self.speed_mps, lookup_radius_px=self.lookup_radius_px)

    def fit(self, mask, cloud):
        self.plane_ = fit_plane(mask, cloud)
        self.cloud_ = cloud
        return self

    def transform(self, path):
        if not hasattr(self, "plane_"):
            raise NotFittedError("call fit(mask, cloud) before transform")
        params = self._params()
        xyz = path_xyz(path, self.cloud_, params)
        rots = frames(xyz, self.plane_)
        times = time_parameterize(xyz, params)
        quats = np.array([rotation_to_quaternion(r) for r in rots])
        return PosePath(positions=xyz, quaternions=quats, times=times, rotations=rots)
