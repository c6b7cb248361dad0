import numpy as np
import pytest

from hairflow.errors import (
    DegeneratePlaneError,
    DegenerateTangentError,
    PathOutOfBoundsError,
    TooFewPointsError,
    ZeroLengthSegmentError,
)
from hairflow.model import OrganizedCloud, PixelPath
from hairflow.trajectory import (
    TrajectoryGenerator,
    TrajectoryParams,
    apply_extrinsic,
    fit_plane,
    frames,
    generate,
    path_xyz,
    quaternion_to_rotation,
    rotation_to_quaternion,
    time_parameterize,
)


def _cloud_from_points(pts, valid=None):
    pts = np.asarray(pts, dtype=np.float64)
    if valid is None:
        valid = np.ones(pts.shape[:2], dtype=bool)
    return OrganizedCloud(points=np.where(valid[..., None], pts, np.nan), valid=valid)


def _flat_scene(h=8, w=8, z=1.0):
    xs = (np.arange(w) - w / 2) * 0.01
    ys = (np.arange(h) - h / 2) * 0.01
    gx, gy = np.meshgrid(xs, ys)
    pts = np.stack([gx, gy, np.full_like(gx, z)], axis=2)
    return np.ones((h, w), dtype=bool), _cloud_from_points(pts)


class TestFitPlane:
    def test_flat_z_plane(self):
        mask, cloud = _flat_scene(z=1.0)
        plane = fit_plane(mask, cloud)
        assert np.allclose(plane.normal, [0.0, 0.0, -1.0], atol=1e-12)
        assert plane.centroid[2] == pytest.approx(1.0, abs=1e-12)

    def test_tilted_plane_x_plus_z(self):
        # points on x + z = 2: normal proportional to (1, 0, 1), resolved
        # to the camera-facing sign (-sqrt(2)/2, 0, -sqrt(2)/2)
        h = w = 6
        xs = np.linspace(-0.5, 0.5, w)
        ys = np.linspace(-0.5, 0.5, h)
        gx, gy = np.meshgrid(xs, ys)
        pts = np.stack([gx, gy, 2.0 - gx], axis=2)
        plane = fit_plane(np.ones((h, w), dtype=bool), _cloud_from_points(pts))
        s = np.sqrt(2) / 2
        assert np.allclose(plane.normal, [-s, 0.0, -s], atol=1e-9)

    def test_collinear_points_degenerate(self):
        pts = np.zeros((1, 3, 3))
        pts[0, :, 0] = [0.0, 1.0, 2.0]
        pts[0, :, 2] = 1.0
        with pytest.raises(DegeneratePlaneError):
            fit_plane(np.ones((1, 3), dtype=bool), _cloud_from_points(pts))

    def test_too_few_points(self):
        mask, cloud = _flat_scene()
        few = np.zeros_like(mask)
        few[0, 0] = few[0, 1] = True
        with pytest.raises(DegeneratePlaneError):
            fit_plane(few, cloud)

    def test_rotation_equivariance(self, rng):
        mask, cloud = _flat_scene(16, 16)
        angle = 0.3
        rot = np.array([[1, 0, 0],
                        [0, np.cos(angle), -np.sin(angle)],
                        [0, np.sin(angle), np.cos(angle)]])
        base = fit_plane(mask, cloud)
        rotated = _cloud_from_points(cloud.points @ rot.T)
        plane = fit_plane(mask, rotated)
        expect = rot @ base.normal
        if expect[2] > 0:
            expect = -expect
        assert np.allclose(plane.normal, expect, atol=1e-9)


class TestPathXyz:
    def test_all_valid_order_preserved(self):
        mask, cloud = _flat_scene()
        path = PixelPath(points=np.array([[1.0, 1.0], [3.0, 1.0], [5.0, 1.0]]), step_px=2.0)
        xyz = path_xyz(path, cloud)
        assert xyz.shape == (3, 3)
        assert np.array_equal(xyz[0], cloud.points[1, 1])
        assert np.array_equal(xyz[2], cloud.points[1, 5])

    def test_invalid_pixel_takes_nearest_valid_neighbor(self):
        mask, cloud = _flat_scene()
        valid = cloud.valid.copy()
        valid[1, 3] = False
        cloud2 = _cloud_from_points(cloud.points.copy(), valid)
        path = PixelPath(points=np.array([[1.0, 1.0], [3.0, 1.0]]), step_px=2.0)
        xyz = path_xyz(path, cloud2, TrajectoryParams(lookup_radius_px=5))
        # nearest valid to (3, 1): distance-1 candidates (2,1),(4,1),(3,0),(3,2);
        # the smallest row-major index among them is (x=3, y=0)
        assert np.array_equal(xyz[1], cloud2.points[0, 3])

    def test_unresolvable_points_dropped(self):
        mask, cloud = _flat_scene(12, 12)
        valid = cloud.valid.copy()
        valid[4:9, 4:9] = False  # hole wider than radius 1
        cloud2 = _cloud_from_points(cloud.points.copy(), valid)
        path = PixelPath(points=np.array([[1.0, 1.0], [6.0, 6.0], [2.0, 1.0]]), step_px=1.0)
        xyz = path_xyz(path, cloud2, TrajectoryParams(lookup_radius_px=1))
        assert xyz.shape == (2, 3)

    def test_too_few_resolvable(self):
        mask, cloud = _flat_scene()
        valid = np.zeros_like(cloud.valid)
        valid[0, 0] = True
        cloud2 = _cloud_from_points(cloud.points.copy(), valid)
        path = PixelPath(points=np.array([[0.0, 0.0], [5.0, 5.0]]), step_px=1.0)
        with pytest.raises(TooFewPointsError):
            path_xyz(path, cloud2, TrajectoryParams(lookup_radius_px=0))

    def test_out_of_bounds_point_raises(self):
        mask, cloud = _flat_scene()
        path = PixelPath(points=np.array([[0.0, 0.0], [50.0, 0.0]]), step_px=1.0)
        with pytest.raises(PathOutOfBoundsError):
            path_xyz(path, cloud)


class TestFrames:
    def test_hand_case_flat_plane(self):
        from hairflow.model import HairPlane

        plane = HairPlane(centroid=[0.0, 0.0, 1.0], normal=[0.0, 0.0, -1.0])
        xyz = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 1.0], [2.0, 0.0, 1.0]])
        rots = frames(xyz, plane)
        # interior tangent p0 - p2 = (-2, 0, 0): EE_y = (-1, 0, 0); EE_z = (0, 0, 1);
        # EE_x = EE_y x EE_z = (0, 1, 0) completes the right-handed triad
        assert np.allclose(rots[1][:, 1], [-1.0, 0.0, 0.0], atol=1e-12)
        assert np.allclose(rots[1][:, 2], [0.0, 0.0, 1.0], atol=1e-12)
        assert np.allclose(rots[1][:, 0], [0.0, 1.0, 0.0], atol=1e-12)
        assert np.linalg.det(rots[1]) == pytest.approx(1.0, abs=1e-12)

    def test_in_plane_tangent_unchanged_by_projection(self):
        from hairflow.model import HairPlane

        plane = HairPlane(centroid=[0.0, 0.0, 1.0], normal=[0.0, 0.0, -1.0])
        xyz = np.array([[0.0, 0.0, 1.0], [0.0, 2.0, 1.0]])
        rots = frames(xyz, plane)
        assert np.allclose(rots[0][:, 1], [0.0, -1.0, 0.0], atol=1e-12)

    def test_tangent_parallel_to_normal_degenerate(self):
        from hairflow.model import HairPlane

        plane = HairPlane(centroid=[0.0, 0.0, 1.0], normal=[0.0, 0.0, -1.0])
        xyz = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 2.0]])
        with pytest.raises(DegenerateTangentError):
            frames(xyz, plane)

    def test_randomized_orthonormality(self, rng):
        from hairflow.model import HairPlane

        for _ in range(200):
            normal = rng.normal(size=3)
            normal /= np.linalg.norm(normal)
            if normal[2] > 0:
                normal = -normal
            if abs(normal[2]) < 1e-3:
                continue
            plane = HairPlane(centroid=rng.normal(size=3) + [0, 0, 2], normal=normal)
            n_pts = int(rng.integers(2, 12))
            xyz = rng.normal(size=(n_pts, 3))
            try:
                rots = frames(xyz, plane)
            except DegenerateTangentError:
                continue
            for rot in rots:
                assert np.abs(rot.T @ rot - np.eye(3)).max() < 1e-9
                assert np.linalg.det(rot) == pytest.approx(1.0, abs=1e-9)
                assert rot[:, 2] @ normal == pytest.approx(-1.0, abs=1e-9)
                assert rot[:, 1] @ normal == pytest.approx(0.0, abs=1e-9)


class TestTimeParameterize:
    def test_two_points(self):
        xyz = np.array([[0.0, 0.0, 1.0], [0.03, 0.0, 1.0]])
        times = time_parameterize(xyz, TrajectoryParams(speed_mps=0.03))
        assert np.allclose(times, [0.0, 1.0], atol=1e-12)

    def test_three_collinear_centimeters(self):
        xyz = np.array([[0.0, 0.0, 1.0], [0.01, 0.0, 1.0], [0.02, 0.0, 1.0]])
        times = time_parameterize(xyz, TrajectoryParams(speed_mps=0.01))
        assert np.allclose(times, [0.0, 1.0, 2.0], atol=1e-12)

    def test_doubling_speed_halves_times(self, rng):
        xyz = rng.normal(size=(6, 3))
        t1 = time_parameterize(xyz, TrajectoryParams(speed_mps=0.02))
        t2 = time_parameterize(xyz, TrajectoryParams(speed_mps=0.04))
        assert np.allclose(t1, 2.0 * t2, rtol=1e-12)

    def test_duplicate_point_raises(self):
        xyz = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [0.01, 0.0, 1.0]])
        with pytest.raises(ZeroLengthSegmentError) as exc:
            time_parameterize(xyz)
        assert exc.value.index == 1

    def test_duration_equals_length_over_speed(self, rng):
        xyz = rng.normal(size=(10, 3))
        params = TrajectoryParams(speed_mps=0.05)
        times = time_parameterize(xyz, params)
        length = np.linalg.norm(np.diff(xyz, axis=0), axis=1).sum()
        assert times[-1] == pytest.approx(length / 0.05, rel=1e-12)


class TestQuaternions:
    def test_identity(self):
        q = rotation_to_quaternion(np.eye(3))
        assert np.allclose(q, [1.0, 0.0, 0.0, 0.0], atol=1e-12)

    def test_round_trip(self, rng):
        from scipy.spatial.transform import Rotation

        for _ in range(100):
            rot = Rotation.random(random_state=int(rng.integers(1 << 30))).as_matrix()
            q = rotation_to_quaternion(rot)
            assert q[0] >= 0.0
            assert np.abs(np.linalg.norm(q) - 1.0) < 1e-12
            back = quaternion_to_rotation(q)
            assert np.abs(back - rot).max() < 1e-9
            q2 = rotation_to_quaternion(back)
            assert np.abs(q2 - q).max() < 1e-9

    def test_matches_scipy_oracle(self, rng):
        from scipy.spatial.transform import Rotation

        for _ in range(50):
            rot = Rotation.random(random_state=int(rng.integers(1 << 30)))
            mine = rotation_to_quaternion(rot.as_matrix())
            x, y, z, w = rot.as_quat()
            ref = np.array([w, x, y, z])
            if ref[0] < 0:
                ref = -ref
            assert np.abs(mine - ref).max() < 1e-9


class TestGenerate:
    def test_flat_scene_straight_path(self):
        mask, cloud = _flat_scene(16, 16)
        path = PixelPath(points=np.array([[2.0, 8.0], [6.0, 8.0], [10.0, 8.0]]), step_px=4.0)
        poses = generate(path, mask, cloud, TrajectoryParams(speed_mps=0.01))
        assert len(poses) == 3
        # flat sheet + straight stroke: identical rotations, collinear positions
        assert np.abs(poses.rotations - poses.rotations[0]).max() < 1e-12
        d = np.diff(poses.positions, axis=0)
        assert np.abs(np.cross(d[0], d[1])).max() < 1e-12
        assert np.all(np.diff(poses.times) > 0)

    def test_quaternions_canonical_and_consistent(self):
        mask, cloud = _flat_scene(16, 16)
        path = PixelPath(points=np.array([[2.0, 4.0], [6.0, 7.0], [10.0, 10.0]]), step_px=5.0)
        poses = generate(path, mask, cloud)
        for q, rot in zip(poses.quaternions, poses.rotations):
            assert q[0] >= 0
            assert np.abs(quaternion_to_rotation(q) - rot).max() < 1e-9

    def test_estimator_wrapper(self):
        mask, cloud = _flat_scene(16, 16)
        gen = TrajectoryGenerator(speed_mps=0.02).fit(mask, cloud)
        path = PixelPath(points=np.array([[2.0, 8.0], [8.0, 8.0]]), step_px=6.0)
        poses = gen.transform(path)
        assert len(poses) == 2
        assert gen.get_params()["speed_mps"] == 0.02


def test_apply_extrinsic_preserves_shape_and_times(rng):
    mask, cloud = _flat_scene(16, 16)
    path = PixelPath(points=np.array([[2.0, 8.0], [8.0, 8.0], [12.0, 9.0]]), step_px=6.0)
    poses = generate(path, mask, cloud)
    angle = 0.4
    rot = np.array([[np.cos(angle), -np.sin(angle), 0],
                    [np.sin(angle), np.cos(angle), 0],
                    [0, 0, 1]])
    moved = apply_extrinsic(poses, rot, [0.1, -0.2, 0.05])
    assert np.array_equal(moved.times, poses.times)
    d_before = np.linalg.norm(np.diff(poses.positions, axis=0), axis=1)
    d_after = np.linalg.norm(np.diff(moved.positions, axis=0), axis=1)
    assert np.allclose(d_before, d_after, rtol=1e-12)
