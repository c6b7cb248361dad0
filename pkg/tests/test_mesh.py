import numpy as np
import pytest
from sklearn.exceptions import NotFittedError

from hairflow.errors import EmptyMaskError, StartOutsideHairError, UnreachableGoalError
from hairflow.mesh import MeshPlanner, astar, build_graph, goal_set, plan_mesh, to_pixel_path
from hairflow.model import OrganizedCloud

from oracles import dijkstra_all, dijkstra_multi_source


def _cloud(h, w, pitch=0.01, z=None, valid=None):
    xs = np.arange(w) * pitch
    ys = np.arange(h) * pitch
    gx, gy = np.meshgrid(xs, ys)
    zz = np.full((h, w), 1.0) if z is None else np.asarray(z, dtype=np.float64)
    pts = np.stack([gx, gy, zz], axis=2)
    if valid is None:
        valid = np.ones((h, w), dtype=bool)
    pts = np.where(valid[..., None], pts, np.nan)
    return OrganizedCloud(points=pts, valid=valid)


def _random_instance(rng, n=16, hole_p=0.25):
    """Random masked grid with jittered depths (unique shortest paths)."""
    mask = rng.uniform(size=(n, n)) > hole_p
    z = 1.0 + rng.uniform(-0.002, 0.002, size=(n, n))
    cloud = _cloud(n, n, z=z)
    return mask, cloud


class TestBuildGraph:
    def test_2x2_block_complete_adjacency(self):
        mask = np.ones((2, 2), dtype=bool)
        graph = build_graph(mask, _cloud(2, 2))
        assert graph.n_vertices == 4
        n_edges = sum(len(a) for a in graph.adjacency) // 2
        assert n_edges == 6  # 4 sides + 2 diagonals

    def test_depth_jump_cuts_edge(self):
        mask = np.ones((1, 2), dtype=bool)
        z = np.array([[1.0, 1.4]])
        graph = build_graph(mask, _cloud(1, 2, z=z), edge_max_m=0.05)
        assert all(len(a) == 0 for a in graph.adjacency)

    def test_invalid_center_excluded(self):
        mask = np.ones((3, 3), dtype=bool)
        valid = np.ones((3, 3), dtype=bool)
        valid[1, 1] = False
        graph = build_graph(mask, _cloud(3, 3, valid=valid))
        assert graph.n_vertices == 8
        assert graph.index[1, 1] == -1

    def test_weights_are_3d_distances(self):
        mask = np.ones((1, 2), dtype=bool)
        z = np.array([[1.0, 1.03]])
        graph = build_graph(mask, _cloud(1, 2, z=z))
        (nid, w), = graph.adjacency[0]
        assert nid == 1
        assert w == pytest.approx(np.hypot(0.01, 0.03), abs=1e-12)

    def test_empty_vertex_set_raises(self):
        with pytest.raises(EmptyMaskError):
            build_graph(np.zeros((3, 3), dtype=bool), _cloud(3, 3))


class TestGoalSet:
    def test_bottom_band(self):
        mask = np.ones((20, 4), dtype=bool)
        graph = build_graph(mask, _cloud(20, 4))
        goals = goal_set(graph, mask, goal_fraction=0.1)
        ys = graph.pixels[goals, 1]
        # rows 0..19: cut at 19 - 0.1*19 = 17.1, so rows 18 and 19
        assert set(ys.tolist()) == {18, 19}

    def test_goal_rows_follow_mask_bbox(self):
        mask = np.zeros((30, 4), dtype=bool)
        mask[5:15, :] = True
        graph = build_graph(mask, _cloud(30, 4))
        goals = goal_set(graph, mask, goal_fraction=0.1)
        assert set(graph.pixels[goals, 1].tolist()) == {14}


class TestAstar:
    def test_start_in_goal_set(self):
        mask = np.ones((10, 10), dtype=bool)
        graph = build_graph(mask, _cloud(10, 10))
        goals = goal_set(graph, mask)
        path, cost = astar(graph, int(goals[0]), goals)
        assert path == [int(goals[0])] and cost == 0.0

    def test_cost_matches_dijkstra_on_planar_grid(self):
        mask = np.ones((4, 4), dtype=bool)
        graph = build_graph(mask, _cloud(4, 4))
        goals = goal_set(graph, mask, goal_fraction=0.1)
        start = int(graph.index[0, 0])
        _, cost = astar(graph, start, goals)
        dist = dijkstra_all(graph.adjacency, start)
        assert cost == min(dist.get(int(g), np.inf) for g in goals)

    def test_detour_around_wall(self):
        mask = np.ones((8, 8), dtype=bool)
        mask[4, 0:7] = False  # wall with a gap at column 7
        graph = build_graph(mask, _cloud(8, 8))
        goals = goal_set(graph, mask, goal_fraction=0.1)
        start = int(graph.index[0, 0])
        path, cost = astar(graph, start, goals)
        dist = dijkstra_all(graph.adjacency, start)
        assert cost == min(dist.get(int(g), np.inf) for g in goals)
        cols = [int(graph.pixels[v, 0]) for v in path]
        assert 7 in cols  # forced through the gap

    def test_oracle_equivalence_on_random_instances(self, rng):
        hits = 0
        for _ in range(100):
            mask, cloud = _random_instance(rng)
            if not (mask & cloud.valid).any():
                continue
            graph = build_graph(mask, cloud)
            goals = goal_set(graph, mask)
            starts = rng.integers(0, graph.n_vertices, size=2)
            for start in starts:
                start = int(start)
                dist = dijkstra_all(graph.adjacency, start)
                best = min((dist.get(int(g), np.inf) for g in goals), default=np.inf)
                try:
                    _, cost = astar(graph, start, goals)
                except UnreachableGoalError:
                    assert best == np.inf
                    continue
                assert cost == best
                hits += 1
        assert hits > 100

    def test_heuristic_admissible_on_expansions(self, rng):
        from scipy.spatial import cKDTree

        for _ in range(10):
            mask, cloud = _random_instance(rng, n=12)
            if not (mask & cloud.valid).any():
                continue
            graph = build_graph(mask, cloud)
            goals = goal_set(graph, mask)
            dist_to_goal = dijkstra_multi_source(graph.adjacency, goals.tolist())
            tree = cKDTree(graph.xyz[goals])
            start = int(rng.integers(0, graph.n_vertices))
            expansions = []
            try:
                astar(graph, start, goals, record_expansions=expansions)
            except UnreachableGoalError:
                continue
            assert expansions
            for v, _ in expansions:
                if v in dist_to_goal:
                    h = float(tree.query(graph.xyz[v])[0])
                    assert h <= dist_to_goal[v] + 1e-9

    def test_path_edges_exist_and_costs_sum(self, rng):
        mask, cloud = _random_instance(rng)
        graph = build_graph(mask, cloud)
        goals = goal_set(graph, mask)
        start = int(rng.integers(0, graph.n_vertices))
        try:
            path, cost = astar(graph, start, goals)
        except UnreachableGoalError:
            pytest.skip("instance happened to be disconnected")
        total = 0.0
        for a, b in zip(path[:-1], path[1:]):
            weights = dict(graph.adjacency[a])
            assert b in weights
            total += weights[b]
        assert cost == pytest.approx(total, abs=1e-12)

    def test_flat_patch_paths_descend_monotonically(self):
        mask = np.ones((20, 20), dtype=bool)
        graph = build_graph(mask, _cloud(20, 20))
        goals = goal_set(graph, mask)
        for x in range(0, 20, 5):
            start = int(graph.index[0, x])
            path, _ = astar(graph, start, goals)
            ys = [int(graph.pixels[v, 1]) for v in path]
            assert all(b >= a for a, b in zip(ys, ys[1:]))

    def test_unreachable_raises(self):
        mask = np.ones((6, 1), dtype=bool)
        mask[3, 0] = False  # island above the goal band
        graph = build_graph(mask, _cloud(6, 1))
        goals = goal_set(graph, mask)
        with pytest.raises(UnreachableGoalError):
            astar(graph, int(graph.index[0, 0]), goals)


class TestToPixelPath:
    def test_single_vertex(self):
        mask = np.ones((3, 3), dtype=bool)
        graph = build_graph(mask, _cloud(3, 3))
        path = to_pixel_path([4], graph)
        assert len(path) == 1 and path.step_px == 0.0

    def test_vertical_chain_collinear(self):
        mask = np.ones((5, 1), dtype=bool)
        graph = build_graph(mask, _cloud(5, 1))
        path = to_pixel_path(list(range(5)), graph)
        assert np.all(path.points[:, 0] == 0.0)
        assert np.array_equal(path.points[:, 1], np.arange(5.0))

    def test_point_count_matches(self, rng):
        mask, cloud = _random_instance(rng)
        graph = build_graph(mask, cloud)
        goals = goal_set(graph, mask)
        try:
            vpath, _ = astar(graph, 0, goals)
        except UnreachableGoalError:
            pytest.skip("disconnected")
        assert len(to_pixel_path(vpath, graph)) == len(vpath)


class TestMeshPlannerEstimator:
    def test_plan_mesh_end_to_end(self):
        mask = np.ones((16, 16), dtype=bool)
        path = plan_mesh(mask, _cloud(16, 16), (8.0, 2.0))
        assert path.points[-1, 1] >= 14.0  # reaches the bottom band

    def test_start_must_be_vertex(self):
        mask = np.ones((8, 8), dtype=bool)
        valid = np.ones((8, 8), dtype=bool)
        valid[2, 2] = False
        cloud = _cloud(8, 8, valid=valid)
        with pytest.raises(StartOutsideHairError):
            plan_mesh(mask, cloud, (2.0, 2.0))

    def test_estimator_reuse(self):
        mask = np.ones((12, 12), dtype=bool)
        planner = MeshPlanner().fit(mask, _cloud(12, 12))
        p1 = planner.predict((3.0, 1.0))
        p2 = planner.predict((9.0, 1.0))
        assert p1.points[0, 0] == 3.0 and p2.points[0, 0] == 9.0
        with pytest.raises(NotFittedError):
            MeshPlanner().predict((0.0, 0.0))
