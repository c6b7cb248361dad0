"""Baseline planner: shortest path over the hair's organized point cloud.

Masked pixels with valid depth become graph vertices carrying their XYZ;
8-neighboring pixels are connected when their 3-D separation stays below
edge_max_m (so depth discontinuities are not bridged). Paths run from a
start vertex to the bottom band of the mask via A* with the straight-line
distance to the nearest goal vertex as the (admissible, consistent)
heuristic.
"""

import heapq
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .errors import EmptyGoalError, EmptyMaskError, StartOutsideHairError, UnreachableGoalError
from .model import PixelPath
from .validation import check_binary_mask, check_same_shape, in_bounds, nearest_pixel


@dataclass(frozen=True)
class HairGraph:
    """Undirected weighted grid graph over masked, depth-valid pixels.

    pixels: (n, 2) int vertex pixel coordinates (x, y), row-major order;
    xyz: (n, 3) vertex positions in meters; adjacency: per-vertex list of
    (neighbor index, 3-D distance) pairs; index: (h, w) map from pixel to
    vertex id (-1 where no vertex).
    """

    pixels: np.ndarray
    xyz: np.ndarray
    adjacency: list
    index: np.ndarray = field(repr=False, default=None)

    @property
    def n_vertices(self):
        return self.pixels.shape[0]


def build_graph(mask, cloud, edge_max_m=0.05):
    """Construct the HairGraph for a mask/cloud pair."""
    mask = check_binary_mask(mask)
    check_same_shape(("mask", mask), ("cloud", cloud.points))
    if edge_max_m <= 0:
        raise ValueError(f"edge_max_m must be > 0, got {edge_max_m}")
    usable = mask & cloud.valid
    if not usable.any():
        raise EmptyMaskError("no masked pixel has a valid depth")

    h, w = mask.shape
    index = np.full((h, w), -1, dtype=np.int64)
    ys, xs = np.nonzero(usable)
    index[ys, xs] = np.arange(ys.size)
    pixels = np.stack([xs, ys], axis=1)
    xyz = cloud.points[ys, xs]

    adjacency = [[] for _ in range(ys.size)]
    # forward offsets only; each surviving pair is added in both directions
    for dx, dy in ((1, 0), (0, 1), (1, 1), (1, -1)):
        y0, y1 = max(0, -dy), min(h, h - dy)
        x0, x1 = max(0, -dx), min(w, w - dx)
        a = index[y0:y1, x0:x1].ravel()
        b = index[y0 + dy : y1 + dy, x0 + dx : x1 + dx].ravel()
        both = (a >= 0) & (b >= 0)
        a, b = a[both], b[both]
        dist = np.linalg.norm(xyz[a] - xyz[b], axis=1)
        keep = (dist > 0.0) & (dist <= edge_max_m)
        for va, vb, d in zip(a[keep].tolist(), b[keep].tolist(), dist[keep].tolist()):
            adjacency[va].append((vb, d))
            adjacency[vb].append((va, d))
    return HairGraph(pixels=pixels, xyz=xyz, adjacency=adjacency, index=index)


def goal_set(graph, mask, goal_fraction=0.1):
    """Vertices in the bottom band of the mask's bounding box.

    A vertex is a goal when its row satisfies y >= y_max - frac * (y_max - y_min)
    over the mask's bounding rows.
    """
    mask = check_binary_mask(mask)
    if not 0.0 < goal_fraction <= 1.0:
        raise ValueError(f"goal_fraction must lie in (0, 1], got {goal_fraction}")
    rows = np.nonzero(mask.any(axis=1))[0]
    y_min, y_max = int(rows[0]), int(rows[-1])
    cut = y_max - goal_fraction * (y_max - y_min)
    goals = np.nonzero(graph.pixels[:, 1] >= cut)[0]
    if goals.size == 0:
        raise EmptyGoalError("no graph vertex lies in the goal band")
    return goals


def astar(graph, start, goals, record_expansions=None):
    """Minimal-cost vertex path from start to any goal vertex.

    Heuristic: straight-line distance to the nearest goal's XYZ. Ties at
    equal f-score break toward the smaller vertex index. Pass a list as
    record_expansions to collect (vertex, g) pairs as vertices are settled.
    Returns (vertex index list, total cost).
    """
    n = graph.n_vertices
    if not 0 <= start < n:
        raise ValueError(f"start vertex {start} out of range")
    goals = np.asarray(goals, dtype=np.int64)
    if goals.size == 0:
        raise EmptyGoalError("goal set is empty")
    goal_mask = np.zeros(n, dtype=bool)
    goal_mask[goals] = True

    tree = cKDTree(graph.xyz[goals])

    def h(v):
        return float(tree.query(graph.xyz[v])[0])

    g_best = {start: 0.0}
    parent = {start: -1}
    done = np.zeros(n, dtype=bool)
    frontier = [(h(start), start, 0.0)]
    while frontier:
        f, v, g = heapq.heappop(frontier)
        if done[v] or g > g_best.get(v, np.inf):
            continue
        done[v] = True
        if record_expansions is not None:
            record_expansions.append((v, g))
        if goal_mask[v]:
            path = []
            while v != -1:
                path.append(v)
                v = parent[v]
            return path[::-1], g
        for nid, wgt in graph.adjacency[v]:
            cand = g + wgt
            if cand < g_best.get(nid, np.inf):
                g_best[nid] = cand
                parent[nid] = v
                heapq.heappush(frontier, (cand + h(nid), nid, cand))
    raise UnreachableGoalError(f"no goal reachable from vertex {start}")


def to_pixel_path(vertex_path, graph):
    """Vertex indices to a PixelPath (step_px = 0: variable-step path)."""
    if len(vertex_path) == 0:
        raise ValueError("vertex path must be non-empty")
    pts = graph.pixels[np.asarray(vertex_path, dtype=np.int64)].astype(np.float64)
    return PixelPath(points=pts, step_px=0.0)


def plan_mesh(mask, cloud, start_xy, goal_fraction=0.1, edge_max_m=0.05):
    """End-to-end baseline plan from a pixel start point."""
    graph = build_graph(mask, cloud, edge_max_m)
    goals = goal_set(graph, mask, goal_fraction)
    px, py = nearest_pixel(float(start_xy[0]), float(start_xy[1]))
    if not in_bounds(px, py, mask.shape) or graph.index[py, px] < 0:
        raise StartOutsideHairError(f"start {start_xy} is not a hair vertex with valid depth")
    vertex_path, _ = astar(graph, int(graph.index[py, px]), goals)
    return to_pixel_path(vertex_path, graph)


class MeshPlanner(BaseEstimator):
    """fit builds the graph and goal set; predict plans from a start pixel."""

    def __init__(self, goal_fraction=0.1, edge_max_m=0.05):
        self.goal_fraction = goal_fraction
        self.edge_max_m = edge_max_m

    def fit(self, mask, cloud):
        mask = check_binary_mask(mask)
        self.graph_ = build_graph(mask, cloud, self.edge_max_m)
        self.goals_ = goal_set(self.graph_, mask, self.goal_fraction)
        self.mask_ = mask
        return self

    def predict(self, start):
        if not hasattr(self, "graph_"):
            raise NotFittedError("call fit(mask, cloud) before predict")
        px, py = nearest_pixel(float(start[0]), float(start[1]))
        if not in_bounds(px, py, self.mask_.shape) or self.graph_.index[py, px] < 0:
            raise StartOutsideHairError(f"start {start} is not a hair vertex with valid depth")
        vertex_path, _ = astar(self.graph_, int(self.graph_.index[py, px]), self.goals_)
        return to_pixel_path(vertex_path, self.graph_)
