"""hairflow: hair-flow orientation fields, stroke planning, and pose trajectories.

Pipeline stages (each usable on its own):
    temporal     exponential smoothing of streamed segmentation masks
    refine       largest-component + depth/hue mask expansion
    filters      coherence-enhancing shock filter
    orientation  structure-tensor hair-flow angles with coherence
    planning     streamline stroke integration from a start point
    mesh         A* shortest-path baseline over the hair cloud
    trajectory   timed 6-DoF end-effector poses along a stroke
    synth        analytic synthetic scenes and planner comparison
"""

from .color import rgb_to_hue, to_grayscale
from .errors import (
    DegeneratePlaneError,
    DegenerateTangentError,
    DimensionMismatchError,
    DimensionOverflowError,
    EmptyGoalError,
    EmptyMaskError,
    FormatError,
    HairflowError,
    MalformedHeaderError,
    NoValidDepthError,
    PathOutOfBoundsError,
    StartOutsideHairError,
    TooFewPointsError,
    TruncatedPayloadError,
    UnreachableGoalError,
    ZeroLengthSegmentError,
)
from .filters import CoherenceParams, CoherenceShockFilter, shock_iterate
from .mesh import HairGraph, MeshPlanner, astar, build_graph, goal_set, plan_mesh, to_pixel_path
from .model import (
    DepthStats,
    HairPlane,
    OrganizedCloud,
    OrientationField,
    PathMetrics,
    PixelPath,
    PosePath,
)
from .orientation import (
    OrientationFieldEstimator,
    OrientationParams,
    field_from_image,
    orientation,
    orientation_from_image,
    structure_tensor,
)
from .planning import FieldPlanner, PathParams, metrics, plan
from .refine import MaskRefiner, RefineParams, depth_stats, expand, largest_component, refine_mask
from .synth import SyntheticSpec, compare_planners, generate as generate_scene
from .temporal import TemporalMaskFilter, binarize, filter_stream
from .trajectory import (
    TrajectoryGenerator,
    TrajectoryParams,
    fit_plane,
    frames,
    generate as generate_trajectory,
    path_xyz,
    time_parameterize,
)

__version__ = "0.1.0"
