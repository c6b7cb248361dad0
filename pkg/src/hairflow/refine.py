"""Spatial cleanup of a binary hair mask.

Three stages, applied once (no fixed-point iteration):
  1. keep the largest connected component,
  2. measure median depth and its spread over the surviving pixels,
  3. re-admit background pixels whose depth sits within two standard
     deviations of the median and whose hue falls in a bin the mask
     already occupies.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from sklearn.base import BaseEstimator

from .color import rgb_to_hue
from .errors import EmptyMaskError, NoValidDepthError
from .model import DepthStats
from .validation import check_binary_mask, check_rgb, check_same_shape

_STRUCT_4 = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
_STRUCT_8 = np.ones((3, 3), dtype=bool)

# achromatic candidates are depth-only tested when at least this share of
# mask pixels is itself achromatic (grey/black hair has no usable hue)
ACHROMATIC_MASK_FRACTION = 0.25


@dataclass(frozen=True)
class RefineParams:
    """Knobs for the depth/hue expansion stage."""

    connectivity: int = 8
    depth_sigma_mult: float = 2.0
    hue_bins: int = 36
    hue_occupancy_min: float = 0.01

    def __post_init__(self):
        if self.connectivity not in (4, 8):
            raise ValueError(f"connectivity must be 4 or 8, got {self.connectivity}")
        if self.depth_sigma_mult <= 0:
            raise ValueError("depth_sigma_mult must be > 0")
        if self.hue_bins < 1:
            raise ValueError("hue_bins must be >= 1")
        if not 0.0 <= self.hue_occupancy_min <= 1.0:
            raise ValueError("hue_occupancy_min must lie in [0, 1]")


def largest_component(mask, connectivity=8):
    """Keep exactly one connected component: the largest by pixel count.

    Ties go to the component containing the smallest row-major index.
    Raises EmptyMaskError on an all-false mask.
    """
    mask = check_binary_mask(mask)
    if connectivity not in (4, 8):
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    if not mask.any():
        raise EmptyMaskError("mask has no true pixel")
    structure = _STRUCT_8 if connectivity == 8 else _STRUCT_4
    labels, count = ndimage.label(mask, structure=structure)
    if count == 1:
        return mask.copy()
    flat = labels.ravel()
    ids, first_index = np.unique(flat, return_index=True)
    sizes = np.bincount(flat)
    keep = (ids != 0) & (sizes[ids] == sizes[ids[ids != 0]].max())
    # among maximal components, smallest first-seen row-major index wins
    winner = ids[keep][np.argmin(first_index[keep])]
    return labels == winner


def depth_stats(mask, cloud):
    """Median and population std of z over masked pixels with valid depth."""
    mask = check_binary_mask(mask)
    check_same_shape(("mask", mask), ("cloud", cloud.points))
    usable = mask & cloud.valid
    if not usable.any():
        raise NoValidDepthError("no masked pixel has a valid depth")
    z = cloud.points[..., 2][usable]
    return DepthStats(median_z=float(np.median(z)), std_z=float(np.std(z)), n=int(z.size))


def _hue_bin_occupancy(hue, defined, mask, bins):
    """Fraction of chromatic mask pixels per circular hue bin."""
    chromatic = mask & defined
    counts = np.zeros(bins, dtype=np.int64)
    n = int(chromatic.sum())
    if n:
        idx = np.minimum((hue[chromatic] * bins / 360.0).astype(np.int64), bins - 1)
        counts = np.bincount(idx, minlength=bins)
    return counts / max(n, 1), n


def expand(mask, cloud, rgb, params=RefineParams()):
    """Re-admit false-negative pixels around an existing mask.

    A background pixel joins the mask iff it has a valid depth within
    depth_sigma_mult standard deviations of the mask's median depth AND
    its hue lands in a bin holding at least hue_occupancy_min of the
    mask's chromatic pixels. Achromatic candidates pass the hue test
    only when the mask itself is substantially achromatic. Statistics
    come from the input mask alone, so output is a superset of input.
    """
    mask = check_binary_mask(mask)
    rgb = check_rgb(rgb)
    check_same_shape(("mask", mask), ("cloud", cloud.points), ("rgb", rgb))
    stats = depth_stats(mask, cloud)

    z = cloud.points[..., 2]
    depth_ok = cloud.valid & (np.abs(z - stats.median_z) <= params.depth_sigma_mult * stats.std_z)

    hue, defined = rgb_to_hue(rgb)
    occupancy, _ = _hue_bin_occupancy(hue, defined, mask, params.hue_bins)
    bin_open = occupancy >= params.hue_occupancy_min
    bin_of = np.minimum((hue * params.hue_bins / 360.0).astype(np.int64), params.hue_bins - 1)
    hue_ok = defined & bin_open[bin_of]

    mask_achromatic_frac = float((mask & ~defined).sum()) / float(mask.sum())
    if mask_achromatic_frac >= ACHROMATIC_MASK_FRACTION:
        hue_ok = hue_ok | ~defined

    return mask | (depth_ok & hue_ok)


def refine_mask(mask, cloud, rgb, params=RefineParams()):
    """Full spatial refinement: largest component, then depth/hue expansion."""
    return expand(largest_component(mask, params.connectivity), cloud, rgb, params)


class MaskRefiner(BaseEstimator):
    """Estimator wrapper around refine_mask with sklearn-style params."""

    def __init__(self, connectivity=8, depth_sigma_mult=2.0, hue_bins=36, hue_occupancy_min=0.01):
        self.connectivity = connectivity
        self.depth_sigma_mult = depth_sigma_mult
        self.hue_bins = hue_bins
        self.hue_occupancy_min = hue_occupancy_min

    def _params(self):
        return RefineParams(
            connectivity=self.connectivity,
            depth_sigma_mult=self.depth_sigma_mult,
            hue_bins=self.hue_bins,
            hue_occupancy_min=self.hue_occupancy_min,
        )

    def fit(self, mask=None, y=None):
        """Stateless; present for estimator-API compatibility."""
        return self

    def refine(self, mask, cloud, rgb):
        return refine_mask(mask, cloud, rgb, self._params())
