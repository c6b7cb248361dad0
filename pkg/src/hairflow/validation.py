"""Input validation helpers.

All rasters are numpy arrays in row-major image convention: axis 0 is y
(downward), axis 1 is x (rightward), origin at the top-left pixel.
Intensity is carried as float64 end to end; quantization to u8 happens
only at file export.
"""

import numpy as np

from .errors import DimensionMismatchError


def check_intensity(img):
    """Validate and return a grayscale image as a float64 (h, w) array."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"intensity image must be 2-D non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("intensity image contains non-finite values")
    return arr


def check_rgb(img):
    """Validate and return a color image as a float64 (h, w, 3) array in [0, 255]."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"rgb image must have shape (h, w, 3), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("rgb image contains non-finite values")
    if arr.min() < 0.0 or arr.max() > 255.0:
        raise ValueError("rgb channels must lie in [0, 255]")
    return arr


def check_soft_mask(mask):
    """Validate and return a soft mask as a float64 (h, w) array in [0, 1]."""
    arr = np.asarray(mask, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"soft mask must be 2-D non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("soft mask contains non-finite values")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("soft mask values must lie in [0, 1]")
    return arr


def check_binary_mask(mask):
    """Validate and return a binary mask as a bool (h, w) array."""
    arr = np.asarray(mask)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"binary mask must be 2-D non-empty, got shape {arr.shape}")
    if arr.dtype != np.bool_:
        if not np.all((arr == 0) | (arr == 1)):
            raise ValueError("binary mask values must be boolean or 0/1")
        arr = arr.astype(bool)
    return arr


def check_odd_kernel(size, name, image_shape=None):
    """Validate an odd kernel size >= 3, optionally against the image extent."""
    size = int(size)
    if size < 3 or size % 2 == 0:
        raise ValueError(f"{name} must be odd and >= 3, got {size}")
    if image_shape is not None and size > min(image_shape[:2]):
        raise ValueError(f"{name}={size} exceeds image extent {image_shape[:2]}")
    return size


def check_same_shape(*named_arrays):
    """Raise DimensionMismatchError unless all (name, array) pairs share (h, w)."""
    shapes = [(name, arr.shape[:2]) for name, arr in named_arrays]
    first_name, first = shapes[0]
    for name, shape in shapes[1:]:
        if shape != first:
            raise DimensionMismatchError(
                f"{name} shape {shape} does not match {first_name} shape {first}"
            )


def wrap_mod_pi(theta):
    """Wrap angles into [0, pi).

    np.mod of a tiny negative value rounds to pi itself; as a line
    orientation that is the same angle as 0, so it maps to 0.
    """
    t = np.mod(np.asarray(theta, dtype=np.float64), np.pi)
    return np.where(t >= np.pi, 0.0, t)


def nearest_pixel(x, y):
    """Round subpixel coordinates to the nearest pixel (half-up ties)."""
    return int(np.floor(x + 0.5)), int(np.floor(y + 0.5))


def in_bounds(px, py, shape):
    """True if integer pixel (px, py) lies inside a raster of shape (h, w)."""
    h, w = shape[:2]
    return 0 <= px < w and 0 <= py < h
