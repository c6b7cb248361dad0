"""Color-space conversions used by the segmentation refinement stage."""

import numpy as np

from .validation import check_rgb


def to_grayscale(rgb):
    """Convert an (h, w, 3) image to intensity with BT.601 luma weights.

    Output stays float64 in [0, 255]; no quantization.
    """
    rgb = check_rgb(rgb)
    return 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]


def rgb_to_hue(rgb):
    """Per-pixel HSV hue in degrees [0, 360).

    Returns (hue, defined): achromatic pixels (max channel == min channel)
    have no hue; their entries are 0 with defined == False.
    """
    rgb = check_rgb(rgb)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    cmax = np.max(rgb, axis=2)
    cmin = np.min(rgb, axis=2)
    chroma = cmax - cmin
    defined = chroma > 0.0

    safe = np.where(defined, chroma, 1.0)
    hue = np.zeros(cmax.shape, dtype=np.float64)
    is_r = defined & (cmax == r)
    is_g = defined & ~is_r & (cmax == g)
    is_b = defined & ~is_r & ~is_g
    hue[is_r] = np.mod((g - b)[is_r] / safe[is_r], 6.0)
    hue[is_g] = (b - r)[is_g] / safe[is_g] + 2.0
    hue[is_b] = (r - g)[is_b] / safe[is_b] + 4.0
    hue *= 60.0
    hue = np.mod(hue, 360.0)
    hue[~defined] = 0.0
    return hue, defined
