"""Temporal smoothing of per-frame segmentation masks.

An exponential moving average damps single-frame sensor noise while
letting slow mask changes (user movement) through: the first frame is
adopted verbatim, every later frame is blended in with weight alpha.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .errors import DimensionMismatchError
from .validation import check_soft_mask


def binarize(mask, threshold=0.5):
    """Threshold a soft mask; a pixel is hair iff value >= threshold."""
    mask = check_soft_mask(mask)
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    return mask >= threshold


class TemporalMaskFilter(BaseEstimator):
    """Streaming exponential smoother over a sequence of soft masks.

    Parameters
    ----------
    alpha : float in (0, 1]
        Blend weight of the newest frame. Higher alpha tracks movement
        faster; lower alpha suppresses more noise. Constant per stream.

    Attributes
    ----------
    accum_ : ndarray
        Current smoothed mask, set after the first partial_fit.
    t_ : int
        Number of frames consumed.
    """

    def __init__(self, alpha=0.9):
        self.alpha = alpha

    def partial_fit(self, frame):
        """Fold one frame into the running average and return self."""
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        frame = check_soft_mask(frame)
        if not hasattr(self, "accum_"):
            self.accum_ = frame.copy()
            self.t_ = 1
            return self
        if frame.shape != self.accum_.shape:
            raise DimensionMismatchError(
                f"frame shape {frame.shape} does not match stream shape {self.accum_.shape}"
            )
        self.accum_ = self.alpha * frame + (1.0 - self.alpha) * self.accum_
        # convex combination; clip away ulp-level excursions only
        np.clip(self.accum_, 0.0, 1.0, out=self.accum_)
        self.t_ += 1
        return self

    def fit(self, frames):
        """Consume an iterable of frames in order."""
        for frame in frames:
            self.partial_fit(frame)
        return self

    @property
    def soft_mask_(self):
        if not hasattr(self, "accum_"):
            raise NotFittedError("no frames consumed yet")
        return self.accum_

    def predict(self, threshold=0.5):
        """Binarize the current smoothed mask."""
        return binarize(self.soft_mask_, threshold)


def filter_stream(frames, alpha=0.9):
    """Run the exponential filter over a whole frame sequence."""
    filt = TemporalMaskFilter(alpha=alpha).fit(frames)
    return filt.soft_mask_


__all__ = ["TemporalMaskFilter", "binarize", "filter_stream"]
