"""Hair-flow orientation from the gradient structure tensor.

The flow angle theta at a pixel is perpendicular to the dominant local
gradient direction:

    theta = 0.5 * atan2(j12 + j21, j11 - j22) + pi/2,  wrapped to [0, pi)

where J is the box-averaged outer product of the image gradient. A
coherence map (normalized eigenvalue gap) marks how oriented the local
texture is; theta is still defined (pi/2) but meaningless where
coherence is 0.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .filters import CoherenceParams, box_mean, shock_iterate, sobel
from .model import OrientationField
from .validation import check_intensity, check_odd_kernel, wrap_mod_pi


@dataclass(frozen=True)
class OrientationParams:
    """Derivative and averaging window sizes for the structure tensor."""

    k_delta: int = 3
    k_avg: int = 5

    def __post_init__(self):
        check_odd_kernel(self.k_delta, "k_delta")
        check_odd_kernel(self.k_avg, "k_avg")


@dataclass(frozen=True)
class StructureTensorField:
    """Box-averaged gradient outer products (j12 == j21 by construction)."""

    j11: np.ndarray
    j12: np.ndarray
    j22: np.ndarray

    @property
    def j21(self):
        return self.j12


def structure_tensor(img, params=OrientationParams()):
    """Gradient structure tensor, box-averaged with replicate padding."""
    img = check_intensity(img)
    check_odd_kernel(params.k_delta, "k_delta", img.shape)
    check_odd_kernel(params.k_avg, "k_avg", img.shape)
    gx = sobel(img, "x", params.k_delta)
    gy = sobel(img, "y", params.k_delta)
    return StructureTensorField(
        j11=box_mean(gx * gx, params.k_avg),
        j12=box_mean(gx * gy, params.k_avg),
        j22=box_mean(gy * gy, params.k_avg),
    )


def orientation(tensor):
    """Flow angle in [0, pi) plus coherence from a structure tensor field."""
    j11, j12, j22 = tensor.j11, tensor.j12, tensor.j22
    theta = wrap_mod_pi(0.5 * np.arctan2(j12 + tensor.j21, j11 - j22) + 0.5 * np.pi)

    trace = j11 + j22
    gap = np.sqrt((j11 - j22) ** 2 + (j12 + tensor.j21) ** 2)
    coherence = np.where(trace > 0.0, gap / np.where(trace > 0.0, trace, 1.0), 0.0)
    np.clip(coherence, 0.0, 1.0, out=coherence)
    return OrientationField(theta=theta, coherence=coherence)


def orientation_from_image(img, params=OrientationParams()):
    """Structure tensor followed by the angle formula (no pre-filtering)."""
    return orientation(structure_tensor(img, params))


def field_from_image(img, coherence_params=CoherenceParams(), orientation_params=OrientationParams()):
    """Full pipeline: shock filter the image, then estimate orientations."""
    return orientation_from_image(shock_iterate(img, coherence_params), orientation_params)


class OrientationFieldEstimator(BaseEstimator, TransformerMixin):
    """Transformer from intensity image to OrientationField.

    With with_shock=True, transform runs the coherence shock filter first
    (the full pipeline); otherwise plain structure-tensor orientation.
    """

    def __init__(self, k_delta=3, k_avg=5, with_shock=False,
                 shock_k_delta=7, shock_k_e=11, shock_k_m=3,
                 shock_c_blend=0.9, shock_iterations=3):
        self.k_delta = k_delta
        self.k_avg = k_avg
        self.with_shock = with_shock
        self.shock_k_delta = shock_k_delta
        self.shock_k_e = shock_k_e
        self.shock_k_m = shock_k_m
        self.shock_c_blend = shock_c_blend
        self.shock_iterations = shock_iterations

    def fit(self, X=None, y=None):
        """Stateless; present for estimator-API compatibility."""
        return self

    def transform(self, X):
        params = OrientationParams(k_delta=self.k_delta, k_avg=self.k_avg)
        if self.with_shock:
            shock = CoherenceParams(
                k_delta=self.shock_k_delta,
                k_e=self.shock_k_e,
                k_m=self.shock_k_m,
                c_blend=self.shock_c_blend,
                iterations=self.shock_iterations,
            )
            return field_from_image(X, shock, params)
        return orientation_from_image(X, params)
