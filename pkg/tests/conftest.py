import numpy as np
import pytest

from hairflow.model import OrganizedCloud


@pytest.fixture
def flat_cloud():
    """8x8 plane at z = 1 m, 1 cm pixel pitch, every pixel valid."""

    def make(h=8, w=8, z=1.0, pitch=0.01):
        xs = (np.arange(w) - w / 2.0) * pitch
        ys = (np.arange(h) - h / 2.0) * pitch
        gx, gy = np.meshgrid(xs, ys)
        pts = np.stack([gx, gy, np.full_like(gx, z)], axis=2)
        return OrganizedCloud(points=pts, valid=np.ones((h, w), dtype=bool))

    return make


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
