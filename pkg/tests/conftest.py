import numpy as np
import pytest

from trajkit.dataio import SHAPE_PRESETS, generate_synthetic, random_timing_spec
from trajkit.model import Trajectory


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def unit_line():
    return Trajectory([0.0, 1.0], [[0.0, 0.0], [1.0, 0.0]])


@pytest.fixture
def paused_line():
    # A line traced with a 2-second full stop at the midpoint.
    return Trajectory(
        [0.0, 1.0, 2.0, 3.0, 4.0],
        [[0.0, 0.0], [0.5, 0.0], [0.5, 0.0], [0.5, 0.0], [1.0, 0.0]],
    )


def random_synthetic(rng, index=0, noise=0.0, sample_rate=50.0):
    shapes = list(SHAPE_PRESETS.values())
    return generate_synthetic(shapes[index % len(shapes)], random_timing_spec(rng), sample_rate, noise)


def random_polyline_trajectory(rng, n=10, d=2):
    times = np.sort(rng.uniform(0.0, 10.0, n))
    while np.any(np.diff(times) <= 0):
        times = np.sort(rng.uniform(0.0, 10.0, n))
    return Trajectory(times, rng.normal(size=(n, d)))
