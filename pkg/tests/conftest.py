import numpy as np
import pytest

from chromadel.core import validate_chromatic_set


def random_cloud(n, d, s, seed, spread=1.0):
    """Generic random cloud; degenerate configurations have measure zero."""
    rng = np.random.default_rng(seed)
    pts = rng.random((n, d)) * spread
    colours = rng.integers(0, s + 1, size=n)
    while len(set(colours.tolist())) < s + 1:
        colours = rng.integers(0, s + 1, size=n)
    return validate_chromatic_set(pts, colours.tolist())


# golden configurations used across modules

FLIP_POINTS = [(0.6, 0.8), (0.4, 0.15), (0.75, -0.05), (0.95, 0.15)]
FLIP_EXTRA = (0.6, 0.45)

TRAPEZIUM = [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 2.0)]
TRAPEZIUM_COLOURS = [0, 0, 1, 1]

TETRA_POINTS = [(3.0, 1.0), (2.0, -2.0), (2.0, 3.0), (1.0, 4.0)]
TETRA_COLOURS = [0, 0, 0, 1]

SQUARE_CORNERS = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]


@pytest.fixture
def flip_cloud():
    return validate_chromatic_set(FLIP_POINTS, [0, 0, 0, 0])


@pytest.fixture
def tetra_cloud():
    return validate_chromatic_set(TETRA_POINTS, TETRA_COLOURS)


@pytest.fixture
def square_cloud():
    return validate_chromatic_set(SQUARE_CORNERS, [0, 0, 0, 0])
