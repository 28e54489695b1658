"""Shared fixtures for the test suite."""

import numpy as np
import pytest

from nnlslab.grid import FrequencyGrid, forward_transform


@pytest.fixture
def grid():
    return FrequencyGrid(256, 40.0)


@pytest.fixture
def gaussian(grid):
    x = grid.points
    return forward_transform(np.exp(-x * x / 2.0).astype(complex), grid)


def random_field(grid, seed, decay=2.0):
    """Seed-fixed random field with polynomially decaying spectrum."""
    rng = np.random.default_rng(seed)
    xi = grid.frequencies
    c = rng.standard_normal(grid.n_modes) + 1j * rng.standard_normal(grid.n_modes)
    from nnlslab.grid import SpectralField

    return SpectralField(grid, c / (1.0 + np.abs(xi)) ** decay)
