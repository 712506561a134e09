# conftest.py
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from homscope.biphoton import gaussian_amplitude  # noqa: E402
from homscope.sfgrid import FrequencyGrid  # noqa: E402


@pytest.fixture
def wide_grid():
    """Step 0.125 over [-16, 16); comfortably holds a width-1 Gaussian"""
    return FrequencyGrid(256, 0.0, 32.0)


@pytest.fixture
def gaussian(wide_grid):
    return gaussian_amplitude(wide_grid, 0.0, 1.0)


@pytest.fixture
def pm_grid():
    """Grid shared by f+ and f- in the exact HOM / Wigner correspondence"""
    return FrequencyGrid(64, 0.0, 8.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
