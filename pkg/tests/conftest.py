"""
Shared fixtures for the rothsq test-suite
"""

import numpy as np
import pytest

from rothsq.core.counting import Equation
from rothsq.core.majorant import WParams


@pytest.fixture
def small_params() -> WParams:
    """X = 100, w = 3: W = 24, b2 = 23, sigma = 8, N_b = 417"""
    return WParams.default(100, 3)


@pytest.fixture
def quintic() -> Equation:
    return Equation((1, 1, 1, 1, -4))


@pytest.fixture
def quartic() -> Equation:
    return Equation((1, 1, -1, -1))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)
