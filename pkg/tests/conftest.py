# tests/conftest.py

import sys
import os

import numpy as np
import pytest

# Get the absolute path to the project root
PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))

# Define the src directory path
SRC_PATH = os.path.join(PROJECT_ROOT, 'src')

# Add src to sys.path if it's not already present
if SRC_PATH not in sys.path:
    sys.path.insert(0, SRC_PATH)

from data_validation import IntegrationConfig  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def quadrature_cfg():
    return IntegrationConfig(method="quadrature")


@pytest.fixture
def mc_cfg():
    return IntegrationConfig(method="monte_carlo", samples=200_000, seed=11)
