# backend/conftest.py
import os
import sys

import numpy as np
import pytest
from hypothesis import settings as hypothesis_settings

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from latmin.lattice_green import LatticeBasis  # noqa: E402
from latmin.modular_core import DEFAULT_BUDGET  # noqa: E402

hypothesis_settings.register_profile("latmin", derandomize=True, max_examples=60, deadline=None)
hypothesis_settings.load_profile("latmin")


@pytest.fixture
def budget():
    return DEFAULT_BUDGET


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def square_basis():
    return LatticeBasis.unit_area(1j)


@pytest.fixture
def hex_basis():
    return LatticeBasis.unit_area(complex(0.5, np.sqrt(3.0) / 2.0))


@pytest.fixture
def skew_basis():
    return LatticeBasis.unit_area(0.3 + 1.1j)
