import sys
from pathlib import Path

import numpy as np
import pytest

from grasstri import SpaceParams

sys.path.insert(0, str(Path(__file__).parent))

SPACES = [SpaceParams(1, 1), SpaceParams(2, 1), SpaceParams(2, 2)]


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture(params=SPACES, ids=lambda s: f"Gr{s.m}C{s.n}")
def space(request):
    return request.param
