import os

import numpy as np
import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA_DIR = os.path.join(ROOT, "data")


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def h2_path():
    return os.path.join(DATA_DIR, "h2_sto3g.fcidump")


@pytest.fixture
def toy_tc_path():
    return os.path.join(DATA_DIR, "toy_tc_2orb.fcidump-tc")


@pytest.fixture
def rng():
    return np.random.default_rng(20240117)
