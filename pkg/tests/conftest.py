import numpy as np
import pytest

from pfrsim.channel import ChannelParams
from pfrsim.geometry import build_layout


@pytest.fixture(scope="session")
def layout37():
    return build_layout(rings=3, cell_radius=1000.0)


@pytest.fixture(scope="session")
def params():
    return ChannelParams()


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
