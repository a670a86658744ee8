import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("gaugekit", max_examples=40, deadline=None)
settings.load_profile("gaugekit")


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(20240611))
