import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240915)


def random_complex(rng, n, count=1):
    z = rng.standard_normal((n, count)) + 1j * rng.standard_normal((n, count))
    return z[:, 0] if count == 1 else z
