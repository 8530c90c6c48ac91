import numpy as np
import pytest

from wpbusn.config import Deployment


@pytest.fixture
def deployment():
    return Deployment()


@pytest.fixture
def scenario(deployment):
    return deployment.sample(7)


def complex_normal(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
