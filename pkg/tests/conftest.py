import pytest

from dfcurve.spectral import default_mask_set
from dfcurve.textures import synthetic_scene


@pytest.fixture(scope="session")
def masks128():
    return default_mask_set(128, 128)


@pytest.fixture(scope="session")
def scene128():
    return synthetic_scene(0)
