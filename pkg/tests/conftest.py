import os

import pytest

from voxelflight import read_shape_file

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture
def reference_flyer():
    return read_shape_file(os.path.join(FIXTURES, "reference_flyer.shape"))


@pytest.fixture
def fixtures_dir():
    return FIXTURES
