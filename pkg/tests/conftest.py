import os

import pytest


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    """Session-local calibration cache so tests never touch the user cache."""
    path = tmp_path_factory.mktemp("msalab-cache")
    os.environ["MSALAB_CACHE_DIR"] = str(path)
    return path


@pytest.fixture(scope="session")
def calibration(cache_dir):
    from msalab.calibration import get_calibration

    return get_calibration()
